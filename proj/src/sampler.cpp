#include "ssvlab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssvlab/stable_cdf.hpp"

namespace ssv {

namespace {

// Slow-varying tail expression T(t) = (1 + log t)^beta t^-alpha on the log
// scale: log T = beta log(1 + s) - alpha s with s = log t.
double sv_log_tail(double alpha, double beta, double s) {
    return beta * std::log1p(s) - alpha * s;
}

// Smallest s0 >= 0 such that T is a valid tail (nonincreasing and <= 1) on
// [exp(s0), inf). For beta <= alpha that is s0 = 0; otherwise the root of
// log T = 0 beyond the turning point s* = beta/alpha - 1.
double sv_support_floor_log(double alpha, double beta) {
    if (beta <= alpha) return 0.0;
    double lo = beta / alpha - 1.0;
    double hi = lo + 1.0;
    while (sv_log_tail(alpha, beta, hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sv_log_tail(alpha, beta, mid) > 0.0 ? lo : hi) = mid;
    }
    return hi;
}

// Inverts T(t) = u for t >= t0; monotone in s on [s0, inf).
double sv_invert_tail(double alpha, double beta, double s0, double u) {
    const double target = std::log(u);
    double lo = s0;
    if (sv_log_tail(alpha, beta, lo) <= target) return std::exp(lo);
    double hi = std::max(s0 + 1.0, (beta * std::log1p(std::max(s0, 1.0)) - target) / alpha);
    while (sv_log_tail(alpha, beta, hi) > target) hi = 2.0 * hi + 1.0;
    // Newton with bisection safeguard.
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const double f = sv_log_tail(alpha, beta, s) - target;
        if (f > 0.0) lo = s; else hi = s;
        const double fp = beta / (1.0 + s) - alpha;
        double snew = s - f / fp;
        if (!(snew > lo && snew < hi)) snew = 0.5 * (lo + hi);
        if (std::abs(snew - s) <= 1e-15 * (1.0 + std::abs(s))) { s = snew; break; }
        s = snew;
    }
    return std::exp(s);
}

// Chambers-Mallows-Stuck draw of the standard symmetric alpha-stable law.
double cms_standard_stable(double alpha, CounterRng& rng) {
    const double theta = M_PI * (rng.uniform_oo() - 0.5);
    const double w = rng.exponential();
    if (alpha == 1.0) return std::tan(theta);
    const double ct = std::cos(theta);
    const double a = std::sin(alpha * theta) / std::pow(ct, 1.0 / alpha);
    const double b = std::pow(std::cos((1.0 - alpha) * theta) / w, (1.0 - alpha) / alpha);
    return a * b;
}

// E[x^2 1{|x| <= tau}] via int_0^tau 2 t (P(|x|>t) - P(|x|>tau)) dt. Below
// the support floor the tail is identically 1, so that piece is closed form;
// the rest integrates in log coordinates where the integrand is smooth.
template <typename TailFn>
double truncated_raw_second_moment_quad(TailFn tail, double floor, double tau) {
    const double tail_tau = tail(tau);
    static const double nodes[8] = {0.0, 0.2011940939974345, 0.3941513470775634,
                                    0.5709721726085388, 0.7244177313601701,
                                    0.8482065834104272, 0.9372733924007060,
                                    0.9879925180204854};
    static const double wts[8] = {0.2025782419255613, 0.1984314853271116,
                                  0.1861610000155622, 0.1662692058169939,
                                  0.1395706779261543, 0.1071592204671719,
                                  0.0703660474881081, 0.0307532419961173};
    const auto gl = [&](auto f, double a, double b) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double s = wts[0] * f(mid);
        for (int i = 1; i < 8; ++i)
            s += wts[i] * (f(mid + half * nodes[i]) + f(mid - half * nodes[i]));
        return s * half;
    };

    double total = 0.0;
    double lo = floor;
    if (floor > 0.0) {
        if (floor >= tau) return tau * tau * (1.0 - tail_tau);
        total += floor * floor * (1.0 - tail_tau);
    } else {
        // Smooth near the origin; linear panels up to 1 (or tau).
        lo = std::min(1.0, tau);
        const auto f = [&](double t) { return 2.0 * t * (tail(t) - tail_tau); };
        const int panels = 16;
        for (int p = 0; p < panels; ++p)
            total += gl(f, lo * p / panels, lo * (p + 1) / panels);
        if (lo >= tau) return total;
    }
    // Log-coordinate panels over [lo, tau].
    const auto g = [&](double s) {
        const double t = std::exp(s);
        return 2.0 * t * t * (tail(t) - tail_tau);
    };
    const double sa = std::log(lo), sb = std::log(tau);
    const int panels = 96;
    for (int p = 0; p < panels; ++p)
        total += gl(g, sa + (sb - sa) * p / panels, sa + (sb - sa) * (p + 1) / panels);
    return total;
}

} // namespace

TailLaw TailLaw::symmetric_pareto(double alpha) {
    TailLaw law{TailKind::SymmetricPareto, alpha, 1.0, 0.0};
    law.validate();
    return law;
}

TailLaw TailLaw::alpha_stable(double alpha, double sigma) {
    TailLaw law{TailKind::AlphaStable, alpha, sigma, 0.0};
    law.validate();
    return law;
}

TailLaw TailLaw::slow_varying_pareto(double alpha, double beta) {
    TailLaw law{TailKind::SlowVaryingPareto, alpha, 1.0, beta};
    law.validate();
    return law;
}

void TailLaw::validate() const {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("TailLaw: alpha must lie in (0, 2), got " + std::to_string(alpha));
    if (kind == TailKind::AlphaStable && !(sigma > 0.0))
        throw std::invalid_argument("TailLaw: stable scale sigma must be positive");
}

double TailLaw::support_floor() const {
    switch (kind) {
        case TailKind::SymmetricPareto: return 1.0;
        case TailKind::AlphaStable: return 0.0;
        case TailKind::SlowVaryingPareto: return std::exp(sv_support_floor_log(alpha, beta));
    }
    return 0.0;
}

double TailLaw::tail_prob(double t) const {
    switch (kind) {
        case TailKind::SymmetricPareto:
            return t <= 1.0 ? 1.0 : std::pow(t, -alpha);
        case TailKind::AlphaStable:
            return stable_abs_tail(alpha, t / sigma);
        case TailKind::SlowVaryingPareto: {
            const double s0 = sv_support_floor_log(alpha, beta);
            if (t <= std::exp(s0)) return 1.0;
            return std::exp(sv_log_tail(alpha, beta, std::log(t)));
        }
    }
    return 0.0;
}

double TailLaw::magnitude_from_tail(double u) const {
    switch (kind) {
        case TailKind::SymmetricPareto:
            return std::pow(u, -1.0 / alpha);
        case TailKind::SlowVaryingPareto:
            return sv_invert_tail(alpha, beta, sv_support_floor_log(alpha, beta), u);
        case TailKind::AlphaStable:
            throw std::logic_error("magnitude_from_tail: no closed tail inverse for AlphaStable");
    }
    return 0.0;
}

double TailLaw::truncated_second_moment(double tau) const {
    const double mass = cdf_abs(tau);
    if (!(mass > 0.0)) throw std::invalid_argument("truncated_second_moment: no mass below tau");
    if (kind == TailKind::SymmetricPareto) {
        if (tau <= 1.0) throw std::invalid_argument("truncated_second_moment: tau must exceed 1 for Pareto");
        const double raw = alpha * (std::pow(tau, 2.0 - alpha) - 1.0) / (2.0 - alpha);
        return raw / mass;
    }
    const auto tail = [this](double t) { return tail_prob(t); };
    return truncated_raw_second_moment_quad(tail, support_floor(), tau) / mass;
}

std::string TailLaw::name() const {
    switch (kind) {
        case TailKind::SymmetricPareto: return "pareto";
        case TailKind::AlphaStable: return "stable";
        case TailKind::SlowVaryingPareto: return "slowvarying";
    }
    return "?";
}

void TruncationScheme::validate() const {
    if (!(delta > 1.0)) throw std::invalid_argument("TruncationScheme: delta must exceed 1");
    if (!(c_u > 0.0)) throw std::invalid_argument("TruncationScheme: Cu must be positive");
    if (regime == Regime::Upper && !(b > 0.0 && b < 1.0))
        throw std::invalid_argument("TruncationScheme: b must lie in (0, 1)");
    if (regime == Regime::Lower && !(c > 0.0))
        throw std::invalid_argument("TruncationScheme: c must be positive");
}

namespace {

// base^(alpha e) value prescribed by the scheme at a given base size.
double scheme_rhs(const TruncationScheme& s, double base) {
    const double lb = std::log(base);
    if (s.regime == Regime::Upper) return s.b * lb / (s.delta * s.c_u);
    return s.c * lb * lb * lb * lb;
}

// epsilon-tilde in (0, 1/alpha) requires 1 < rhs < base.
bool scheme_admissible(const TruncationScheme& s, double base) {
    const double rhs = scheme_rhs(s, base);
    return rhs > 1.0 && rhs < base;
}

} // namespace

std::uint64_t minimal_admissible_base(const TruncationScheme& scheme, double alpha) {
    (void)alpha; // the admissibility window does not depend on alpha
    const std::uint64_t cap = (1ULL << 62);
    std::uint64_t hi = 3;
    while (hi < cap && !scheme_admissible(scheme, static_cast<double>(hi))) hi *= 2;
    if (hi >= cap) throw std::runtime_error("minimal_admissible_base: none below 2^62");
    // The admissible set is upward-closed past the first admissible point for
    // any base >= 55 where log^4/base is decreasing; fall back to a linear
    // scan below that.
    std::uint64_t lo = hi / 2;
    if (hi <= 4096) {
        for (std::uint64_t m = 3; m <= hi; ++m)
            if (scheme_admissible(scheme, static_cast<double>(m))) return m;
    }
    while (lo + 1 < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (scheme_admissible(scheme, static_cast<double>(mid)) ? hi : lo) = mid;
    }
    return hi;
}

Threshold threshold(const TruncationScheme& scheme, const TailLaw& law, int n, int N) {
    scheme.validate();
    law.validate();
    if (n < 1 || N < 1) throw std::invalid_argument("threshold: dimensions must be positive");
    const std::uint64_t base = scheme.base == ThresholdBase::Cols ? static_cast<std::uint64_t>(n)
                                                                  : static_cast<std::uint64_t>(N);
    const double fb = static_cast<double>(base);
    if (!scheme_admissible(scheme, fb)) {
        const std::uint64_t min_base = minimal_admissible_base(scheme, law.alpha);
        throw SizingError("threshold: base " + std::to_string(base) +
                              " too small for the " + scheme.regime_name() +
                              " regime; minimal admissible base is " + std::to_string(min_base),
                          min_base);
    }
    const double rhs = scheme_rhs(scheme, fb);
    Threshold th;
    th.base_size = base;
    th.epsilon_tilde = std::log(rhs) / (law.alpha * std::log(fb));
    th.tau = std::pow(fb, 1.0 / law.alpha) * std::pow(rhs, -1.0 / law.alpha);
    return th;
}

double small_entry_prob(const TailLaw& law, double tau) {
    if (law.kind == TailKind::SymmetricPareto && tau < 1.0)
        throw std::invalid_argument("small_entry_prob: tau below 1 degenerates the Pareto label law");
    const double p = law.cdf_abs(tau);
    if (!(p > 0.0 && p < 1.0) && law.kind != TailKind::SymmetricPareto) {
        if (!(p > 0.0)) throw std::invalid_argument("small_entry_prob: label probability degenerates to 0");
    }
    return p;
}

LabelMatrix sample_label_matrix(const TailLaw& law, double tau, int N, int n, std::uint64_t key) {
    const double p = small_entry_prob(law, tau);
    const std::uint64_t k = role_key(key, StreamRole::Label);
    LabelMatrix psi;
    psi.bits.resize(N, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < N; ++i) {
            CounterRng rng = CounterRng::for_entry(k, static_cast<std::uint32_t>(i),
                                                   static_cast<std::uint32_t>(j));
            psi.bits(i, j) = rng.uniform_oo() < p ? 1 : 0;
        }
    }
    return psi;
}

double sample_entry(const TailLaw& law, CounterRng& rng) {
    switch (law.kind) {
        case TailKind::SymmetricPareto: {
            const double u = rng.uniform_oc();
            return rng.sign() * std::pow(u, -1.0 / law.alpha);
        }
        case TailKind::AlphaStable:
            return law.sigma * cms_standard_stable(law.alpha, rng);
        case TailKind::SlowVaryingPareto: {
            const double u = rng.uniform_oc();
            return rng.sign() * law.magnitude_from_tail(u);
        }
    }
    return 0.0;
}

double sample_conditional(const TailLaw& law, double tau, Side side, CounterRng& rng) {
    const double p = law.cdf_abs(tau);
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("sample_conditional: conditioning probability is degenerate");
    switch (law.kind) {
        case TailKind::SymmetricPareto: {
            const double u = rng.uniform_oc();
            double mag;
            if (side == Side::Large) {
                // Conditional Pareto above tau is Pareto rescaled by tau.
                mag = tau * std::pow(u, -1.0 / law.alpha);
            } else {
                const double tail_tau = std::pow(tau, -law.alpha);
                mag = std::pow(1.0 - u * (1.0 - tail_tau), -1.0 / law.alpha);
            }
            return rng.sign() * mag;
        }
        case TailKind::SlowVaryingPareto: {
            const double u = rng.uniform_oc();
            const double tail_tau = law.tail_prob(tau);
            double mag;
            if (side == Side::Large) {
                mag = law.magnitude_from_tail(u * tail_tau);
            } else {
                mag = law.magnitude_from_tail(1.0 - u * (1.0 - tail_tau));
                mag = std::min(mag, tau);
            }
            return rng.sign() * mag;
        }
        case TailKind::AlphaStable: {
            // Rejection against the unconditional law; expected cost 1/P(side).
            for (long it = 0; it < 100000000L; ++it) {
                const double x = law.sigma * cms_standard_stable(law.alpha, rng);
                if (side == Side::Small ? std::abs(x) <= tau : std::abs(x) >= tau) return x;
            }
            throw std::runtime_error("sample_conditional: rejection sampling exhausted its budget");
        }
    }
    return 0.0;
}

namespace {

template <typename Fn>
Mat fill_matrix(int N, int n, std::uint64_t key, Fn draw) {
    Mat m(N, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < N; ++i) {
            CounterRng rng = CounterRng::for_entry(key, static_cast<std::uint32_t>(i),
                                                   static_cast<std::uint32_t>(j));
            m(i, j) = draw(rng);
        }
    }
    return m;
}

} // namespace

Mat sample_matrix(const TailLaw& law, int N, int n, std::uint64_t key) {
    return fill_matrix(N, n, role_key(key, StreamRole::Entry),
                       [&law](CounterRng& r) { return sample_entry(law, r); });
}

Mat sample_conditional_matrix(const TailLaw& law, double tau, Side side, int N, int n,
                              std::uint64_t key) {
    const StreamRole role = side == Side::Small ? StreamRole::Small : StreamRole::Large;
    return fill_matrix(N, n, role_key(key, role),
                       [&](CounterRng& r) { return sample_conditional(law, tau, side, r); });
}

Mat sample_gaussian_matrix(int N, int n, std::uint64_t key) {
    return fill_matrix(N, n, role_key(key, StreamRole::Entry),
                       [](CounterRng& r) { return r.gaussian(); });
}

} // namespace ssv
