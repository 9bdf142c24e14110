#include "ssvlab/anticoncentration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include <Eigen/Dense>

namespace ssv {

ConcentrationEstimate levy_concentration(const std::vector<double>& sorted_samples, double h) {
    if (sorted_samples.size() < 2)
        throw std::invalid_argument("levy_concentration: need at least two samples");
    if (!(h > 0.0)) throw std::invalid_argument("levy_concentration: h must be positive");
    if (!std::is_sorted(sorted_samples.begin(), sorted_samples.end()))
        throw std::invalid_argument("levy_concentration: samples must be sorted");
    const std::size_t k = sorted_samples.size();
    // The sup over centers is attained with the window's left edge at a
    // sample point: count samples in [x_j, x_j + 2h].
    std::size_t best = 0;
    std::size_t hi = 0;
    for (std::size_t j = 0; j < k; ++j) {
        if (hi < j) hi = j;
        while (hi + 1 < k && sorted_samples[hi + 1] <= sorted_samples[j] + 2.0 * h) ++hi;
        best = std::max(best, hi - j + 1);
    }
    ConcentrationEstimate est;
    est.h = h;
    est.sample_size = k;
    est.q_hat = static_cast<double>(best) / static_cast<double>(k);
    est.std_error = std::sqrt(est.q_hat * (1.0 - est.q_hat) / static_cast<double>(k));
    return est;
}

RogozinReport rogozin_check(
    const std::vector<std::pair<std::function<double(CounterRng&)>, double>>& components,
    double h, int trials, std::uint64_t key) {
    if (components.empty()) throw std::invalid_argument("rogozin_check: no components");
    double hmax = 0.0;
    for (const auto& [fn, hj] : components) hmax = std::max(hmax, hj);
    if (h < hmax) throw std::invalid_argument("rogozin_check: h must dominate every component window");

    RogozinReport rep;
    rep.k = static_cast<int>(components.size());
    double bracket = 0.0;
    for (std::size_t j = 0; j < components.size(); ++j) {
        std::vector<double> draws(trials);
        const std::uint64_t ck = derive_key(key, 1000 + j);
        for (int t = 0; t < trials; ++t) {
            CounterRng rng(ck, static_cast<std::uint64_t>(t));
            draws[t] = components[j].first(rng);
        }
        std::sort(draws.begin(), draws.end());
        const double qj = levy_concentration(draws, components[j].second).q_hat;
        rep.component_q.push_back(qj);
        bracket += (1.0 - qj) * components[j].second * components[j].second;
    }
    std::vector<double> sums(trials);
    const std::uint64_t sk = derive_key(key, 2);
    for (int t = 0; t < trials; ++t) {
        double s = 0.0;
        for (std::size_t j = 0; j < components.size(); ++j) {
            CounterRng rng(derive_key(sk, j), static_cast<std::uint64_t>(t));
            s += components[j].first(rng);
        }
        sums[t] = s;
    }
    std::sort(sums.begin(), sums.end());
    rep.lhs = levy_concentration(sums, h).q_hat;
    rep.rhs_bracket = bracket > 0.0 ? h / std::sqrt(bracket) : INFINITY;
    rep.c_hat = rep.rhs_bracket > 0.0 ? rep.lhs / rep.rhs_bracket : 0.0;
    return rep;
}

double ball_concentration(const std::vector<Vec>& points, double radius,
                          std::size_t max_centers) {
    if (points.empty()) throw std::invalid_argument("ball_concentration: empty cloud");
    const std::size_t k = points.size();
    const std::size_t centers = max_centers == 0 ? k : std::min(max_centers, k);
    const std::size_t stride = std::max<std::size_t>(1, k / centers);
    const double r2 = radius * radius;
    std::size_t best = 0;
    for (std::size_t c = 0; c < k; c += stride) {
        std::size_t count = 0;
        for (const auto& p : points)
            if ((p - points[c]).squaredNorm() <= r2) ++count;
        best = std::max(best, count);
    }
    return static_cast<double>(best) / static_cast<double>(k);
}

ProjectionReport projection_anticoncentration(const std::function<double(CounterRng&)>& coord,
                                              double h, double tau, int m, int d, int ell,
                                              int trials, std::uint64_t key) {
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("projection_anticoncentration: tau must lie in (0, 1)");
    if (d > m || d < 1 || ell < 1)
        throw std::invalid_argument("projection_anticoncentration: need 1 <= d <= m, ell >= 1");

    ProjectionReport rep;
    rep.m = m;
    rep.d = d;
    rep.ell = ell;
    rep.radius = h * std::sqrt(static_cast<double>(d)) / static_cast<double>(ell);

    // Verify the coordinate anti-concentration precondition first.
    {
        std::vector<double> draws(std::max(trials, 2000));
        const std::uint64_t ck = derive_key(key, 11);
        for (std::size_t t = 0; t < draws.size(); ++t) {
            CounterRng rng(ck, t);
            draws[t] = coord(rng);
        }
        std::sort(draws.begin(), draws.end());
        rep.coord_q = levy_concentration(draws, h).q_hat;
        if (rep.coord_q > 1.0 - tau + 3.0 / std::sqrt(static_cast<double>(draws.size())))
            throw std::invalid_argument(
                "projection_anticoncentration: coordinate concentration exceeds 1 - tau");
    }

    // Seeded orthonormal frame spanning a random d-dimensional subspace.
    Mat frame(m, d);
    {
        CounterRng rng(derive_key(key, 12), 0);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < m; ++i) frame(i, j) = rng.gaussian();
        Eigen::HouseholderQR<Mat> qr(frame);
        frame = Mat(qr.householderQ()).leftCols(d);
    }

    std::vector<Vec> cloud;
    cloud.reserve(trials);
    const std::uint64_t xk = derive_key(key, 13);
    for (int t = 0; t < trials; ++t) {
        Vec x(m);
        for (int i = 0; i < m; ++i) {
            CounterRng rng = CounterRng::for_entry(xk, static_cast<std::uint32_t>(t),
                                                   static_cast<std::uint32_t>(i));
            x(i) = coord(rng);
        }
        cloud.push_back(frame.transpose() * x);
    }
    rep.estimate = ball_concentration(cloud, rep.radius, 256);
    rep.reference = std::pow(1.0 / std::sqrt(static_cast<double>(ell) * tau),
                             static_cast<double>(d) / static_cast<double>(ell));
    return rep;
}

SphereClass classify_sphere_vector(const Vec& y, double theta, int m, int N) {
    const double norm = y.norm();
    if (std::abs(norm - 1.0) > 1e-10)
        throw std::invalid_argument("classify_sphere_vector: input is not a unit vector");
    if (m < 1 || N < 1) throw std::invalid_argument("classify_sphere_vector: bad parameters");
    const int n = static_cast<int>(y.size());

    SphereClass out;
    if (y.cwiseAbs().maxCoeff() >= theta) {
        out.kind = SphereClassKind::Peaky;
        int idx = 0;
        y.cwiseAbs().maxCoeff(&idx);
        out.witness = {idx};
        out.witness_valid = std::abs(y(idx)) >= theta;
        return out;
    }

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&y](int a, int b) { return std::abs(y(a)) > std::abs(y(b)); });

    const int mm = std::min(m, n);
    double top_mass = 0.0;
    for (int r = 0; r < mm; ++r) top_mass += y(order[r]) * y(order[r]);
    if (std::sqrt(top_mass) >= 0.5) {
        out.kind = SphereClassKind::AlmostSparse;
        out.witness.assign(order.begin(), order.begin() + mm);
        out.witness_valid = true;
        return out;
    }

    // Generic: greedy among coordinates under the sup-norm cap.
    const double cap = 1.0 / std::floor(std::pow(static_cast<double>(N), 0.25));
    out.kind = SphereClassKind::Generic;
    double mass = 0.0;
    for (int r = 0; r < n && static_cast<int>(out.witness.size()) < mm; ++r) {
        if (std::abs(y(order[r])) <= cap) {
            out.witness.push_back(order[r]);
            mass += y(order[r]) * y(order[r]);
        }
    }
    const double bound = 0.5 * std::sqrt(static_cast<double>(mm) / static_cast<double>(n));
    out.witness_valid = !out.witness.empty() && std::sqrt(mass) >= bound;
    return out;
}

namespace {

std::string encode_point(const Vec& p, double pitch) {
    std::string s;
    for (int i = 0; i < p.size(); ++i) {
        if (p(i) == 0.0) continue;
        const auto k = static_cast<std::int32_t>(std::lround(p(i) / pitch));
        const auto idx = static_cast<std::uint32_t>(i);
        for (int b = 0; b < 4; ++b) s.push_back(static_cast<char>((idx >> (8 * b)) & 0xff));
        const auto ku = static_cast<std::uint32_t>(k + (1 << 30));
        for (int b = 0; b < 4; ++b) s.push_back(static_cast<char>((ku >> (8 * b)) & 0xff));
    }
    return s;
}

struct NetIndex {
    std::unordered_set<std::string> keys;
};

// One index per net, keyed off the net's address. Rebuilt lazily; nets are
// immutable after construction.
const NetIndex& index_for(const SparseNet& net) {
    static thread_local const SparseNet* cached = nullptr;
    static thread_local NetIndex idx;
    if (cached != &net || idx.keys.size() != net.points.size()) {
        idx.keys.clear();
        for (const auto& p : net.points) idx.keys.insert(encode_point(p, net.grid_pitch));
        cached = &net;
    }
    return idx;
}

} // namespace

SparseNet sparse_net(int n, int m, double epsilon, std::uint64_t budget) {
    if (n < m || m < 1) throw std::invalid_argument("sparse_net: need n >= m >= 1");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("sparse_net: epsilon must lie in (0, 1]");

    // Cardinality guard before any enumeration.
    double log_card = m * std::log(2.0 * std::sqrt(static_cast<double>(m)) / epsilon + 1.0);
    for (int i = 0; i < m; ++i)
        log_card += std::log(static_cast<double>(n - i)) - std::log(static_cast<double>(i + 1));
    if (log_card > std::log(static_cast<double>(budget)))
        throw std::runtime_error("sparse_net: cardinality estimate exceeds the budget");

    SparseNet net;
    net.n = n;
    net.m = m;
    net.epsilon = epsilon;
    net.grid_pitch = epsilon / std::sqrt(static_cast<double>(m));
    const int kmax = static_cast<int>(std::floor(1.0 / net.grid_pitch));

    std::unordered_set<std::string> seen;
    std::vector<int> support(m);
    Vec point = Vec::Zero(n);

    // Enumerate size-m supports, then grid points on each support inside the
    // unit ball.
    const std::function<void(int, int)> supports = [&](int pos, int start) {
        if (pos == m) {
            const std::function<void(int, double)> grid = [&](int slot, double norm2) {
                if (slot == m) {
                    const std::string key = encode_point(point, net.grid_pitch);
                    if (seen.insert(key).second) net.points.push_back(point);
                    return;
                }
                for (int k = -kmax; k <= kmax; ++k) {
                    const double v = k * net.grid_pitch;
                    const double nn = norm2 + v * v;
                    if (nn > 1.0 + 1e-9) continue;
                    point(support[slot]) = v;
                    grid(slot + 1, nn);
                    point(support[slot]) = 0.0;
                }
            };
            grid(0, 0.0);
            return;
        }
        for (int i = start; i < n; ++i) {
            support[pos] = i;
            supports(pos + 1, i + 1);
        }
    };
    supports(0, 0);
    return net;
}

bool net_covers(const SparseNet& net, const Vec& probe, double* best, double norm_floor) {
    const double pitch = net.grid_pitch;
    const double tol = net.epsilon + 1e-12;
    if (norm_floor < 0.0) norm_floor = std::max(0.0, probe.norm() - net.epsilon);
    const double floor_tol = norm_floor * (1.0 - 1e-12);
    double best_dist = INFINITY;

    // Constructive candidate: truncate each probe coordinate toward zero onto
    // the grid. For probes with support size <= m the result is a net point,
    // within epsilon in the restricted metric and above the norm floor.
    int supp = 0;
    for (int i = 0; i < probe.size(); ++i)
        if (probe(i) != 0.0) ++supp;
    if (supp <= net.m) {
        Vec cand = Vec::Zero(probe.size());
        for (int i = 0; i < probe.size(); ++i)
            cand(i) = std::trunc(probe(i) / pitch) * pitch;
        if (cand.norm() >= floor_tol && index_for(net).keys.count(encode_point(cand, pitch)) > 0) {
            double d2 = 0.0;
            for (int i = 0; i < probe.size(); ++i)
                if (cand(i) != 0.0) d2 += (probe(i) - cand(i)) * (probe(i) - cand(i));
            best_dist = std::sqrt(d2);
            if (best_dist <= tol) {
                if (best) *best = best_dist;
                return true;
            }
        }
    }

    for (const auto& p : net.points) {
        if (p.norm() < floor_tol) continue;
        double d2 = 0.0;
        for (int i = 0; i < p.size(); ++i)
            if (p(i) != 0.0) d2 += (probe(i) - p(i)) * (probe(i) - p(i));
        best_dist = std::min(best_dist, std::sqrt(d2));
        if (best_dist <= tol) break;
    }
    if (best) *best = best_dist;
    return best_dist <= tol;
}

} // namespace ssv
