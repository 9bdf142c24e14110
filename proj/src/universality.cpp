#include "ssvlab/universality.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssvlab/spectra.hpp"

namespace ssv {

MatrixParams matrix_params(const NormalizedPair& pair, double epsilon) {
    (void)epsilon; // the deterministic regularizer does not move the parameters
    MatrixParams p;
    const auto& prof = pair.variance_profile;
    const double max_row = prof.rowwise().sum().maxCoeff();
    const double max_col = prof.colwise().sum().maxCoeff();
    p.sigma_param = std::sqrt(std::max(max_row, max_col));
    p.sigma_star = std::sqrt(prof.maxCoeff());
    p.r_param = pair.entry_bound_limit;
    const double d = 2.0 * static_cast<double>(prof.rows() + prof.cols());
    for (double f : {2.0, 8.0, 32.0, 128.0}) p.t_grid.push_back(std::log(f * d));
    return p;
}

double epsilon_bound(double m_scale, double q, int n, int N, double t, double c_const) {
    if (!(t >= 0.0)) throw std::invalid_argument("epsilon_bound: t must be nonnegative");
    if (t == 0.0) return 0.0;
    const double aspect = static_cast<double>(N) / static_cast<double>(n);
    return c_const * m_scale / std::sqrt(static_cast<double>(n)) * std::sqrt(t) +
           c_const * std::pow(m_scale, 2.0 / 3.0) * std::cbrt(q) * std::pow(t, 2.0 / 3.0) *
               std::cbrt(aspect) +
           c_const * q * t;
}

double empirical_quantile(std::vector<double> values, double level) {
    if (values.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
    std::sort(values.begin(), values.end());
    const double pos = level * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

CouplingReport coupling_experiment(const TailLaw& law, const TruncationScheme& scheme,
                                   int n, int N, int trials, std::uint64_t key,
                                   double c_const, const std::vector<double>& t_grid) {
    if (scheme.regime != Regime::Lower)
        throw std::invalid_argument("coupling_experiment: lower-regime thresholds required");
    CouplingReport rep;
    rep.n = n;
    rep.N = N;
    rep.trials = trials;
    rep.deltas.reserve(trials);
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t tk = derive_key(key, static_cast<std::uint64_t>(t));
        const Decomposition dec = sample_decomposition(law, scheme, n, N, tk);
        const NormalizedPair pair = normalize(dec);
        rep.q = pair.entry_bound_limit;
        rep.m_scale = pair.variance_scale;
        const double st = singular_extremes(pair.total()).sigma_min;
        const double sg = singular_extremes(gaussian_surrogate(pair, tk)).sigma_min;
        rep.sigma_min_t.push_back(st);
        rep.sigma_min_g.push_back(sg);
        rep.deltas.push_back(std::abs(st - sg));
    }
    rep.median_delta = empirical_quantile(rep.deltas, 0.5);

    std::vector<double> grid = t_grid;
    if (grid.empty())
        for (double f : {2.0, 16.0, 64.0, 256.0}) grid.push_back(std::log(f * N));
    for (double t : grid) {
        CouplingCurvePoint pt;
        pt.t = t;
        pt.eps = epsilon_bound(rep.m_scale, rep.q, n, N, t, c_const);
        pt.level = 1.0 - 8.0 * static_cast<double>(N) * std::exp(-t);
        if (pt.level <= 0.0) continue; // vacuous bound at this t
        pt.quantile = empirical_quantile(rep.deltas, pt.level);
        pt.within = pt.quantile <= pt.eps;
        if (!pt.within) ++rep.violations;
        if (pt.eps > 0.0) rep.c_hat = std::max(rep.c_hat, pt.quantile / (pt.eps / c_const));
        rep.epsilon_curve.push_back(pt);
    }
    const double t_med = std::log(16.0 * static_cast<double>(N));
    rep.median_within_eps =
        rep.median_delta <= epsilon_bound(rep.m_scale, rep.q, n, N, t_med, 1.0);
    return rep;
}

HausdorffReport hausdorff_universality(const TailLaw& law, const TruncationScheme& scheme,
                                       int n, int N, double epsilon, int trials,
                                       std::uint64_t key, double spectral_tol) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("hausdorff_universality: epsilon must be positive");
    HausdorffReport rep;
    rep.n = n;
    rep.N = N;
    rep.trials = trials;
    rep.epsilon = epsilon;
    rep.dilation_dim = 2 * (N + n);
    std::vector<double> dhs;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t tk = derive_key(key, static_cast<std::uint64_t>(t));
        const Decomposition dec = sample_decomposition(law, scheme, n, N, tk);
        const NormalizedPair pair = normalize(dec);
        const Mat tmat = pair.total();
        const Mat gmat = gaussian_surrogate(pair, tk);
        const DilationSpectrum dt = dilation_spectrum(tmat, epsilon);
        const DilationSpectrum dg = dilation_spectrum(gmat, epsilon);

        HausdorffTrial row;
        row.d_h = hausdorff_distance(dt.eigenvalues, dg.eigenvalues);
        row.premise = row.d_h <= epsilon;
        row.sigma_min_t = singular_extremes(tmat).sigma_min;
        row.sigma_min_g = singular_extremes(gmat).sigma_min;
        const double slack = spectral_tol * (1.0 + dt.lambda_plus);
        row.lambda_plus_ok = dt.lambda_plus <= dg.lambda_plus + epsilon + slack;
        row.lambda_minus_ok = dt.lambda_minus >= dg.lambda_minus - epsilon - slack;
        row.sigma_chain_ok = row.sigma_min_t >= row.sigma_min_g - 3.0 * epsilon - slack;
        if (row.premise) {
            ++rep.premise_count;
            if (!(row.lambda_plus_ok && row.lambda_minus_ok && row.sigma_chain_ok))
                ++rep.violation_count;
        }
        dhs.push_back(row.d_h);
        rep.rows.push_back(row);
    }
    // Quantile curve against eps(t), failure mass d e^{-t} with d the
    // dilation dimension.
    const double d = static_cast<double>(rep.dilation_dim);
    double q = 0.0, m_scale = 1.0;
    {
        const Decomposition dec = sample_decomposition(law, scheme, n, N, derive_key(key, 0));
        const NormalizedPair p0 = normalize(dec);
        q = p0.entry_bound_limit;
        m_scale = p0.variance_scale;
    }
    for (double f : {2.0, 8.0, 32.0}) {
        const double t = std::log(f * d);
        CouplingCurvePoint pt;
        pt.t = t;
        pt.eps = epsilon_bound(m_scale, q, n, N, t, 1.0);
        pt.level = 1.0 - d * std::exp(-t);
        if (pt.level <= 0.0) continue;
        pt.quantile = empirical_quantile(dhs, pt.level);
        pt.within = pt.quantile <= pt.eps;
        if (pt.eps > 0.0) rep.c_hat = std::max(rep.c_hat, pt.quantile / pt.eps);
        rep.quantile_curve.push_back(pt);
    }
    return rep;
}

} // namespace ssv
