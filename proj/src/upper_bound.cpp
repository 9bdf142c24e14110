#include "ssvlab/upper_bound.hpp"

#include <cmath>
#include <stdexcept>

#include "ssvlab/spectra.hpp"

namespace ssv {

std::vector<int> find_all_ones_columns(const LabelMatrix& labels) {
    std::vector<int> cols;
    for (int j = 0; j < labels.cols(); ++j) {
        bool all = true;
        for (int i = 0; i < labels.rows() && all; ++i) all = labels.bits(i, j) == 1;
        if (all) cols.push_back(j);
    }
    return cols;
}

MinorReport minor_upper_bound(const Decomposition& dec, const Mat& assembled,
                              double bound_constant, double spectral_tol) {
    if (assembled.rows() != dec.rows() || assembled.cols() != dec.cols())
        throw std::invalid_argument("minor_upper_bound: shape mismatch");
    MinorReport rep;
    rep.all_ones_columns = find_all_ones_columns(dec.labels);
    rep.applicable = !rep.all_ones_columns.empty();

    const double alpha = dec.law.alpha;
    const double eps = dec.cutoff.epsilon_tilde;
    const double base = static_cast<double>(dec.cutoff.base_size);
    const double n = static_cast<double>(dec.cols());
    const double p = small_entry_prob(dec.law, dec.cutoff.tau);
    const double p_col = std::pow(p, static_cast<double>(dec.rows()));
    rep.p_no_all_ones_exact = std::pow(1.0 - p_col, n);
    rep.p_no_all_ones_bound =
        std::exp(-n * std::exp(-dec.scheme.delta * dec.scheme.c_u * std::pow(base, alpha * eps)));

    const double scale = std::pow(base, 1.0 / alpha - (1.0 - 0.5 * alpha) * eps);
    rep.bound_value = bound_constant * scale;
    if (!rep.applicable) return rep;

    Mat minor(dec.rows(), static_cast<int>(rep.all_ones_columns.size()));
    for (std::size_t c = 0; c < rep.all_ones_columns.size(); ++c)
        minor.col(static_cast<int>(c)) = dec.small.col(rep.all_ones_columns[c]);
    rep.minor_norm = operator_norm(minor, 1e-12);
    rep.sigma_min = singular_extremes(assembled).sigma_min;
    rep.sigma_le_minor = rep.sigma_min <= rep.minor_norm * (1.0 + spectral_tol) + spectral_tol;
    rep.predicate_holds = rep.minor_norm <= rep.bound_value;
    rep.c_hat = rep.minor_norm / scale;
    return rep;
}

SeginerReport seginer_check(const std::function<double(CounterRng&)>& entry_sampler,
                            int m1, int m2, int q, int trials, std::uint64_t key) {
    if (q <= 0 || q % 2 != 0) throw std::invalid_argument("seginer_check: q must be a positive even integer");
    const double qmax = std::max(2.0, 2.0 * std::log(static_cast<double>(std::max(m1, m2))));
    if (static_cast<double>(q) > qmax)
        throw std::invalid_argument("seginer_check: q exceeds 2 log max(m1, m2)");
    if (trials < 1) throw std::invalid_argument("seginer_check: trials must be positive");

    SeginerReport rep;
    rep.m1 = m1;
    rep.m2 = m2;
    rep.q = q;
    rep.trials = trials;
    double lhs = 0.0, rr = 0.0, rc = 0.0;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t tk = derive_key(key, static_cast<std::uint64_t>(t));
        Mat y(m1, m2);
        for (int j = 0; j < m2; ++j)
            for (int i = 0; i < m1; ++i) {
                CounterRng rng = CounterRng::for_entry(tk, static_cast<std::uint32_t>(i),
                                                       static_cast<std::uint32_t>(j));
                y(i, j) = entry_sampler(rng);
            }
        const double norm = operator_norm(y, 1e-10);
        const double max_row = y.rowwise().norm().maxCoeff();
        const double max_col = y.colwise().norm().maxCoeff();
        lhs += std::pow(norm, q);
        rr += std::pow(max_row, q);
        rc += std::pow(max_col, q);
    }
    rep.lhs = lhs / trials;
    rep.rhs_rows = rr / trials;
    rep.rhs_cols = rc / trials;
    const double denom = rep.rhs_rows + rep.rhs_cols;
    rep.c_hat = denom > 0.0 ? std::pow(rep.lhs / denom, 1.0 / q) : 0.0;
    return rep;
}

} // namespace ssv
