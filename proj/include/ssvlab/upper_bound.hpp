#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ssvlab/decomposition.hpp"

namespace ssv {

/// Result of the all-ones-column minor comparison on one instance.
struct MinorReport {
    std::vector<int> all_ones_columns;
    bool applicable = false;   // at least one all-ones column exists
    double minor_norm = 0.0;   // operator norm of the small matrix restricted to those columns
    double sigma_min = 0.0;    // sigma_min of the assembled matrix
    bool sigma_le_minor = false;
    double bound_value = 0.0;  // C * base^(1/alpha - (1 - alpha/2) eps)
    bool predicate_holds = false; // minor_norm <= bound_value
    double c_hat = 0.0;        // minor_norm / base^(1/alpha - (1 - alpha/2) eps)
    double p_no_all_ones_exact = 0.0; // (1 - p^N)^n
    double p_no_all_ones_bound = 0.0; // exp(-n exp(-delta Cu base^(alpha eps)))
};

/// Column indices whose label column is all ones.
std::vector<int> find_all_ones_columns(const LabelMatrix& labels);

/// Checks sigma_min(assembled) <= ||minor|| on the given decomposition and
/// compares the minor norm against the scheme's threshold scale with the
/// supplied constant. Inapplicable (with the no-column probability reported)
/// when no all-ones column exists.
MinorReport minor_upper_bound(const Decomposition& dec, const Mat& assembled,
                              double bound_constant = 1.0, double spectral_tol = 1e-8);

struct SeginerReport {
    int m1 = 0, m2 = 0, q = 0, trials = 0;
    double lhs = 0.0;      // E ||Y||^q
    double rhs_rows = 0.0; // E max_i ||row_i||^q
    double rhs_cols = 0.0; // E max_j ||col_j||^q
    double c_hat = 0.0;    // (lhs / (rhs_rows + rhs_cols))^(1/q)
};

/// Monte Carlo comparison of both sides of the row/column moment bound for
/// the operator norm. entry_sampler draws one centered entry per call;
/// q must be a positive even integer with q <= 2 log max(m1, m2).
SeginerReport seginer_check(const std::function<double(CounterRng&)>& entry_sampler,
                            int m1, int m2, int q, int trials, std::uint64_t key);

} // namespace ssv
