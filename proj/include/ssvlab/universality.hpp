#pragma once

#include <cstdint>
#include <vector>

#include "ssvlab/decomposition.hpp"

namespace ssv {

/// Operator-scale parameters of the dilated random part: sigma is the norm of
/// the covariance blocks, sigma_star the largest directional standard
/// deviation, r the a.s. bound on one summand.
struct MatrixParams {
    double sigma_param = 0.0;
    double sigma_star = 0.0;
    double r_param = 0.0;
    std::vector<double> t_grid;
};

MatrixParams matrix_params(const NormalizedPair& pair, double epsilon);

/// eps(t) = C M n^{-1/2} t^{1/2} + C M^{2/3} q^{1/3} t^{2/3} (N/n)^{1/3} + C q t.
double epsilon_bound(double m_scale, double q, int n, int N, double t, double c_const = 1.0);

struct CouplingCurvePoint {
    double t = 0.0;
    double eps = 0.0;       // epsilon_bound at t
    double level = 0.0;     // 1 - 8N e^{-t}
    double quantile = 0.0;  // empirical delta quantile at that level
    bool within = false;    // quantile <= eps
};

struct CouplingReport {
    int n = 0, N = 0, trials = 0;
    double q = 0.0;       // a.s. entry bound used in the eps formula
    double m_scale = 1.0;
    std::vector<double> deltas; // |sigma_min(T) - sigma_min(G)| per trial
    std::vector<double> sigma_min_t, sigma_min_g;
    std::vector<CouplingCurvePoint> epsilon_curve;
    int violations = 0;   // curve points whose quantile exceeds eps
    double median_delta = 0.0;
    double c_hat = 0.0;   // smallest constant making every curve point pass
    bool median_within_eps = false; // at t = log(16N) with C = 1
};

/// Paired trials of the resampled matrix against its matched Gaussian
/// surrogate: per trial the labels and large part are fixed and shared.
CouplingReport coupling_experiment(const TailLaw& law, const TruncationScheme& scheme,
                                   int n, int N, int trials, std::uint64_t key,
                                   double c_const = 1.0,
                                   const std::vector<double>& t_grid = {});

struct HausdorffTrial {
    double d_h = 0.0;
    bool premise = false;        // d_h <= epsilon
    bool lambda_plus_ok = false; // lambda+(T side) <= lambda+(G side) + eps
    bool lambda_minus_ok = false;
    bool sigma_chain_ok = false; // sigma_min(T) >= sigma_min(G) - 3 eps
    double sigma_min_t = 0.0, sigma_min_g = 0.0;
};

struct HausdorffReport {
    int n = 0, N = 0, trials = 0;
    double epsilon = 0.0;
    int dilation_dim = 0;
    std::vector<HausdorffTrial> rows;
    int premise_count = 0;
    int violation_count = 0; // premise held but an implication failed
    std::vector<CouplingCurvePoint> quantile_curve; // d_h quantiles vs eps(t), level 1 - d e^{-t}
    double c_hat = 0.0;
};

/// Dilation-spectrum comparison of the pair at a fixed regularizer epsilon,
/// with the lambda and sigma_min implications checked exactly whenever the
/// Hausdorff premise holds.
HausdorffReport hausdorff_universality(const TailLaw& law, const TruncationScheme& scheme,
                                       int n, int N, double epsilon, int trials,
                                       std::uint64_t key, double spectral_tol = 1e-8);

/// Order statistic at the given level from an unsorted sample.
double empirical_quantile(std::vector<double> values, double level);

} // namespace ssv
