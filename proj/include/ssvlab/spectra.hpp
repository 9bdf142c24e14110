#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ssvlab/sampler.hpp"

namespace ssv {

struct SpectralSummary {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    std::optional<std::vector<double>> singular_values; // descending, length min(N, n)
    int iterations = 0;
    double residual = 0.0;
};

/// Extremal singular values by Householder reduction to bidiagonal form
/// followed by implicit-shift QR on the bidiagonal. Gram products are never
/// formed, so sigma_min does not suffer condition-number squaring.
///
/// tol is the relative convergence tolerance of the QR sweep (default 1e-10);
/// set want_all to also return the full spectrum.
SpectralSummary singular_extremes(const Mat& x, double tol = 1e-10, bool want_all = false);

/// Largest singular value via power iteration on the Gram operator with a
/// deterministic all-ones start. Converges when successive Rayleigh
/// quotients differ by less than tol relative.
double operator_norm(const Mat& x, double tol = 1e-10);

/// Euclidean distance from v to span(basis), by modified Gram-Schmidt with
/// reorthogonalization.
double distance_to_subspace(const Vec& v, const std::vector<Vec>& basis);

struct DilationSpectrum {
    std::vector<double> eigenvalues; // ascending, length 2(N+n)
    double lambda_plus = 0.0;        // top of sp((HH* + 4 eps^2 I)^{1/2})
    double lambda_minus = 0.0;       // bottom of the same positive branch
    double epsilon = 0.0;
};

/// Spectrum of the self-adjoint 4-block dilation of h with regularizer
/// A_eps = 4 eps^2 I. Block sizes are (N, n, n, N), so the dilation has
/// dimension 2(N + n); its nonzero eigenvalues come in +/- pairs
/// sqrt(s_i^2 + 4 eps^2) together with +/- 2 eps at multiplicity N - n.
DilationSpectrum dilation_spectrum(const Mat& h, double epsilon);

/// Exact Hausdorff distance between two finite sets of reals, given sorted.
double hausdorff_distance(const std::vector<double>& a, const std::vector<double>& b);

} // namespace ssv
