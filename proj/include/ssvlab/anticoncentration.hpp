#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ssvlab/sampler.hpp"

namespace ssv {

struct ConcentrationEstimate {
    double h = 0.0;
    double q_hat = 0.0; // sup over lambda of P(|xi - lambda| <= h), empirically
    std::size_t sample_size = 0;
    double std_error = 0.0;
};

/// Exact empirical Levy concentration of a sorted sample: the largest count
/// of points in any closed interval of length 2h, divided by the sample size.
ConcentrationEstimate levy_concentration(const std::vector<double>& sorted_samples, double h);

struct RogozinReport {
    int k = 0;
    double lhs = 0.0;         // Q(sum, h) estimate
    double rhs_bracket = 0.0; // h (sum (1 - Q(xi_j, h_j)) h_j^2)^{-1/2}
    double c_hat = 0.0;       // lhs / rhs_bracket
    std::vector<double> component_q;
};

/// Estimates both sides of the sum anti-concentration inequality for
/// independent components; h must dominate every component window.
RogozinReport rogozin_check(
    const std::vector<std::pair<std::function<double(CounterRng&)>, double>>& components,
    double h, int trials, std::uint64_t key);

/// Largest fraction of the point cloud inside any ball of the given radius,
/// probing centers at the sample points themselves (all of them when
/// max_centers = 0).
double ball_concentration(const std::vector<Vec>& points, double radius,
                          std::size_t max_centers = 0);

struct ProjectionReport {
    int m = 0, d = 0, ell = 0;
    double radius = 0.0;     // h sqrt(d) / ell
    double estimate = 0.0;   // ball concentration of the projected cloud
    double coord_q = 0.0;    // verified per-coordinate Q(X_i, h)
    double reference = 0.0;  // (C / sqrt(ell tau))^{d / ell} with C = 1
};

/// Projects i.i.d.-coordinate vectors onto a seeded random d-dimensional
/// frame and estimates the projected concentration at radius h sqrt(d)/ell.
/// Rejects when the verified per-coordinate concentration exceeds 1 - tau.
ProjectionReport projection_anticoncentration(const std::function<double(CounterRng&)>& coord,
                                              double h, double tau, int m, int d, int ell,
                                              int trials, std::uint64_t key);

enum class SphereClassKind { Peaky, AlmostSparse, Generic };

struct SphereClass {
    SphereClassKind kind = SphereClassKind::Generic;
    std::vector<int> witness;  // index set J when applicable
    bool witness_valid = false;
};

/// Classifies a unit vector as peaky (sup-norm >= theta), almost m-sparse
/// (top m coordinates carry at least half the norm), or generic with a
/// greedily built witness set of small coordinates. A generic witness that
/// misses its norm bound is flagged, not fatal.
SphereClass classify_sphere_vector(const Vec& y, double theta, int m, int N);

struct SparseNet {
    std::vector<Vec> points; // m-sparse vectors in the unit ball
    int n = 0, m = 0;
    double epsilon = 0.0;
    double grid_pitch = 0.0;
};

/// Grid net over every size-m support, pitch epsilon/sqrt(m), pruned to the
/// unit ball. Covers every m-sparse unit vector y in the restricted metric:
/// some net point p has || y restricted to supp p  -  p || <= epsilon.
/// Throws when the cardinality estimate exceeds the budget.
SparseNet sparse_net(int n, int m, double epsilon, std::uint64_t budget = 5000000);

/// Whether some net point y' satisfies || probe restricted to supp y'  -  y' ||
/// <= epsilon. Net points with ||y'|| below norm_floor are ignored so the
/// relation is not satisfied vacuously by small-support points; the default
/// floor ||probe|| - epsilon mirrors the norm floor of the vector classes the
/// net is built for. Reports the best admissible distance through *best.
bool net_covers(const SparseNet& net, const Vec& probe, double* best = nullptr,
                double norm_floor = -1.0);

} // namespace ssv
