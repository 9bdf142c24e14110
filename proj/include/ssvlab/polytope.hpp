#pragma once

#include <vector>

#include <Eigen/Core>

#include "ssvlab/sampler.hpp"

namespace ssv {

struct InradiusCertificate {
    enum class Method { SigmaMinCertificate, ExactSweep2D, GridRefine };
    double radius = 0.0;
    Method method = Method::SigmaMinCertificate;
    double sigma_min_used = 0.0;
    int rows = 0, cols = 0;
};

/// Certified inradius lower bound sigma_min(X)/sqrt(N) for the symmetric
/// polytope spanned by the rows of X (the image of the l1 ball under X^T).
InradiusCertificate certificate(const Mat& x, double tol = 1e-10);

/// Exact inradius in two columns: the minimum over unit directions of the
/// largest |<z, row>|, evaluated analytically at every envelope breakpoint
/// (each row's zero direction and all pairwise crossings).
double exact_inradius_2d(const std::vector<Eigen::Vector2d>& rows);

/// Upper bound on the inradius by minimizing the sup of |<z, row>| over a
/// refining mesh of unit directions; deterministic, cols <= 6.
double grid_refine_inradius(const Mat& x, int budget = 200000);

} // namespace ssv
