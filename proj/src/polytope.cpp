#include "ssvlab/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssvlab/rng.hpp"
#include "ssvlab/spectra.hpp"

namespace ssv {

InradiusCertificate certificate(const Mat& x, double tol) {
    if (x.rows() < x.cols())
        throw std::invalid_argument("certificate: matrix must have at least as many rows as columns");
    InradiusCertificate c;
    c.rows = static_cast<int>(x.rows());
    c.cols = static_cast<int>(x.cols());
    c.sigma_min_used = singular_extremes(x, tol).sigma_min;
    c.radius = c.sigma_min_used / std::sqrt(static_cast<double>(c.rows));
    c.method = InradiusCertificate::Method::SigmaMinCertificate;
    return c;
}

double exact_inradius_2d(const std::vector<Eigen::Vector2d>& rows) {
    std::vector<Eigen::Vector2d> nz;
    for (const auto& r : rows)
        if (r.norm() > 0.0) nz.push_back(r);
    if (nz.empty()) return 0.0;

    const auto envelope = [&nz](double phi) {
        const double cx = std::cos(phi), sx = std::sin(phi);
        double worst = 0.0;
        for (const auto& r : nz) worst = std::max(worst, std::abs(r.x() * cx + r.y() * sx));
        return worst;
    };

    std::vector<double> candidates;
    // Each row's zero direction.
    for (const auto& r : nz) candidates.push_back(std::atan2(r.y(), r.x()) + 0.5 * M_PI);
    // Pairwise crossings |<z,ri>| = |<z,rj>|: two sign families per pair.
    for (std::size_t i = 0; i < nz.size(); ++i) {
        for (std::size_t j = i + 1; j < nz.size(); ++j) {
            for (int sgn : {-1, 1}) {
                const double p = nz[i].x() - sgn * nz[j].x();
                const double q = nz[i].y() - sgn * nz[j].y();
                // p cos phi + q sin phi = 0
                if (p == 0.0 && q == 0.0) continue;
                candidates.push_back(std::atan2(-p, q));
            }
        }
    }
    double best = INFINITY;
    for (const double phi : candidates) best = std::min(best, envelope(phi));
    return best;
}

double grid_refine_inradius(const Mat& x, int budget) {
    const int n = static_cast<int>(x.cols());
    if (n > 6) throw std::invalid_argument("grid_refine_inradius: cols > 6 exceeds the budget guard");
    if (budget < 100) throw std::invalid_argument("grid_refine_inradius: budget too small");

    const auto value = [&x](const Vec& z) { return (x * z).cwiseAbs().maxCoeff(); };

    CounterRng rng(0x9d1ce5ULL, 0);
    const int coarse = std::min(budget / 4, 8192);
    std::vector<std::pair<double, Vec>> pool;
    for (int i = 0; i < coarse; ++i) {
        Vec z(n);
        for (int k = 0; k < n; ++k) z(k) = rng.gaussian();
        z.normalize();
        pool.emplace_back(value(z), z);
    }
    std::sort(pool.begin(), pool.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const int keep = std::min<int>(16, static_cast<int>(pool.size()));
    pool.resize(keep);

    int used = coarse;
    double radius = 0.35;
    while (used < budget && radius > 1e-9) {
        for (auto& [val, z] : pool) {
            const int local = std::max(8, (budget - used) / (keep * 24));
            for (int i = 0; i < local && used < budget; ++i, ++used) {
                Vec w = z;
                for (int k = 0; k < n; ++k) w(k) += radius * rng.gaussian();
                w.normalize();
                const double v = value(w);
                if (v < val) {
                    val = v;
                    z = w;
                }
            }
        }
        radius *= 0.5;
    }
    double best = INFINITY;
    for (const auto& [val, z] : pool) best = std::min(best, val);
    return best;
}

} // namespace ssv
