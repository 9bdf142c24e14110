#include "ssvlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace ssv {

namespace {

inline double pythag(double a, double b) { return std::hypot(a, b); }

inline double sign_like(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Householder reduction of a tall matrix (rows >= cols) to upper bidiagonal
// form. Returns diagonal d[0..m-1] and superdiagonal e[1..m-1] with
// e[i] = B(i-1, i); e[0] = 0. Orthogonal factors are not accumulated.
void bidiagonalize(Mat& a, std::vector<double>& d, std::vector<double>& e) {
    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    d.assign(cols, 0.0);
    e.assign(cols, 0.0);
    Vec v(rows), w(cols);
    for (int k = 0; k < cols; ++k) {
        // Column reflector: zero A(k+1.., k).
        const int rl = rows - k;
        auto col = a.col(k).tail(rl);
        const double cnorm = col.norm();
        if (cnorm > 0.0) {
            const double alpha = col(0) >= 0.0 ? -cnorm : cnorm;
            v.head(rl) = col;
            v(0) -= alpha;
            const double vv = v.head(rl).squaredNorm();
            if (vv > 0.0) {
                const double beta = 2.0 / vv;
                auto block = a.block(k, k, rl, cols - k);
                w.head(cols - k).noalias() = block.transpose() * v.head(rl);
                block.noalias() -= (beta * v.head(rl)) * w.head(cols - k).transpose();
            }
            a(k, k) = alpha;
            a.col(k).tail(rl - 1).setZero();
        }
        d[k] = a(k, k);
        if (k + 1 >= cols) continue;
        // Row reflector: zero A(k, k+2..).
        const int cl = cols - k - 1;
        if (cl > 1) {
            auto row = a.row(k).tail(cl);
            const double rnorm = row.norm();
            if (rnorm > 0.0) {
                const double alpha = row(0) >= 0.0 ? -rnorm : rnorm;
                w.head(cl) = row.transpose();
                w(0) -= alpha;
                const double ww = w.head(cl).squaredNorm();
                if (ww > 0.0) {
                    const double beta = 2.0 / ww;
                    auto block = a.block(k, k + 1, rows - k, cl);
                    v.head(rows - k).noalias() = block * w.head(cl);
                    block.noalias() -= (beta * v.head(rows - k)) * w.head(cl).transpose();
                }
                a(k, k + 1) = alpha;
                a.row(k).tail(cl - 1).setZero();
            }
        }
        e[k + 1] = a(k, k + 1);
    }
}

// Implicit-shift QR on the bidiagonal (d, e). Classic Golub-Kahan sweep with
// splitting and cancellation; returns total sweep count.
int bidiagonal_qr(std::vector<double>& d, std::vector<double>& e, double tol) {
    const int m = static_cast<int>(d.size());
    double anorm = 0.0;
    for (int i = 0; i < m; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
    if (anorm == 0.0) return 0;
    const double conv = std::max(tol, 4.0 * std::numeric_limits<double>::epsilon());
    const double tiny = std::numeric_limits<double>::epsilon() * anorm;
    int total_its = 0;

    for (int k = m - 1; k >= 0; --k) {
        for (int its = 0;; ++its) {
            if (its >= 120)
                throw std::runtime_error("singular_extremes: bidiagonal QR failed to converge");
            bool cancel = true;
            int l = k;
            for (; l >= 0; --l) {
                if (l == 0 || std::abs(e[l]) <= conv * (std::abs(d[l]) + std::abs(d[l - 1])) ||
                    std::abs(e[l]) <= tiny) {
                    if (l > 0) e[l] = 0.0;
                    cancel = false;
                    break;
                }
                if (std::abs(d[l - 1]) <= tiny) break;
            }
            if (cancel) {
                // d[l-1] is negligible: rotate e[l..] away from the left so the
                // block splits at l.
                double c = 0.0, s = 1.0;
                for (int i = l; i <= k; ++i) {
                    const double f = s * e[i];
                    e[i] = c * e[i];
                    if (std::abs(f) <= tiny) break;
                    const double g = d[i];
                    const double h = pythag(f, g);
                    d[i] = h;
                    c = g / h;
                    s = -f / h;
                }
            }
            double z = d[k];
            if (l == k) {
                if (z < 0.0) d[k] = -z;
                break;
            }
            ++total_its;
            // Wilkinson-style shift from the trailing 2x2 of B^T B.
            double x = d[l];
            const int nm = k - 1;
            double y = d[nm];
            double g = e[nm];
            double h = e[k];
            double f = ((y - z) * (y + z) + (g - h) * (g + h)) / (2.0 * h * y);
            g = pythag(f, 1.0);
            f = ((x - z) * (x + z) + h * ((y / (f + sign_like(g, f))) - h)) / x;
            // Chase the bulge from l to k.
            double c = 1.0, s = 1.0;
            for (int j = l; j <= nm; ++j) {
                const int i = j + 1;
                g = e[i];
                y = d[i];
                h = s * g;
                g = c * g;
                z = pythag(f, h);
                e[j] = z;
                c = f / z;
                s = h / z;
                f = x * c + g * s;
                g = g * c - x * s;
                h = y * s;
                y *= c;
                z = pythag(f, h);
                d[j] = z;
                if (z != 0.0) {
                    c = f / z;
                    s = h / z;
                }
                f = c * g + s * y;
                x = c * y - s * g;
            }
            e[l] = 0.0;
            e[k] = f;
            d[k] = x;
        }
    }
    return total_its;
}

} // namespace

SpectralSummary singular_extremes(const Mat& x, double tol, bool want_all) {
    if (x.cols() < 1 || x.rows() < 1)
        throw std::invalid_argument("singular_extremes: empty matrix");
    if (!x.allFinite())
        throw std::invalid_argument("singular_extremes: non-finite entries");

    // Work on the tall orientation; singular values are transpose-invariant.
    Mat a = x.rows() >= x.cols() ? x : Mat(x.transpose());
    const int m = static_cast<int>(a.cols());

    SpectralSummary out;
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        out.singular_values = want_all ? std::optional(std::vector<double>(m, 0.0)) : std::nullopt;
        return out;
    }
    a /= scale;

    std::vector<double> d, e;
    bidiagonalize(a, d, e);
    out.iterations = bidiagonal_qr(d, e, tol);

    std::sort(d.begin(), d.end(), std::greater<>());
    out.sigma_max = d.front() * scale;
    out.sigma_min = d.back() * scale;
    double worst = 0.0;
    for (int i = 1; i < m; ++i) worst = std::max(worst, std::abs(e[i]));
    out.residual = worst / std::max(d.front(), std::numeric_limits<double>::min());
    if (want_all) {
        for (auto& s : d) s *= scale;
        out.singular_values = std::move(d);
    }
    return out;
}

double operator_norm(const Mat& x, double tol) {
    if (x.size() == 0) throw std::invalid_argument("operator_norm: empty matrix");
    if (!x.allFinite()) throw std::invalid_argument("operator_norm: non-finite entries");
    const int n = static_cast<int>(x.cols());
    Vec v = Vec::Ones(n) / std::sqrt(static_cast<double>(n));
    double rho_prev = -1.0, diff_prev = -1.0;
    double rho = 0.0;
    for (int it = 0; it < 200000; ++it) {
        Vec w = x * v;
        rho = w.norm();
        if (rho == 0.0) {
            if (it == 0 && x.cwiseAbs().maxCoeff() > 0.0) {
                // All-ones start hit the kernel; deterministic restart.
                CounterRng r(0x5eed0fULL, 0);
                for (int i = 0; i < n; ++i) v(i) = r.gaussian();
                v.normalize();
                continue;
            }
            return 0.0;
        }
        v.noalias() = x.transpose() * w;
        const double vn = v.norm();
        if (vn == 0.0) return rho;
        v /= vn;
        if (rho_prev >= 0.0) {
            const double diff = std::abs(rho - rho_prev);
            // Geometric convergence: extrapolate the remaining error from the
            // contraction ratio instead of trusting the last step alone.
            if (diff_prev > 0.0) {
                const double ratio = std::min(diff / diff_prev, 0.999);
                const double projected = diff * ratio / (1.0 - ratio);
                if (projected <= 0.1 * tol * rho && diff <= tol * rho) return rho;
            } else if (diff == 0.0) {
                return rho;
            }
            diff_prev = diff;
        }
        rho_prev = rho;
    }
    return rho;
}

double distance_to_subspace(const Vec& v, const std::vector<Vec>& basis) {
    for (const auto& b : basis)
        if (!b.allFinite()) throw std::invalid_argument("distance_to_subspace: non-finite basis");
    std::vector<Vec> q;
    q.reserve(basis.size());
    for (const auto& b : basis) {
        Vec w = b;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& qi : q) w -= qi.dot(w) * qi;
        const double nw = w.norm();
        if (nw > 1e-13 * std::max(1.0, b.norm())) q.push_back(w / nw);
    }
    Vec r = v;
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& qi : q) r -= qi.dot(r) * qi;
    return r.norm();
}

DilationSpectrum dilation_spectrum(const Mat& h, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("dilation_spectrum: epsilon must be positive");
    const int N = static_cast<int>(h.rows());
    const int n = static_cast<int>(h.cols());
    const int dim = 2 * (N + n);
    Mat s = Mat::Zero(dim, dim);
    // Block offsets for sizes (N, n, n, N).
    const int b1 = 0, b3 = N + n, b4 = N + 2 * n;
    s.block(b1, b3, N, n) = h;
    s.block(b3, b1, n, N) = h.transpose();
    s.block(b1, b4, N, N) = 2.0 * epsilon * Mat::Identity(N, N);
    s.block(b4, b1, N, N) = 2.0 * epsilon * Mat::Identity(N, N);

    Eigen::SelfAdjointEigenSolver<Mat> solver(s, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dilation_spectrum: eigensolver failed");

    DilationSpectrum out;
    out.epsilon = epsilon;
    out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
    out.lambda_plus = out.eigenvalues.back();
    // Positive branch sits at >= 2 eps; eps separates it from the kernel.
    out.lambda_minus = out.lambda_plus;
    for (double ev : out.eigenvalues)
        if (ev > epsilon) {
            out.lambda_minus = ev;
            break;
        }
    return out;
}

double hausdorff_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("hausdorff_distance: empty input");
    const auto directed = [](const std::vector<double>& from, const std::vector<double>& to) {
        double worst = 0.0;
        std::size_t j = 0;
        for (const double x : from) {
            while (j + 1 < to.size() && to[j + 1] <= x) ++j;
            double best = std::abs(x - to[j]);
            if (j + 1 < to.size()) best = std::min(best, std::abs(to[j + 1] - x));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

} // namespace ssv
