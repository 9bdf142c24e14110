#include <doctest.h>

#include <cmath>

#include "ssvlab/spectra.hpp"
#include "ssvlab/universality.hpp"

using namespace ssv;

namespace {

NormalizedPair pair_with_profile(const Mat& profile, double q) {
    NormalizedPair p;
    p.fixed_part = Mat::Zero(profile.rows(), profile.cols());
    p.random_part = p.fixed_part;
    p.variance_profile = profile;
    p.entry_bound_limit = q;
    p.entry_bound = q;
    p.variance_scale = std::max(1.0, std::sqrt(profile.cols() * profile.maxCoeff()));
    return p;
}

TruncationScheme lower_scheme(double c) {
    TruncationScheme s;
    s.regime = Regime::Lower;
    s.c = c;
    return s;
}

} // namespace

TEST_CASE("matrix_params on reference profiles") {
    const int n = 25;
    const auto iid = pair_with_profile(Mat::Constant(n, n, 1.0 / n), 0.2);
    const MatrixParams p = matrix_params(iid, 0.5);
    CHECK(p.sigma_param == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.sigma_star == doctest::Approx(1.0 / std::sqrt(static_cast<double>(n))).epsilon(1e-12));
    CHECK(p.r_param == 0.2);

    const auto zero = pair_with_profile(Mat::Zero(4, 4), 0.7);
    const MatrixParams pz = matrix_params(zero, 0.5);
    CHECK(pz.sigma_param == 0.0);
    CHECK(pz.sigma_star == 0.0);
    CHECK(pz.r_param == 0.7);

    Mat single = Mat::Zero(6, 5);
    single(2, 3) = 0.09;
    const MatrixParams ps = matrix_params(pair_with_profile(single, 0.1), 0.5);
    CHECK(ps.sigma_param == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(ps.sigma_star == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("sigma_star never exceeds sigma on random profiles") {
    CounterRng rng(515, 0);
    for (int t = 0; t < 50; ++t) {
        Mat prof(8, 6);
        for (int j = 0; j < 6; ++j)
            for (int i = 0; i < 8; ++i) prof(i, j) = rng.uniform_oo() < 0.3 ? rng.uniform_oo() : 0.0;
        const MatrixParams p = matrix_params(pair_with_profile(prof, 0.1), 1.0);
        CHECK(p.sigma_star <= p.sigma_param + 1e-14);
    }
}

TEST_CASE("epsilon_bound worked values and monotonicity") {
    CHECK(epsilon_bound(1.0, 0.0, 100, 100, 9.0) ==
          doctest::Approx(1.0 / 10.0 * 3.0).epsilon(1e-14));
    CHECK(epsilon_bound(2.0, 0.3, 50, 100, 0.0) == 0.0);
    // M=1, q=0.01, n=N=100, t=10, C=1: 0.1 sqrt(10) + 1 + 0.1.
    const double expected = 0.1 * std::sqrt(10.0) + 1.0 + 0.1;
    CHECK(epsilon_bound(1.0, 0.01, 100, 100, 10.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(1.4160).epsilon(1e-3));

    double prev = 0.0;
    for (const double t : {1.0, 2.0, 4.0, 8.0}) {
        const double e = epsilon_bound(1.5, 0.05, 60, 120, t);
        CHECK(e > prev);
        prev = e;
    }
    prev = 0.0;
    for (const double q : {0.0, 0.01, 0.1, 0.5}) {
        const double e = epsilon_bound(1.5, q, 60, 120, 3.0);
        CHECK(e >= prev);
        prev = e + 1e-15;
    }
    prev = 0.0;
    for (const double m : {1.0, 1.5, 2.5}) {
        const double e = epsilon_bound(m, 0.05, 60, 120, 3.0);
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("zero profile forces T = G and delta = 0") {
    NormalizedPair p = pair_with_profile(Mat::Zero(10, 5), 0.0);
    p.fixed_part = sample_gaussian_matrix(10, 5, 88);
    const Mat g = gaussian_surrogate(p, 3);
    CHECK(g == p.fixed_part);
    const double st = singular_extremes(p.total()).sigma_min;
    const double sg = singular_extremes(g).sigma_min;
    CHECK(st == sg);
}

TEST_CASE("coupling experiment produces a full report") {
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    const CouplingReport rep = coupling_experiment(law, lower_scheme(0.02), 60, 120, 40, 99);
    CHECK(rep.deltas.size() == 40);
    CHECK(rep.median_delta >= 0.0);
    CHECK(rep.q > 0.0);
    CHECK(rep.median_within_eps); // pass/fail diagnostic at t = log(16N), C = 1
    CHECK(!rep.epsilon_curve.empty());
    for (const auto& pt : rep.epsilon_curve) {
        CHECK(pt.level > 0.0);
        CHECK(pt.level < 1.0);
    }
    // Deterministic given the key.
    const CouplingReport rep2 = coupling_experiment(law, lower_scheme(0.02), 60, 120, 40, 99);
    CHECK(rep2.median_delta == rep.median_delta);

    TruncationScheme upper;
    upper.regime = Regime::Upper;
    CHECK_THROWS_AS(coupling_experiment(law, upper, 60, 120, 2, 1), std::invalid_argument);
}

TEST_CASE("single entry perturbation moves dilation spectra by at most eta") {
    const Mat h = sample_gaussian_matrix(12, 6, 700);
    Mat hp = h;
    const double eta = 1e-3;
    hp(3, 2) += eta;
    for (const double eps : {0.1, 1.0}) {
        const auto a = dilation_spectrum(h, eps);
        const auto b = dilation_spectrum(hp, eps);
        CHECK(hausdorff_distance(a.eigenvalues, b.eigenvalues) <= eta + 1e-10);
    }
}

TEST_CASE("identical realizations have zero hausdorff distance") {
    const Mat h = sample_gaussian_matrix(8, 4, 701);
    const auto a = dilation_spectrum(h, 0.5);
    const auto b = dilation_spectrum(h, 0.5);
    CHECK(hausdorff_distance(a.eigenvalues, b.eigenvalues) == 0.0);
}

TEST_CASE("hausdorff universality: implications hold whenever the premise does") {
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    const HausdorffReport rep =
        hausdorff_universality(law, lower_scheme(0.05), 30, 60, 1.0, 30, 2024);
    CHECK(rep.rows.size() == 30);
    CHECK(rep.premise_count > 0);
    CHECK(rep.violation_count == 0);
    CHECK(rep.dilation_dim == 2 * (30 + 60));
    for (const auto& row : rep.rows) {
        if (!row.premise) continue;
        CHECK(row.lambda_plus_ok);
        CHECK(row.lambda_minus_ok);
        CHECK(row.sigma_chain_ok);
    }
}

TEST_CASE("empirical quantile order statistics") {
    std::vector<double> v{5.0, 1.0, 3.0, 2.0, 4.0};
    CHECK(empirical_quantile(v, 0.0) == 1.0);
    CHECK(empirical_quantile(v, 1.0) == 5.0);
    CHECK(empirical_quantile(v, 0.5) == 3.0);
    CHECK_THROWS_AS(empirical_quantile({}, 0.5), std::invalid_argument);
}
