#include <doctest.h>

#include <cmath>
#include <vector>

#include "ssvlab/decomposition.hpp"
#include "ssvlab/spectra.hpp"

#include "test_support.hpp"

using namespace ssv;

namespace {

TruncationScheme lower_scheme(double c) {
    TruncationScheme s;
    s.regime = Regime::Lower;
    s.c = c;
    return s;
}

LabelMatrix make_labels(const Eigen::MatrixXi& bits) {
    LabelMatrix l;
    l.bits = bits.cast<std::uint8_t>();
    return l;
}

} // namespace

TEST_CASE("assemble identity cases") {
    Mat small = Mat::Constant(2, 2, 1.0);
    Mat large = Mat::Constant(2, 2, 5.0);

    Eigen::MatrixXi ones = Eigen::MatrixXi::Ones(2, 2);
    CHECK(assemble(make_labels(ones), small, large) == small);

    Eigen::MatrixXi zeros = Eigen::MatrixXi::Zero(2, 2);
    CHECK(assemble(make_labels(zeros), small, large) == large);

    Eigen::MatrixXi eye(2, 2);
    eye << 1, 0, 0, 1;
    Mat expected(2, 2);
    expected << 1, 5, 5, 1;
    CHECK(assemble(make_labels(eye), small, large) == expected);
}

TEST_CASE("assemble rejects shape mismatch") {
    Eigen::MatrixXi ones = Eigen::MatrixXi::Ones(2, 2);
    CHECK_THROWS_AS(assemble(make_labels(ones), Mat::Zero(2, 2), Mat::Zero(3, 2)),
                    std::invalid_argument);
}

TEST_CASE("assemble scaling equivariance") {
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    const Decomposition dec = sample_decomposition(law, lower_scheme(0.05), 20, 40, 17);
    const Mat base = assemble(dec);
    Decomposition scaled = dec;
    scaled.small *= -2.5;
    scaled.large *= -2.5;
    CHECK((assemble(scaled) + 2.5 * base).cwiseAbs().maxCoeff() < 1e-12 * base.cwiseAbs().maxCoeff());
}

TEST_CASE("support separation on sampled instances") {
    for (const TailLaw& law : {TailLaw::symmetric_pareto(0.8), TailLaw::alpha_stable(1.2)}) {
        const Decomposition dec = sample_decomposition(law, lower_scheme(0.05), 30, 60, 23);
        const double tau = dec.cutoff.tau;
        CHECK(dec.small.cwiseAbs().maxCoeff() <= tau * (1.0 + 1e-12));
        CHECK(dec.large.cwiseAbs().minCoeff() >= tau * (1.0 - 1e-12));
    }
}

TEST_CASE("mixture identity: assembled entries match direct draws (KS)") {
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    const TruncationScheme scheme = lower_scheme(0.05);
    const int N = 400, n = 300; // 120k entries per draw
    std::vector<double> mixed, direct;
    const Decomposition dec = sample_decomposition(law, scheme, n, N, 31);
    const Mat x = assemble(dec);
    const Mat y = sample_matrix(law, N, n, 32);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < N; ++i) {
            mixed.push_back(x(i, j));
            direct.push_back(y(i, j));
        }
    CHECK(mixed.size() >= 100000);
    CHECK(test_support::two_sample_ks_pvalue(mixed, direct) > 1e-3);
}

TEST_CASE("normalize requires the lower regime") {
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    TruncationScheme upper;
    upper.regime = Regime::Upper;
    const Decomposition dec = sample_decomposition(law, upper, 200, 400, 5);
    CHECK_THROWS_AS(normalize(dec), std::invalid_argument);
}

TEST_CASE("normalize: realized entry bound stays under the theoretical one") {
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Decomposition dec = sample_decomposition(law, lower_scheme(0.02), 150, 300,
                                                       static_cast<std::uint64_t>(trial));
        const NormalizedPair pair = normalize(dec);
        const double lb = std::log(static_cast<double>(dec.cutoff.base_size));
        CHECK(pair.entry_bound_limit ==
              doctest::Approx(1.0 / (std::sqrt(0.02) * lb * lb)).epsilon(1e-12));
        CHECK(pair.entry_bound <= pair.entry_bound_limit * (1.0 + 1e-12));
    }
}

TEST_CASE("row-based threshold variant drives the whole pipeline") {
    // Cutoff and normalization built from N instead of n.
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    TruncationScheme scheme = lower_scheme(0.02);
    scheme.base = ThresholdBase::Rows;
    const int n = 40, N = 400; // aspect ratio 10
    const Decomposition dec = sample_decomposition(law, scheme, n, N, 91);
    CHECK(dec.cutoff.base_size == static_cast<std::uint64_t>(N));
    const NormalizedPair pair = normalize(dec);
    const double lb = std::log(static_cast<double>(N));
    CHECK(pair.entry_bound_limit == doctest::Approx(1.0 / (std::sqrt(0.02) * lb * lb)).epsilon(1e-12));
    CHECK(pair.entry_bound <= pair.entry_bound_limit * (1.0 + 1e-12));
    CHECK(pair.second_moment_ratio == doctest::Approx(1.0).epsilon(1e-10)); // alpha = 1 collapse, base N
    const Mat g = gaussian_surrogate(pair, 91);
    CHECK(g.rows() == N);
    CHECK(singular_extremes(pair.total()).sigma_min >= 0.0);
}

TEST_CASE("normalize: exact second-moment ratio is 1 for pareto at alpha 1") {
    // base * s^2 * E[y^2] collapses exactly for the alpha = 1 Pareto cutoff.
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    const Decomposition dec = sample_decomposition(law, lower_scheme(0.01), 400, 800, 77);
    const NormalizedPair pair = normalize(dec);
    CHECK(pair.second_moment_ratio == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("normalize: variance profile follows the labels") {
    const TailLaw law = TailLaw::symmetric_pareto(0.9);
    const Decomposition dec = sample_decomposition(law, lower_scheme(0.03), 40, 90, 3);
    const NormalizedPair pair = normalize(dec);
    const double var_y = law.truncated_second_moment(dec.cutoff.tau);
    const double cell = pair.scale_factor * pair.scale_factor * var_y;
    for (int j = 0; j < dec.cols(); ++j)
        for (int i = 0; i < dec.rows(); ++i) {
            const double expected = dec.labels.bits(i, j) ? cell : 0.0;
            CHECK(pair.variance_profile(i, j) == doctest::Approx(expected).epsilon(1e-14));
        }
    CHECK(pair.variance_profile.maxCoeff() <=
          pair.variance_scale * pair.variance_scale / dec.cols() * (1.0 + 1e-12));
}

TEST_CASE("normalized random part is centered (monte carlo)") {
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    const TruncationScheme scheme = lower_scheme(0.02);
    double sum = 0.0;
    std::size_t count = 0;
    double cell_var = 0.0;
    for (int trial = 0; trial < 16; ++trial) {
        const Decomposition dec =
            sample_decomposition(law, scheme, 250, 500, 1000 + static_cast<std::uint64_t>(trial));
        const NormalizedPair pair = normalize(dec);
        sum += pair.random_part.sum();
        count += static_cast<std::size_t>(pair.random_part.size());
        cell_var = pair.variance_profile.maxCoeff();
    }
    CHECK(count >= 1000000);
    const double se = std::sqrt(cell_var / static_cast<double>(count));
    CHECK(std::abs(sum / static_cast<double>(count)) <= 4.0 * se);
}

TEST_CASE("truncated second moment matches monte carlo at 1 percent") {
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    const Decomposition dec = sample_decomposition(law, lower_scheme(0.02), 300, 600, 55);
    const double tau = dec.cutoff.tau;
    const double exact = law.truncated_second_moment(tau);
    double s2 = 0.0;
    std::size_t k = 0;
    for (int j = 0; j < dec.cols(); ++j)
        for (int i = 0; i < dec.rows(); ++i) {
            s2 += dec.small(i, j) * dec.small(i, j);
            ++k;
        }
    CHECK(std::abs(s2 / static_cast<double>(k) - exact) / exact < 0.01);
}

TEST_CASE("gaussian surrogate: zero profile entries are carried verbatim") {
    NormalizedPair pair;
    pair.fixed_part = Mat::Constant(3, 3, 7.0);
    pair.random_part = Mat::Zero(3, 3);
    pair.variance_profile = Mat::Zero(3, 3);
    pair.variance_profile(1, 1) = 0.25;
    const Mat g = gaussian_surrogate(pair, 9);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            if (i != 1 || j != 1) CHECK(g(i, j) == 7.0);
    CHECK(g(1, 1) != 7.0);
}

TEST_CASE("gaussian surrogate: sample variance matches the profile entry") {
    NormalizedPair pair;
    pair.fixed_part = Mat::Zero(1, 1);
    pair.random_part = Mat::Zero(1, 1);
    pair.variance_profile = Mat::Constant(1, 1, 0.37);
    const int k = 1000000;
    double s2 = 0.0;
    for (int i = 0; i < k; ++i) {
        const Mat g = gaussian_surrogate(pair, derive_key(1234, static_cast<std::uint64_t>(i)));
        s2 += g(0, 0) * g(0, 0);
    }
    CHECK(std::abs(s2 / k - 0.37) / 0.37 < 0.01);
}

TEST_CASE("surrogate law depends only on the profile") {
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    const Decomposition dec = sample_decomposition(law, lower_scheme(0.05), 25, 50, 66);
    const NormalizedPair pair = normalize(dec);
    const Mat a = gaussian_surrogate(pair, 42);
    const Mat b = gaussian_surrogate(pair, 42);
    CHECK(a == b); // same stream, bit identical
    NormalizedPair copy = pair;
    CHECK(gaussian_surrogate(copy, 42) == a); // profile equality is what matters
    CHECK(gaussian_surrogate(pair, 43) != a);
}

TEST_CASE("apply_weights_and_shift basics") {
    const Mat x = sample_gaussian_matrix(8, 5, 12);
    WeightProfile unit;
    unit.a = Mat::Ones(8, 5);
    CHECK(apply_weights_and_shift(x, unit, Mat::Zero(8, 5)) == x);

    WeightProfile twice;
    twice.a = Mat::Constant(8, 5, 2.0);
    twice.lower = 2.0;
    twice.upper = 2.0;
    twice.validate();
    const Mat doubled = apply_weights_and_shift(x, twice, Mat::Zero(8, 5));
    CHECK(singular_extremes(doubled).sigma_min ==
          doctest::Approx(2.0 * singular_extremes(x).sigma_min).epsilon(1e-10));

    CHECK_THROWS_AS(apply_weights_and_shift(x, unit, Mat::Zero(7, 5)), std::invalid_argument);

    WeightProfile bad;
    bad.a = Mat::Constant(2, 2, 3.0);
    bad.lower = 1.0;
    bad.upper = 2.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("huge rank-one shift keeps sigma_min in range") {
    // The lower-bound mechanism is shift independent; statistically the
    // perturbed sigma_min stays comparable to the clean one.
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    std::vector<double> clean, shifted;
    for (int t = 0; t < 20; ++t) {
        const Mat x = sample_matrix(law, 120, 60, derive_key(9000, static_cast<std::uint64_t>(t)));
        WeightProfile w;
        w.a = Mat::Ones(120, 60);
        const Mat b = 1e6 * Mat::Ones(120, 60);
        clean.push_back(singular_extremes(x).sigma_min);
        shifted.push_back(singular_extremes(apply_weights_and_shift(x, w, b)).sigma_min);
    }
    std::sort(clean.begin(), clean.end());
    std::sort(shifted.begin(), shifted.end());
    const double mc = clean[clean.size() / 2];
    const double ms = shifted[shifted.size() / 2];
    CHECK(ms >= 0.5 * mc);
    CHECK(ms <= 20.0 * mc);
}
