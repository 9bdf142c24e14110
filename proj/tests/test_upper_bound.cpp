#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "ssvlab/harness.hpp"

#include "ssvlab/spectra.hpp"
#include "ssvlab/upper_bound.hpp"

#include "test_support.hpp"

using namespace ssv;

namespace {

TruncationScheme upper_scheme() {
    TruncationScheme s;
    s.regime = Regime::Upper;
    s.b = 0.5;
    s.delta = 2.0;
    s.c_u = 1.0;
    return s;
}

LabelMatrix labels_from(const Eigen::MatrixXi& bits) {
    LabelMatrix l;
    l.bits = bits.cast<std::uint8_t>();
    return l;
}

} // namespace

TEST_CASE("find_all_ones_columns trivial cases") {
    LabelMatrix all = labels_from(Eigen::MatrixXi::Ones(4, 6));
    CHECK(find_all_ones_columns(all).size() == 6);

    Eigen::MatrixXi holed = Eigen::MatrixXi::Ones(4, 6);
    for (int j = 0; j < 6; ++j) holed(j % 4, j) = 0;
    CHECK(find_all_ones_columns(labels_from(holed)).empty());
}

TEST_CASE("all-ones column count follows the binomial oracle") {
    // p = 0.9 via pareto alpha 1, tau 10; N = 20 rows, n = 1000 columns.
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    const LabelMatrix psi = sample_label_matrix(law, 10.0, 20, 1000, 404);
    const double p0 = std::pow(0.9, 20.0);
    const double expected = 1000.0 * p0;
    const double sd = std::sqrt(1000.0 * p0 * (1.0 - p0));
    const auto count = static_cast<double>(find_all_ones_columns(psi).size());
    CHECK(std::abs(count - expected) <= 4.0 * sd);
}

TEST_CASE("no-all-ones probability matches the closed-form binomial expression") {
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    const int N = 20, n = 30, trials = 2000;
    int none = 0;
    for (int t = 0; t < trials; ++t) {
        const LabelMatrix psi =
            sample_label_matrix(law, 10.0, N, n, derive_key(500, static_cast<std::uint64_t>(t)));
        if (find_all_ones_columns(psi).empty()) ++none;
    }
    const double p_col = std::pow(0.9, N);
    const double exact = std::pow(1.0 - p_col, n);
    const double se = test_support::binomial_se(exact, trials);
    CHECK(std::abs(static_cast<double>(none) / trials - exact) <= 4.0 * se);
}

TEST_CASE("single all-ones column: minor norm is that column's norm") {
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    Decomposition dec;
    dec.law = law;
    dec.scheme = upper_scheme();
    dec.cutoff = threshold(dec.scheme, law, 64, 128);
    const int N = 128, n = 64;
    Eigen::MatrixXi bits = Eigen::MatrixXi::Ones(N, n);
    for (int j = 1; j < n; ++j) bits(j % N, j) = 0; // only column 0 stays all ones
    dec.labels = labels_from(bits);
    dec.small = sample_conditional_matrix(law, dec.cutoff.tau, Side::Small, N, n, 7);
    dec.large = sample_conditional_matrix(law, dec.cutoff.tau, Side::Large, N, n, 7);
    const Mat x = assemble(dec);

    const MinorReport rep = minor_upper_bound(dec, x);
    REQUIRE(rep.applicable);
    CHECK(rep.all_ones_columns == std::vector<int>{0});
    CHECK(rep.minor_norm == doctest::Approx(dec.small.col(0).norm()).epsilon(1e-9));
    CHECK(rep.sigma_le_minor);
    CHECK(rep.c_hat ==
          doctest::Approx(rep.minor_norm /
                          std::pow(static_cast<double>(dec.cutoff.base_size),
                                   1.0 / law.alpha - 0.5 * dec.cutoff.epsilon_tilde))
              .epsilon(1e-12));
}

TEST_CASE("all-ones labels: the minor is the whole small matrix") {
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    Decomposition dec;
    dec.law = law;
    dec.scheme = upper_scheme();
    dec.cutoff = threshold(dec.scheme, law, 60, 120);
    dec.labels = labels_from(Eigen::MatrixXi::Ones(120, 60));
    dec.small = sample_conditional_matrix(law, dec.cutoff.tau, Side::Small, 120, 60, 8);
    dec.large = sample_conditional_matrix(law, dec.cutoff.tau, Side::Large, 120, 60, 8);
    const Mat x = assemble(dec);
    CHECK(x == dec.small);

    const MinorReport rep = minor_upper_bound(dec, x);
    CHECK(rep.all_ones_columns.size() == 60);
    CHECK(rep.minor_norm == doctest::Approx(operator_norm(dec.small, 1e-12)).epsilon(1e-9));
    CHECK(rep.sigma_le_minor);
}

TEST_CASE("sampled instances: sigma_min <= minor norm <= full norm") {
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    const TruncationScheme scheme = upper_scheme();
    int applicable = 0;
    for (int t = 0; t < 40; ++t) {
        const Decomposition dec =
            sample_decomposition(law, scheme, 60, 120, derive_key(600, static_cast<std::uint64_t>(t)));
        const Mat x = assemble(dec);
        const MinorReport rep = minor_upper_bound(dec, x);
        CHECK(rep.p_no_all_ones_exact <= 1.0);
        if (!rep.applicable) continue;
        ++applicable;
        CHECK(rep.sigma_le_minor);
        CHECK(rep.minor_norm <= operator_norm(dec.small, 1e-10) * (1.0 + 1e-8));
    }
    CHECK(applicable > 0);
}

TEST_CASE("normalized 99th percentile of sigma_min is stable across sizes") {
    // sigma_min(X) / (n^{1/alpha} (log n)^{(alpha-2)/(2 alpha)}) at alpha = 1:
    // the top percentile stays bounded and drifts < 25% across a 4x size span.
    std::ostringstream cfg_text;
    cfg_text << "experiment.name = sigma_min\nlaw.kind = pareto\nlaw.alpha = 1.0\n"
             << "scheme.regime = upper\nscheme.b = 0.5\nscheme.delta = 2.0\n"
             << "sizes = 250:500, 500:1000, 1000:2000\ntrials = 100\nseed = 424242\nworkers = 2\n";
    const auto cfg = ssv::ExperimentConfig::from_kv(ssv::KeyValueFile::parse(cfg_text.str()));
    const auto records = run_sweep(cfg);
    std::map<int, std::vector<double>> ratios;
    for (const auto& r : records)
        ratios[r.n].push_back(r.sigma_min / (static_cast<double>(r.n) /
                                             std::sqrt(std::log(static_cast<double>(r.n)))));
    std::vector<double> q99;
    for (auto& [n, v] : ratios) {
        std::sort(v.begin(), v.end());
        q99.push_back(v[static_cast<std::size_t>(0.99 * (v.size() - 1))]);
        CHECK(std::isfinite(q99.back()));
    }
    const double lo = *std::min_element(q99.begin(), q99.end());
    const double hi = *std::max_element(q99.begin(), q99.end());
    CHECK(hi / lo < 1.25);
}

TEST_CASE("seginer: 1x1 exact identity") {
    const auto sampler = [](CounterRng& rng) { return rng.sign() * rng.uniform_oo(); };
    const SeginerReport rep = seginer_check(sampler, 1, 1, 2, 500, 42);
    CHECK(rep.c_hat == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("seginer: zero matrices give zero") {
    const auto zero = [](CounterRng&) { return 0.0; };
    const SeginerReport rep = seginer_check(zero, 4, 3, 2, 20, 1);
    CHECK(rep.lhs == 0.0);
    CHECK(rep.c_hat == 0.0);
}

TEST_CASE("seginer: q outside the lemma range is rejected") {
    const auto sampler = [](CounterRng& rng) { return rng.gaussian(); };
    CHECK_THROWS_AS(seginer_check(sampler, 50, 25, 10, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(seginer_check(sampler, 50, 25, 3, 10, 1), std::invalid_argument);
}

TEST_CASE("seginer: empirical constant is stable across sizes") {
    const TailLaw law = TailLaw::symmetric_pareto(1.0);
    std::vector<double> c_hats;
    for (const int m2 : {50, 100, 200}) {
        const int m1 = 2 * m2;
        const double tau = std::pow(static_cast<double>(m2), 0.8);
        const auto sampler = [&law, tau](CounterRng& rng) {
            return sample_conditional(law, tau, Side::Small, rng);
        };
        c_hats.push_back(seginer_check(sampler, m1, m2, 2, 60,
                                       derive_key(700, static_cast<std::uint64_t>(m2)))
                             .c_hat);
    }
    const double lo = *std::min_element(c_hats.begin(), c_hats.end());
    const double hi = *std::max_element(c_hats.begin(), c_hats.end());
    CHECK(hi / lo <= 1.3);
}
