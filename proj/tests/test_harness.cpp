#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ssvlab/harness.hpp"

using namespace ssv;

namespace {

KeyValueFile small_sweep_kv() {
    return KeyValueFile::parse(
        "experiment.name = sigma_min\n"
        "law.kind = pareto\n"
        "law.alpha = 1.0\n"
        "scheme.regime = lower\n"
        "scheme.c = 0.05\n"
        "sizes = 16:32, 20:40\n"
        "trials = 3\n"
        "seed = 11\n");
}

std::vector<std::string> payloads(const std::vector<TrialRecord>& records) {
    std::vector<std::string> out;
    for (const auto& r : records) out.push_back(r.payload());
    return out;
}

} // namespace

TEST_CASE("config parsing and unknown-key rejection") {
    const auto cfg = ExperimentConfig::from_kv(small_sweep_kv());
    CHECK(cfg.experiment == "sigma_min");
    CHECK(cfg.sizes.size() == 2);
    CHECK(cfg.trials == 3);
    CHECK(cfg.root_seed == 11);

    auto bad = small_sweep_kv();
    bad.set("law.alfa", "1.0");
    try {
        ExperimentConfig::from_kv(bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("law.alfa") != std::string::npos);
    }

    CHECK_THROWS_AS(KeyValueFile::parse("key_without_value\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueFile::parse("a = 1\na = 2\n"), ConfigError);
}

TEST_CASE("config validation") {
    auto kv = small_sweep_kv();
    kv.set("sizes", "100:150"); // violates N >= ceil(2 * 100)
    CHECK_THROWS_AS(ExperimentConfig::from_kv(kv), ConfigError);

    kv = small_sweep_kv();
    kv.set("trials", "0");
    CHECK_THROWS_AS(ExperimentConfig::from_kv(kv), ConfigError);

    kv = small_sweep_kv();
    kv.set("experiment.name", "unheard_of");
    CHECK_THROWS_AS(ExperimentConfig::from_kv(kv), ConfigError);
}

TEST_CASE("bare sizes expand with the aspect ratio") {
    const auto sizes = parse_sizes("100, 200:500", 2.0);
    REQUIRE(sizes.size() == 2);
    CHECK(sizes[0] == std::pair<int, int>{100, 200});
    CHECK(sizes[1] == std::pair<int, int>{200, 500});
    CHECK_THROWS_AS(parse_sizes("", 2.0), ConfigError);
    CHECK_THROWS_AS(parse_sizes("abc", 2.0), ConfigError);
}

TEST_CASE("records round-trip losslessly") {
    TrialRecord r;
    r.experiment = "sigma_min";
    r.n = 123;
    r.N = 456;
    r.alpha = 0.7431;
    r.regime = "lower";
    r.seed = 0xdeadbeefcafef00dULL;
    r.sigma_min = 1.2345678901234567e-17;
    r.sigma_max = 9.87654321e12;
    r.extras["delta"] = -3.5e-9;
    r.extras["note"] = "x";
    r.extras["flag"] = true;
    r.wall_time_ms = 12.5;

    const TrialRecord back = TrialRecord::from_line(r.to_line());
    CHECK(back.payload() == r.payload());
    CHECK(back.seed == r.seed);
    CHECK(back.sigma_min == r.sigma_min);
    CHECK(back.sigma_max == r.sigma_max);
    CHECK(back.extras == r.extras);

    // payload excludes wall time only
    TrialRecord timed = r;
    timed.wall_time_ms = 99999.0;
    CHECK(timed.payload() == r.payload());
    CHECK(timed.to_line() != r.to_line());
}

TEST_CASE("run_sweep basics and determinism") {
    auto kv = small_sweep_kv();
    kv.set("sizes", "16:32");
    kv.set("trials", "1");
    const auto one = run_sweep(ExperimentConfig::from_kv(kv));
    CHECK(one.size() == 1);
    CHECK(one[0].sigma_min <= one[0].sigma_max);
    CHECK(one[0].n == 16);

    const auto cfg = ExperimentConfig::from_kv(small_sweep_kv());
    const auto a = run_sweep(cfg);
    const auto b = run_sweep(cfg);
    CHECK(payloads(a) == payloads(b));
}

TEST_CASE("worker count does not change payloads") {
    auto kv = small_sweep_kv();
    kv.set("trials", "4");
    const auto serial = run_sweep(ExperimentConfig::from_kv(kv));
    kv.set("workers", "4");
    const auto parallel = run_sweep(ExperimentConfig::from_kv(kv));
    CHECK(payloads(serial) == payloads(parallel));
}

TEST_CASE("record streams merge across split size lists") {
    auto kv = small_sweep_kv();
    kv.set("sizes", "12:24, 16:32, 20:40");
    const auto mono = run_sweep(ExperimentConfig::from_kv(kv));

    auto kv1 = small_sweep_kv();
    kv1.set("sizes", "12:24");
    auto kv2 = small_sweep_kv();
    kv2.set("sizes", "16:32, 20:40");
    auto merged = run_sweep(ExperimentConfig::from_kv(kv1));
    for (auto& r : run_sweep(ExperimentConfig::from_kv(kv2))) merged.push_back(r);

    CHECK(payloads(mono) == payloads(merged));
    const auto fit_mono = fit_exponent(mono, "sigma_min");
    const auto fit_merged = fit_exponent(merged, "sigma_min");
    CHECK(fit_mono.slope == fit_merged.slope);
    CHECK(fit_mono.intercept == fit_merged.intercept);
}

TEST_CASE("sweep writes records in task order") {
    auto kv = small_sweep_kv();
    kv.set("workers", "3");
    std::ostringstream out;
    const auto records = run_sweep(ExperimentConfig::from_kv(kv), &out);
    std::istringstream in(out.str());
    const auto parsed = read_records(in);
    REQUIRE(parsed.size() == records.size());
    for (std::size_t i = 0; i < parsed.size(); ++i)
        CHECK(parsed[i].payload() == records[i].payload());
}

TEST_CASE("fit_exponent recovers exact power laws") {
    std::vector<TrialRecord> records;
    for (const int n : {100, 200, 400, 800}) {
        for (int t = 0; t < 5; ++t) {
            TrialRecord r;
            r.experiment = "synthetic";
            r.n = n;
            r.N = 2 * n;
            r.sigma_min = static_cast<double>(n) * n;
            r.sigma_max = r.sigma_min;
            records.push_back(r);
        }
    }
    const auto fit = fit_exponent(records, "sigma_min");
    CHECK(std::abs(fit.slope - 2.0) < 1e-9);
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    for (auto& r : records) r.sigma_min = std::pow(r.n, 1.0 / 0.5);
    CHECK(std::abs(fit_exponent(records, "sigma_min").slope - 2.0) < 1e-9);

    records.erase(std::remove_if(records.begin(), records.end(),
                                 [](const TrialRecord& r) { return r.n > 200; }),
                  records.end());
    CHECK_THROWS_AS(fit_exponent(records, "sigma_min"), std::invalid_argument);
}

TEST_CASE("sandwich trivial sentinels") {
    std::vector<TrialRecord> records;
    for (const int n : {100, 200}) {
        TrialRecord r;
        r.n = n;
        r.sigma_min = std::pow(n, 1.0) * std::pow(std::log(n), -1.0);
        records.push_back(r);
    }
    CHECK(sandwich_check(records, 1.0, 0.0, INFINITY) == 1.0);
    const auto [c1, c2] = calibrate_sandwich(records, 1.0);
    CHECK(sandwich_check(records, 1.0, c1, c2) == 1.0);
}

TEST_CASE("median conventions") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK_THROWS_AS(median({}), std::invalid_argument);
}

TEST_CASE("trial keys depend on size identity, not position") {
    const auto a = trial_stream_key(7, 100, 200, 3);
    CHECK(a == trial_stream_key(7, 100, 200, 3));
    CHECK(a != trial_stream_key(7, 100, 200, 4));
    CHECK(a != trial_stream_key(7, 100, 201, 3));
    CHECK(a != trial_stream_key(8, 100, 200, 3));
}
