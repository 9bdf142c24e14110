#include "ssvlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "ssvlab/rng.hpp"

namespace ssv {

std::uint64_t trial_stream_key(std::uint64_t root_seed, int n, int N, int trial_index) {
    std::uint64_t k = derive_key(root_seed, 0x73697a65ULL);
    k = derive_key(k, static_cast<std::uint64_t>(n));
    k = derive_key(k, static_cast<std::uint64_t>(N));
    return derive_key(k, static_cast<std::uint64_t>(trial_index));
}

std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg, std::ostream* stream) {
    cfg.validate();
    const auto& registry = experiment_registry();
    const auto it = registry.find(cfg.experiment);
    if (it == registry.end()) throw ConfigError("unknown experiment '" + cfg.experiment + "'");
    const ExperimentFn& body = it->second;

    struct Task {
        int n, N, trial;
    };
    std::vector<Task> tasks;
    for (const auto& [n, N] : cfg.sizes)
        for (int t = 0; t < cfg.trials; ++t) tasks.push_back({n, N, t});

    std::vector<TrialRecord> results(tasks.size());
    std::vector<std::atomic<bool>> done(tasks.size());
    for (auto& d : done) d.store(false);
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;

    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (first_error) return;
            }
            const Task& task = tasks[i];
            try {
                const auto t0 = std::chrono::steady_clock::now();
                TrialRecord rec = body(cfg, task.n, task.N, task.trial,
                                       trial_stream_key(cfg.root_seed, task.n, task.N, task.trial));
                const auto t1 = std::chrono::steady_clock::now();
                rec.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                results[i] = std::move(rec);
                done[i].store(true, std::memory_order_release);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const int nworkers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(tasks.size())));
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    // Flush in task order; on error keep the completed prefix on disk.
    std::size_t flushed = 0;
    if (stream) {
        while (flushed < tasks.size() && done[flushed].load(std::memory_order_acquire)) {
            (*stream) << results[flushed].to_line() << '\n';
            ++flushed;
        }
        stream->flush();
    }
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t k = values.size();
    return k % 2 == 1 ? values[k / 2] : 0.5 * (values[k / 2 - 1] + values[k / 2]);
}

namespace {

double record_value(const TrialRecord& r, const std::string& key) {
    if (key == "sigma_min") return r.sigma_min;
    if (key == "sigma_max") return r.sigma_max;
    return r.extra_number(key);
}

double record_group(const TrialRecord& r, const std::string& key) {
    if (key == "n") return static_cast<double>(r.n);
    if (key == "N") return static_cast<double>(r.N);
    return r.extra_number(key);
}

} // namespace

ScalingFit fit_exponent(const std::vector<TrialRecord>& records, const std::string& value_key,
                        const std::string& group_key) {
    std::map<double, std::vector<double>> groups;
    for (const auto& r : records) groups[record_group(r, group_key)].push_back(record_value(r, value_key));
    if (groups.size() < 3)
        throw std::invalid_argument("fit_exponent: need at least three sizes, got " +
                                    std::to_string(groups.size()));

    ScalingFit fit;
    for (const auto& [g, vals] : groups) {
        const double med = median(vals);
        if (!(g > 0.0) || !(med > 0.0))
            throw std::domain_error("fit_exponent: nonpositive group or median value");
        fit.points.emplace_back(std::log(g), std::log(med));
    }

    const auto k = static_cast<double>(fit.points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : fit.points) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double det = k * sxx - sx * sx;
    fit.slope = (k * sxy - sx * sy) / det;
    fit.intercept = (sy * sxx - sx * sxy) / det;

    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / k;
    for (const auto& [x, y] : fit.points) {
        const double e = y - (fit.intercept + fit.slope * x);
        ss_res += e * e;
        ss_tot += (y - ybar) * (y - ybar);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    const double dof = k - 2.0;
    fit.stderr_slope = dof > 0.0 ? std::sqrt(ss_res / dof * k / det) : 0.0;

    // Optional log log correction, reported separately (never mixed into the
    // headline slope).
    if (fit.points.size() >= 3) {
        // Two-regressor OLS: y = a + b x + c log(x).
        double s1 = k, sz = 0, szz = 0, szx = 0, szy = 0;
        for (const auto& [x, y] : fit.points) {
            const double z = std::log(x);
            sz += z;
            szz += z * z;
            szx += z * x;
            szy += z * y;
        }
        // Solve the 3x3 normal equations by elimination.
        double m[3][4] = {{s1, sx, sz, sy}, {sx, sxx, szx, sxy}, {sz, szx, szz, szy}};
        for (int c = 0; c < 3; ++c) {
            int piv = c;
            for (int rr = c + 1; rr < 3; ++rr)
                if (std::abs(m[rr][c]) > std::abs(m[piv][c])) piv = rr;
            std::swap(m[c], m[piv]);
            if (std::abs(m[c][c]) < 1e-12) return fit; // degenerate; skip the correction
            for (int rr = 0; rr < 3; ++rr) {
                if (rr == c) continue;
                const double f = m[rr][c] / m[c][c];
                for (int cc = c; cc < 4; ++cc) m[rr][cc] -= f * m[c][cc];
            }
        }
        fit.loglog_coeff = m[2][3] / m[2][2];
        fit.has_loglog = true;
    }
    return fit;
}

double sandwich_lower_form(double alpha, int n) {
    const double ln = std::log(static_cast<double>(n));
    return std::pow(static_cast<double>(n), 1.0 / alpha) *
           std::pow(ln, 2.0 * (alpha - 2.0) / alpha);
}

double sandwich_upper_form(double alpha, int n) {
    const double ln = std::log(static_cast<double>(n));
    return std::pow(static_cast<double>(n), 1.0 / alpha) *
           std::pow(ln, (alpha - 2.0) / (2.0 * alpha));
}

std::pair<double, double> calibrate_sandwich(const std::vector<TrialRecord>& calibration,
                                             double alpha) {
    if (calibration.empty()) throw std::invalid_argument("calibrate_sandwich: no records");
    double c1 = INFINITY, c2 = 0.0;
    for (const auto& r : calibration) {
        c1 = std::min(c1, r.sigma_min / sandwich_lower_form(alpha, r.n));
        c2 = std::max(c2, r.sigma_min / sandwich_upper_form(alpha, r.n));
    }
    return {c1, c2};
}

double sandwich_check(const std::vector<TrialRecord>& records, double alpha, double c1,
                      double c2) {
    if (records.empty()) throw std::invalid_argument("sandwich_check: no records");
    std::size_t inside = 0;
    for (const auto& r : records) {
        const double lo = c1 * sandwich_lower_form(alpha, r.n);
        const double hi = c2 * sandwich_upper_form(alpha, r.n);
        if (r.sigma_min >= lo && r.sigma_min <= hi) ++inside;
    }
    return static_cast<double>(inside) / static_cast<double>(records.size());
}

} // namespace ssv
