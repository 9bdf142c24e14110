#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssvlab/config.hpp"
#include "ssvlab/records.hpp"

namespace ssv {

/// One registered experiment body: produces the record for a single trial.
/// trial_key is derived from (root seed, n, N, trial index), so splitting a
/// size list across runs reproduces the same per-size records.
using ExperimentFn = std::function<TrialRecord(const ExperimentConfig&, int n, int N,
                                               int trial_index, std::uint64_t trial_key)>;

const std::map<std::string, ExperimentFn>& experiment_registry();

std::uint64_t trial_stream_key(std::uint64_t root_seed, int n, int N, int trial_index);

/// Runs every (size, trial) task of the config over a share-nothing worker
/// pool and appends records to the stream in task order. Record payloads are
/// a pure function of (config, root seed), independent of the worker count.
/// On failure, records completed so far are flushed before the error is
/// rethrown.
std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg, std::ostream* stream = nullptr);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> points; // (log n, log median value)
    double loglog_coeff = 0.0; // optional log log n regressor, reported separately
    bool has_loglog = false;
};

/// OLS of log median value against log group-key over at least three sizes.
/// value_key is "sigma_min", "sigma_max" or an extras key.
ScalingFit fit_exponent(const std::vector<TrialRecord>& records, const std::string& value_key,
                        const std::string& group_key = "n");

/// Two-sided sandwich forms of the scaling law at tail index alpha.
double sandwich_lower_form(double alpha, int n);
double sandwich_upper_form(double alpha, int n);

/// (c1, c2) from a calibration split: the extreme ratios of sigma_min to the
/// two forms.
std::pair<double, double> calibrate_sandwich(const std::vector<TrialRecord>& calibration,
                                             double alpha);

/// Fraction of records with c1 * lower_form <= sigma_min <= c2 * upper_form.
double sandwich_check(const std::vector<TrialRecord>& records, double alpha, double c1,
                      double c2);

double median(std::vector<double> values);

} // namespace ssv
