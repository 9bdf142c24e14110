#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace ssv {

/// One Monte Carlo outcome, serialized as a single JSON line with a fixed
/// field order: experiment, n, N, alpha, regime, seed, sigma_min, sigma_max,
/// extras, wall_time_ms. The payload (line minus wall_time_ms) is the unit of
/// determinism comparisons.
struct TrialRecord {
    std::string experiment;
    int n = 0;
    int N = 0;
    double alpha = 0.0;
    std::string regime = "none";
    std::uint64_t seed = 0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    nlohmann::ordered_json extras = nlohmann::ordered_json::object();
    double wall_time_ms = 0.0;

    std::string to_line() const;
    std::string payload() const; // wall_time_ms stripped
    static TrialRecord from_line(const std::string& line);

    double extra_number(const std::string& key) const;
    bool has_extra(const std::string& key) const { return extras.contains(key); }
};

std::vector<TrialRecord> read_records(std::istream& in);
std::vector<TrialRecord> read_records_file(const std::string& path);

} // namespace ssv
