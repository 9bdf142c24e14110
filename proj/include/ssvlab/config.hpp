#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ssvlab/sampler.hpp"

namespace ssv {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Flat key = value file with dotted keys and '#' comments. Unknown keys are
/// rejected when the config is bound to an experiment.
class KeyValueFile {
public:
    static KeyValueFile parse(const std::string& text);
    static KeyValueFile load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long integer_or(const std::string& key, long fallback) const;
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Entry-law spec as configured; kind "gaussian" selects the light-tailed
/// control law used by the Bai-Yin oracle rather than a TailLaw.
struct LawSpec {
    std::string kind = "pareto"; // pareto | stable | slowvarying | gaussian
    double alpha = 1.0;
    double sigma = 1.0;
    double beta = 0.0;

    bool is_gaussian() const { return kind == "gaussian"; }
    TailLaw tail_law() const;
};

struct ExperimentConfig {
    std::string experiment;
    LawSpec law;
    TruncationScheme scheme;
    std::vector<std::pair<int, int>> sizes; // (n, N)
    int trials = 1;
    std::uint64_t root_seed = 0;
    double tolerance = 1e-10;
    std::string out_path;
    int workers = 1;
    KeyValueFile raw; // experiment-specific keys live here

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_kv(const KeyValueFile& kv);

    void validate() const;
};

/// Parses "100:200, 400" style size lists; a bare n expands to
/// N = ceil(delta * n).
std::vector<std::pair<int, int>> parse_sizes(const std::string& text, double delta);

} // namespace ssv
