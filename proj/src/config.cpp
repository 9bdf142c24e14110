#include "ssvlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ssv {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Keys understood by every experiment, plus per-experiment extras.
const std::set<std::string> kGlobalKeys = {
    "experiment.name", "law.kind", "law.alpha", "law.sigma", "law.beta",
    "scheme.regime", "scheme.base", "scheme.b", "scheme.c", "scheme.delta", "scheme.Cu",
    "sizes", "trials", "seed", "tolerance", "out", "workers",
};

const std::map<std::string, std::set<std::string>> kExperimentKeys = {
    {"sigma_min", {}},
    {"bai_yin", {}},
    {"upper_bound", {"bound.constant"}},
    {"coupling", {"coupling.C", "hausdorff.epsilon"}},
    {"hausdorff", {"hausdorff.epsilon", "coupling.C"}},
    {"polytope", {}},
    {"perturbed", {"shift.magnitude", "weights.lower", "weights.upper"}},
    {"seginer", {"seginer.q", "seginer.trials"}},
    {"rogozin", {"rogozin.h", "rogozin.trials"}},
    {"nets", {"net.m", "net.epsilon", "net.probes", "net.budget"}},
};

} // namespace

KeyValueFile KeyValueFile::parse(const std::string& text) {
    KeyValueFile kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (kv.values_.count(key))
            throw ConfigError("config: duplicate key '" + key + "'");
        kv.values_[key] = value;
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string KeyValueFile::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("config: missing key '" + key + "'");
    return it->second;
}

std::string KeyValueFile::get_or(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueFile::number(const std::string& key) const {
    const std::string v = get(key);
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' is not a number: '" + v + "'");
    }
}

double KeyValueFile::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

long KeyValueFile::integer_or(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const double x = number(key);
    if (x != std::floor(x)) throw ConfigError("config: key '" + key + "' must be an integer");
    return static_cast<long>(x);
}

TailLaw LawSpec::tail_law() const {
    if (kind == "pareto") return TailLaw::symmetric_pareto(alpha);
    if (kind == "stable") return TailLaw::alpha_stable(alpha, sigma);
    if (kind == "slowvarying") return TailLaw::slow_varying_pareto(alpha, beta);
    throw ConfigError("law.kind '" + kind + "' is not a heavy-tailed law");
}

std::vector<std::pair<int, int>> parse_sizes(const std::string& text, double delta) {
    std::vector<std::pair<int, int>> sizes;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        int n = 0, N = 0;
        try {
            if (colon == std::string::npos) {
                n = std::stoi(item);
                N = static_cast<int>(std::ceil(delta * n));
            } else {
                n = std::stoi(trim(item.substr(0, colon)));
                N = std::stoi(trim(item.substr(colon + 1)));
            }
        } catch (const std::exception&) {
            throw ConfigError("config: bad size entry '" + item + "'");
        }
        sizes.emplace_back(n, N);
    }
    if (sizes.empty()) throw ConfigError("config: sizes list is empty");
    return sizes;
}

ExperimentConfig ExperimentConfig::from_kv(const KeyValueFile& kv) {
    ExperimentConfig cfg;
    cfg.raw = kv;
    cfg.experiment = kv.get("experiment.name");

    const auto reg = kExperimentKeys.find(cfg.experiment);
    if (reg == kExperimentKeys.end())
        throw ConfigError("config: unknown experiment '" + cfg.experiment + "'");
    for (const auto& [key, value] : kv.values()) {
        (void)value;
        if (kGlobalKeys.count(key) || reg->second.count(key)) continue;
        throw ConfigError("config: unknown key '" + key + "'");
    }

    cfg.law.kind = kv.get_or("law.kind", "pareto");
    cfg.law.alpha = kv.number_or("law.alpha", 1.0);
    cfg.law.sigma = kv.number_or("law.sigma", 1.0);
    cfg.law.beta = kv.number_or("law.beta", 0.0);
    if (cfg.law.kind != "gaussian") cfg.law.tail_law(); // validates

    const std::string regime = kv.get_or("scheme.regime", "lower");
    if (regime == "upper") cfg.scheme.regime = Regime::Upper;
    else if (regime == "lower") cfg.scheme.regime = Regime::Lower;
    else throw ConfigError("config: scheme.regime must be 'upper' or 'lower'");
    const std::string base = kv.get_or("scheme.base", "n");
    if (base == "n" || base == "UseN_small") cfg.scheme.base = ThresholdBase::Cols;
    else if (base == "N" || base == "UseN_big") cfg.scheme.base = ThresholdBase::Rows;
    else throw ConfigError("config: scheme.base must be 'n' or 'N'");
    cfg.scheme.b = kv.number_or("scheme.b", 0.5);
    cfg.scheme.c = kv.number_or("scheme.c", 1.0);
    cfg.scheme.delta = kv.number_or("scheme.delta", 2.0);
    cfg.scheme.c_u = kv.number_or("scheme.Cu", 1.0);

    cfg.sizes = parse_sizes(kv.get("sizes"), cfg.scheme.delta);
    cfg.trials = static_cast<int>(kv.integer_or("trials", 1));
    cfg.root_seed = static_cast<std::uint64_t>(kv.integer_or("seed", 0));
    cfg.tolerance = kv.number_or("tolerance", 1e-10);
    cfg.out_path = kv.get_or("out", "");
    cfg.workers = static_cast<int>(kv.integer_or("workers", 1));

    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    return from_kv(KeyValueFile::load(path));
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("config: trials must be at least 1");
    if (workers < 1) throw ConfigError("config: workers must be at least 1");
    scheme.validate();
    for (const auto& [n, N] : sizes) {
        if (n < 1 || N < 1) throw ConfigError("config: sizes must be positive");
        const bool needs_aspect = experiment != "seginer" && experiment != "rogozin" &&
                                  experiment != "nets";
        if (needs_aspect && N < static_cast<int>(std::ceil(scheme.delta * n)))
            throw ConfigError("config: size " + std::to_string(n) + ":" + std::to_string(N) +
                              " violates N >= ceil(delta n) for delta = " +
                              std::to_string(scheme.delta));
    }
}

} // namespace ssv
