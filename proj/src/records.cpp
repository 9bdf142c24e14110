#include "ssvlab/records.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ssv {

namespace {

nlohmann::ordered_json to_json(const TrialRecord& r, bool with_wall_time) {
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["n"] = r.n;
    j["N"] = r.N;
    j["alpha"] = r.alpha;
    j["regime"] = r.regime;
    j["seed"] = r.seed;
    j["sigma_min"] = r.sigma_min;
    j["sigma_max"] = r.sigma_max;
    j["extras"] = r.extras;
    if (with_wall_time) j["wall_time_ms"] = r.wall_time_ms;
    return j;
}

} // namespace

std::string TrialRecord::to_line() const { return to_json(*this, true).dump(); }

std::string TrialRecord::payload() const { return to_json(*this, false).dump(); }

TrialRecord TrialRecord::from_line(const std::string& line) {
    const auto j = nlohmann::ordered_json::parse(line);
    TrialRecord r;
    r.experiment = j.at("experiment").get<std::string>();
    r.n = j.at("n").get<int>();
    r.N = j.at("N").get<int>();
    r.alpha = j.at("alpha").get<double>();
    r.regime = j.at("regime").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.sigma_min = j.at("sigma_min").get<double>();
    r.sigma_max = j.at("sigma_max").get<double>();
    r.extras = j.at("extras");
    r.wall_time_ms = j.value("wall_time_ms", 0.0);
    return r;
}

double TrialRecord::extra_number(const std::string& key) const {
    if (!extras.contains(key))
        throw std::out_of_range("record has no extra '" + key + "'");
    return extras.at(key).get<double>();
}

std::vector<TrialRecord> read_records(std::istream& in) {
    std::vector<TrialRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(TrialRecord::from_line(line));
    }
    return out;
}

std::vector<TrialRecord> read_records_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open records file: " + path);
    return read_records(in);
}

} // namespace ssv
