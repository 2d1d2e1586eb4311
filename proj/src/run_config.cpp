#include "lsmcf/run_config.hpp"

#include <charconv>
#include <fstream>
#include <set>

namespace lsmcf {

ConfigError::ConfigError(const std::string& msg, int line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v, int line) {
    T out{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty())
        throw ConfigError("cannot parse value '" + v + "' for " + key, line);
    return out;
}

bool parse_bool(const std::string& key, const std::string& v, int line) {
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw ConfigError("cannot parse value '" + v + "' for " + key + " (expected true/false)", line);
}

}  // namespace

void RunConfig::apply(ScenarioSpec& spec) const {
    if (nx) spec.nx = *nx;
    if (refine) spec.refine = *refine;
    if (t_max) spec.t_max = *t_max;
    if (dt) spec.dt = *dt;
    if (delta) spec.delta = *delta;
    if (eta) spec.eta = *eta;
    if (eps) spec.eps = *eps;
    if (safety) spec.safety = *safety;
    if (sample_every) spec.sample_every = *sample_every;
    if (snapshot_every) spec.snapshot_every = *snapshot_every;
    if (out) spec.out_dir = *out;
    if (vtk) spec.vtk = *vtk;
}

RunConfig parse_config(std::istream& in) {
    RunConfig c;
    std::set<std::string> seen;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value", line);
        const std::string key = trim(body.substr(0, eq));
        const std::string v = trim(body.substr(eq + 1));
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line);
        if (key == "scenario") {
            if (!is_scenario(v)) throw ConfigError("unknown scenario '" + v + "'", line);
            c.scenario = v;
        } else if (key == "nx") {
            c.nx = parse_number<int>(key, v, line);
        } else if (key == "refine") {
            c.refine = parse_number<int>(key, v, line);
        } else if (key == "t_max") {
            c.t_max = parse_number<double>(key, v, line);
        } else if (key == "dt") {
            c.dt = parse_number<double>(key, v, line);
        } else if (key == "delta") {
            c.delta = parse_number<double>(key, v, line);
        } else if (key == "eta") {
            c.eta = parse_number<double>(key, v, line);
        } else if (key == "eps") {
            c.eps = parse_number<double>(key, v, line);
        } else if (key == "safety") {
            c.safety = parse_number<double>(key, v, line);
        } else if (key == "sample_every") {
            c.sample_every = parse_number<double>(key, v, line);
        } else if (key == "snapshot_every") {
            c.snapshot_every = parse_number<int>(key, v, line);
        } else if (key == "out") {
            if (v.empty()) throw ConfigError("empty value for out", line);
            c.out = v;
        } else if (key == "vtk") {
            c.vtk = parse_bool(key, v, line);
        } else {
            throw ConfigError("unknown key '" + key + "'", line);
        }
    }
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path, 0);
    return parse_config(in);
}

}  // namespace lsmcf
