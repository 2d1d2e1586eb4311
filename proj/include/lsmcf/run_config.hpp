#pragma once

#include <istream>
#include <optional>
#include <string>

#include "lsmcf/scenarios.hpp"

namespace lsmcf {

// key=value settings read from a file. Every field is optional; absent fields
// leave the scenario default in place.
struct RunConfig {
    std::optional<std::string> scenario;
    std::optional<int> nx;
    std::optional<int> refine;
    std::optional<double> t_max;
    std::optional<double> dt;
    std::optional<double> delta;
    std::optional<double> eta;
    std::optional<double> eps;
    std::optional<double> safety;
    std::optional<double> sample_every;
    std::optional<int> snapshot_every;
    std::optional<std::string> out;
    std::optional<bool> vtk;

    // Overwrites the fields of `spec` that are set here.
    void apply(ScenarioSpec& spec) const;
};

// Thrown for malformed configuration; line is 0 when not tied to a line.
class ConfigError : public Error {
public:
    ConfigError(const std::string& msg, int line);
    int line() const { return line_; }

private:
    int line_;
};

RunConfig parse_config(std::istream& in);
RunConfig parse_config(const std::string& path);

}  // namespace lsmcf
