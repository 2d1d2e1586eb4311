#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lsmcf/core_grid.hpp"

namespace lsmcf {

// Parameters of one canned experiment. Zero-valued optional knobs select the
// scenario's own default (eta = 2h, eps = h, dt from the CFL bound aligned to
// the sample cadence).
struct ScenarioSpec {
    std::string name;
    int nx = 256;         // cells per axis on [-1.5, 1.5]^n
    int refine = 1;       // resolution multiplier applied to nx
    double t_max = 0.3;
    double delta = 0.3;
    double eta = 0;
    double eps = 0;
    double safety = 0.25;
    double dt = 0;
    double sample_every = 0.05;  // time between snapshots used for metrics
    int snapshot_every = 0;      // steps; overrides sample_every when > 0
    std::string out_dir;         // empty: no files written
    bool vtk = false;

    int cells() const { return nx * refine; }
    void validate() const;
};

struct Check {
    enum class Rel { LessEq, GreaterEq };
    std::string metric;
    Rel rel = Rel::LessEq;
    double bound = 0;
};

struct ScenarioReport {
    std::string name;
    std::vector<std::pair<std::string, double>> metrics;  // in insertion order
    std::vector<Check> checks;
    // Monitored hypothesis of the claim under test; false turns a failing
    // report into "hypothesis-failure".
    bool hypothesis_holds = true;
    std::string status;  // pass | fail | hypothesis-failure
    bool pass = false;
    std::vector<std::string> artifacts;

    double metric(const std::string& key) const;  // throws on unknown key
    bool has_metric(const std::string& key) const;
    bool check_holds(const Check& c) const;
    // Sets pass and status from metrics, checks and the hypothesis flag.
    void finalize();
};

struct ScenarioInfo {
    std::string name;
    std::string claim;
    std::string criteria;
};

const std::vector<ScenarioInfo>& scenario_registry();
bool is_scenario(const std::string& name);
ScenarioSpec default_spec(const std::string& name);
std::string describe(const std::string& name);

ScenarioReport run_scenario(const ScenarioSpec& spec);
std::vector<ScenarioReport> run_all(const std::vector<ScenarioSpec>& specs);

void write_report_csv(const std::string& path, const ScenarioReport& report);

// Residual constants of the analytic supersolution candidates on a cells^2 grid.
struct SupersolutionResiduals {
    double h = 0;
    double barrier_min = 0;  // min residual of the barrier over non-kink nodes
    double w_min = 0;        // min residual of dist(., exact circle) ^ delta off ridges
    double w_constant = 0;   // max(0, -w_min) / h
    double barrier_constant = 0;
};

SupersolutionResiduals supersolution_residuals(int cells, double delta);

// Max interior error of the operator on (x^2 + y^2) / 2 against the value 1,
// over the annulus 0.5 <= r <= 1.2, with eps = h.
double radial_quadratic_error(int cells);

}  // namespace lsmcf
