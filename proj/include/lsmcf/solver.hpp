#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lsmcf/core_grid.hpp"
#include "lsmcf/operator.hpp"

namespace lsmcf {

struct ObstacleSpec {
    std::optional<ScalarField> psi_plus;   // absent = +infinity
    std::optional<ScalarField> psi_minus;  // absent = -infinity
    double delta = 0.3;

    // psi_plus = cap(dist(., sigma), delta).
    static ObstacleSpec upper_from_sigma(const GeometrySet& sigma, const Grid& grid, double delta);
    // psi_plus = cap(dist(., sigma), delta) and psi_minus = -psi_plus, for signed data.
    static ObstacleSpec symmetric_from_sigma(const GeometrySet& sigma, const Grid& grid, double delta);
    // As above from an already built nonnegative bound.
    static ObstacleSpec symmetric(const ScalarField& bound, double delta);

    void validate(const Grid& grid) const;
};

struct SolverConfig {
    double t_max = 0;
    double dt = 0;         // 0 selects cfl_dt(grid, safety)
    double safety = 0.25;
    int snapshot_every = 0;  // 0 keeps only the first and last state
    bool enforce_nonneg = true;
    // The evolved field is a signed representation; reported u is its modulus.
    bool signed_field = false;
};

struct Diagnostics {
    double t = 0;
    std::size_t step = 0;
    double min_u = 0;
    double max_u = 0;
    double obstacle_violation = 0;
    double lipschitz = 0;
    std::optional<double> front_radius_min;
    std::optional<double> front_radius_max;
    std::optional<double> fattening_ratio;
};

struct Trajectory {
    Grid grid;
    double dt = 0;
    bool signed_field = false;
    std::vector<double> times;
    std::vector<std::size_t> steps;
    std::vector<ScalarField> snapshots;  // evolved field as stepped
    std::vector<Diagnostics> diagnostics;
    // max(u - psi_plus, psi_minus - u, 0) over every step, not just snapshots.
    double max_violation_all_steps = 0;

    ScalarField reported(std::size_t k) const;  // u = |field| for signed runs
    std::size_t index_of_time(double t) const;   // nearest snapshot
};

struct DirichletSpec {
    std::vector<std::uint8_t> interior;  // 1 = node of U updated by the scheme
    ScalarField g;                       // boundary values, read on the boundary layer

    // Layer = stencil neighbours of interior nodes that are not interior.
    std::vector<std::uint8_t> boundary_layer() const;
    void validate() const;

    // Interior = nodes strictly inside the disk/ball.
    static DirichletSpec ball(const Grid& grid, const Vec3& center, double radius, const ScalarField& g);
};

using StepObserver = std::function<void(std::size_t step, double t, const ScalarField& field)>;

Trajectory evolve_free(const ScalarField& u0, const OperatorParams& params, const SolverConfig& cfg,
                       const StepObserver& observer = {});
Trajectory evolve_obstacle(const ScalarField& u0, const ObstacleSpec& obs, const OperatorParams& params,
                           const SolverConfig& cfg, const StepObserver& observer = {});
Trajectory evolve_dirichlet(const ScalarField& v0, const DirichletSpec& spec, const OperatorParams& params,
                            const SolverConfig& cfg, const StepObserver& observer = {});

struct ComparisonReport {
    double max_violation = 0;  // max over snapshots of max(u - v, 0)
    std::size_t worst_snapshot = 0;
};

ComparisonReport comparison_check(const Trajectory& u, const Trajectory& v);

double resolve_dt(const Grid& grid, const SolverConfig& cfg);

// Writes u_<step>.csv per snapshot (reported u) and diagnostics.csv into dir.
std::vector<std::string> export_trajectory(const Trajectory& traj, const std::string& dir, bool vtk = false);
void write_diagnostics_csv(const std::string& path, const std::vector<Diagnostics>& diags);

}  // namespace lsmcf
