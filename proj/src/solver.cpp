#include "lsmcf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "lsmcf/analysis.hpp"
#include "lsmcf/kernels.hpp"

namespace lsmcf {

ObstacleSpec ObstacleSpec::upper_from_sigma(const GeometrySet& sigma, const Grid& grid, double delta) {
    ObstacleSpec o;
    o.delta = delta;
    o.psi_plus = cap(distance_field(sigma, grid), delta);
    return o;
}

ObstacleSpec ObstacleSpec::symmetric(const ScalarField& bound, double delta) {
    ObstacleSpec o;
    o.delta = delta;
    o.psi_plus = bound;
    o.psi_minus = scaled(bound, -1.0);
    return o;
}

ObstacleSpec ObstacleSpec::symmetric_from_sigma(const GeometrySet& sigma, const Grid& grid, double delta) {
    return symmetric(cap(distance_field(sigma, grid), delta), delta);
}

void ObstacleSpec::validate(const Grid& grid) const {
    if (!(delta > 0)) throw Error("obstacle cap delta must be positive");
    if (psi_plus && psi_plus->grid() != grid) throw Error("psi_plus lives on a different grid");
    if (psi_minus && psi_minus->grid() != grid) throw Error("psi_minus lives on a different grid");
    if (psi_plus && psi_minus)
        for (std::size_t i = 0; i < grid.node_count(); ++i)
            if ((*psi_minus)[i] > (*psi_plus)[i])
                throw Error("psi_minus > psi_plus at node " + std::to_string(i));
}

ScalarField Trajectory::reported(std::size_t k) const {
    return signed_field ? abs_field(snapshots.at(k)) : snapshots.at(k);
}

std::size_t Trajectory::index_of_time(double t) const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < times.size(); ++k)
        if (std::abs(times[k] - t) < std::abs(times[best] - t)) best = k;
    return best;
}

double resolve_dt(const Grid& grid, const SolverConfig& cfg) {
    if (!(cfg.t_max > 0)) throw Error("t_max must be positive");
    const double dt = cfg.dt > 0 ? cfg.dt : cfl_dt(grid, cfg.safety);
    if (dt > cfl_dt(grid, 1.0)) throw Error("dt exceeds the CFL bound cfl_dt(grid, 1)");
    if (cfg.dt < 0) throw Error("dt must be positive");
    return dt;
}

namespace {

struct StepScan {
    bool finite = true;
    double violation = 0;
};

// One pass over the updated field: finiteness plus max obstacle violation.
StepScan scan(const std::vector<double>& u, const double* lo, const double* hi) {
    double acc[4] = {0, 0, 0, 0};
    double viol[4] = {0, 0, 0, 0};
    const std::size_t n = u.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        for (int l = 0; l < 4; ++l) {
            const double v = u[i + l];
            acc[l] += v - v;
            if (hi) viol[l] = std::max(viol[l], v - hi[i + l]);
            if (lo) viol[l] = std::max(viol[l], lo[i + l] - v);
        }
    for (; i < n; ++i) {
        const double v = u[i];
        acc[0] += v - v;
        if (hi) viol[0] = std::max(viol[0], v - hi[i]);
        if (lo) viol[0] = std::max(viol[0], lo[i] - v);
    }
    StepScan s;
    s.finite = std::isfinite(acc[0] + acc[1] + acc[2] + acc[3]);
    s.violation = std::max(std::max(viol[0], viol[1]), std::max(viol[2], viol[3]));
    return s;
}

Diagnostics diagnose(const ScalarField& field, bool signed_field, double t, std::size_t step, double violation) {
    Diagnostics d;
    d.t = t;
    d.step = step;
    const ScalarField u = signed_field ? abs_field(field) : field;
    const auto [mn, mx] = std::minmax_element(u.values().begin(), u.values().end());
    d.min_u = *mn;
    d.max_u = *mx;
    d.obstacle_violation = violation;
    d.lipschitz = lipschitz_estimate(u);
    return d;
}

enum class Mode { Free, Obstacle, Dirichlet };

Trajectory run(const ScalarField& u0, Mode mode, const std::vector<double>* lo, const std::vector<double>* hi,
               const std::vector<std::size_t>* frozen, const OperatorParams& params, const SolverConfig& cfg,
               const StepObserver& observer) {
    const Grid& grid = u0.grid();
    validate(params, grid);
    u0.check_finite("initial data");
    if (cfg.snapshot_every < 0) throw Error("snapshot_every must be >= 0");
    const double dt = resolve_dt(grid, cfg);
    const std::size_t nsteps = std::size_t(std::ceil(cfg.t_max / dt - 1e-9));

    Trajectory traj;
    traj.grid = grid;
    traj.dt = dt;
    traj.signed_field = cfg.signed_field;

    const double* plo = lo ? lo->data() : nullptr;
    const double* phi = hi ? hi->data() : nullptr;

    ScalarField u = u0;
    std::vector<double> r(u.size());
    const auto backend = kernels::active_backend();

    const double v0 = mode == Mode::Obstacle ? scan(u.values(), plo, phi).violation : 0.0;
    traj.max_violation_all_steps = v0;
    auto record = [&](std::size_t step, double violation) {
        const double t = double(step) * dt;
        traj.times.push_back(t);
        traj.steps.push_back(step);
        traj.snapshots.push_back(u);
        traj.diagnostics.push_back(diagnose(u, cfg.signed_field, t, step, violation));
    };
    record(0, v0);
    if (observer) observer(0, 0.0, u);

    for (std::size_t step = 1; step <= nsteps; ++step) {
        curvature_rhs_into(u, params, r);
        if (frozen)
            for (std::size_t i : *frozen) r[i] = 0.0;
        kernels::euler_clamp(backend, u.data(), r.data(), dt, plo, phi, u.size());
        const StepScan s = scan(u.values(), mode == Mode::Obstacle ? plo : nullptr,
                                mode == Mode::Obstacle ? phi : nullptr);
        if (!s.finite) throw Error("non-finite value detected at step " + std::to_string(step));
        traj.max_violation_all_steps = std::max(traj.max_violation_all_steps, s.violation);
        const bool snap = step == nsteps || (cfg.snapshot_every > 0 && step % std::size_t(cfg.snapshot_every) == 0);
        if (snap) record(step, s.violation);
        if (observer) observer(step, double(step) * dt, u);
    }
    return traj;
}

}  // namespace

Trajectory evolve_free(const ScalarField& u0, const OperatorParams& params, const SolverConfig& cfg,
                       const StepObserver& observer) {
    return run(u0, Mode::Free, nullptr, nullptr, nullptr, params, cfg, observer);
}

Trajectory evolve_obstacle(const ScalarField& u0, const ObstacleSpec& obs, const OperatorParams& params,
                           const SolverConfig& cfg, const StepObserver& observer) {
    const Grid& grid = u0.grid();
    obs.validate(grid);
    const std::size_t n = grid.node_count();

    std::optional<std::vector<double>> lo, hi;
    if (obs.psi_plus) hi = obs.psi_plus->values();
    if (obs.psi_minus || cfg.enforce_nonneg) {
        lo = std::vector<double>(n, cfg.enforce_nonneg ? 0.0 : -std::numeric_limits<double>::infinity());
        if (obs.psi_minus)
            for (std::size_t i = 0; i < n; ++i) (*lo)[i] = std::max((*lo)[i], (*obs.psi_minus)[i]);
    }
    if (lo && hi)
        for (std::size_t i = 0; i < n; ++i)
            if ((*lo)[i] > (*hi)[i])
                throw Error("lower bound exceeds psi_plus at node " + std::to_string(i) +
                            " (psi_plus < 0 with enforce_nonneg?)");
    // Compatibility psi_minus <= u0 <= psi_plus, reported at the worst node.
    double worst = 0;
    std::size_t worst_node = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0;
        if (hi) v = std::max(v, u0[i] - (*hi)[i]);
        if (lo) v = std::max(v, (*lo)[i] - u0[i]);
        if (v > worst) {
            worst = v;
            worst_node = i;
        }
    }
    if (worst > 0)
        throw Error("initial data violates the obstacle constraint at node " + std::to_string(worst_node) +
                    " by " + format_double(worst));
    return run(u0, Mode::Obstacle, lo ? &*lo : nullptr, hi ? &*hi : nullptr, nullptr, params, cfg, observer);
}

std::vector<std::uint8_t> DirichletSpec::boundary_layer() const {
    const Grid& grid = g.grid();
    std::vector<std::uint8_t> layer(grid.node_count(), 0);
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        if (!interior[i]) continue;
        const auto ijk = grid.unflatten(i);
        const int dk = grid.dim() == 3 ? 1 : 0;
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b)
                for (int c = -dk; c <= dk; ++c) {
                    std::array<int, 3> q{ijk[0] + a, ijk[1] + b, ijk[2] + c};
                    bool inside = true;
                    for (int k = 0; k < grid.dim(); ++k) inside = inside && q[k] >= 0 && q[k] < grid.size(k);
                    if (!inside) continue;
                    const std::size_t f = grid.flatten(q);
                    if (!interior[f]) layer[f] = 1;
                }
    }
    return layer;
}

void DirichletSpec::validate() const {
    const Grid& grid = g.grid();
    if (interior.size() != grid.node_count()) throw Error("Dirichlet mask size does not match the grid");
    bool any = false;
    for (std::size_t i = 0; i < interior.size(); ++i) {
        if (!interior[i]) continue;
        any = true;
        // Every stencil neighbour must exist inside the box so that no
        // constant-extension copy leaks into the interior update.
        const auto ijk = grid.unflatten(i);
        for (int k = 0; k < grid.dim(); ++k)
            if (ijk[k] == 0 || ijk[k] == grid.size(k) - 1)
                throw Error("Dirichlet interior node " + std::to_string(i) + " touches the box boundary");
    }
    if (!any) throw Error("Dirichlet mask has an empty interior");
}

DirichletSpec DirichletSpec::ball(const Grid& grid, const Vec3& center, double radius, const ScalarField& g) {
    DirichletSpec s;
    s.g = g;
    s.interior.assign(grid.node_count(), 0);
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const Vec3 p = grid.point(i);
        double r2 = 0;
        for (int k = 0; k < grid.dim(); ++k) r2 += (p[k] - center[k]) * (p[k] - center[k]);
        s.interior[i] = r2 < radius * radius ? 1 : 0;
    }
    return s;
}

Trajectory evolve_dirichlet(const ScalarField& v0, const DirichletSpec& spec, const OperatorParams& params,
                            const SolverConfig& cfg, const StepObserver& observer) {
    if (spec.g.grid() != v0.grid()) throw Error("Dirichlet data lives on a different grid");
    spec.validate();
    const auto layer = spec.boundary_layer();
    std::vector<std::size_t> frozen;
    for (std::size_t i = 0; i < v0.size(); ++i) {
        if (layer[i] && v0[i] != spec.g[i])
            throw Error("v0 differs from g on boundary-layer node " + std::to_string(i));
        if (!spec.interior[i]) frozen.push_back(i);
    }
    return run(v0, Mode::Dirichlet, nullptr, nullptr, &frozen, params, cfg, observer);
}

ComparisonReport comparison_check(const Trajectory& u, const Trajectory& v) {
    if (u.grid != v.grid) throw Error("comparison_check: trajectories live on different grids");
    if (u.snapshots.size() != v.snapshots.size()) throw Error("comparison_check: snapshot counts differ");
    ComparisonReport rep;
    for (std::size_t k = 0; k < u.snapshots.size(); ++k) {
        const ScalarField a = u.reported(k), b = v.reported(k);
        double m = 0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] - b[i]);
        if (m > rep.max_violation) {
            rep.max_violation = m;
            rep.worst_snapshot = k;
        }
    }
    return rep;
}

namespace {
std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }
}  // namespace

void write_diagnostics_csv(const std::string& path, const std::vector<Diagnostics>& diags) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << "t,min_u,max_u,obstacle_violation,lipschitz,front_radius_min,front_radius_max,fattening_ratio\n";
    for (const auto& d : diags)
        os << format_double(d.t) << ',' << format_double(d.min_u) << ',' << format_double(d.max_u) << ','
           << format_double(d.obstacle_violation) << ',' << format_double(d.lipschitz) << ','
           << opt(d.front_radius_min) << ',' << opt(d.front_radius_max) << ',' << opt(d.fattening_ratio) << '\n';
}

std::vector<std::string> export_trajectory(const Trajectory& traj, const std::string& dir, bool vtk) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> files;
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const ScalarField u = traj.reported(k);
        const std::string base = dir + "/u_" + std::to_string(traj.steps[k]);
        write_field_csv(base + ".csv", u);
        files.push_back(base + ".csv");
        if (vtk) {
            write_field_vtk(base + ".vtk", u);
            files.push_back(base + ".vtk");
        }
    }
    write_diagnostics_csv(dir + "/diagnostics.csv", traj.diagnostics);
    files.push_back(dir + "/diagnostics.csv");
    return files;
}

}  // namespace lsmcf
