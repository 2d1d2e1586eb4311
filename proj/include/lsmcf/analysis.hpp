#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lsmcf/core_grid.hpp"
#include "lsmcf/operator.hpp"
#include "lsmcf/orientation.hpp"

namespace lsmcf {

struct Trajectory;

// A discrete front: nodes with u <= level plus a subcell contour. In 2D each
// piece is a polyline (closed[k] marks loops); in 3D each piece is a triangle.
struct FrontSet {
    Grid grid;
    double level = 0;
    std::vector<std::size_t> marked_nodes;
    std::vector<std::vector<Vec3>> pieces;
    std::vector<bool> closed;

    bool empty() const { return pieces.empty() && marked_nodes.empty(); }
    std::size_t vertex_count() const;
};

// Level-eta contour of a nonnegative field u; marks nodes with u <= eta.
FrontSet extract_front(const ScalarField& u, double eta);

// Zero contour of a signed field s (edges across branch cuts are skipped);
// marks nodes with |s| <= eta.
FrontSet extract_zero_front(const ScalarField& s, double eta, const CutMask* cuts = nullptr);

// Polyline sampling of a 2D geometry set, for comparisons against analytic fronts.
FrontSet sample_front(const GeometrySet& set, const Grid& grid, int samples_per_unit_length = 2000);

double hausdorff(const FrontSet& a, const FrontSet& b);
double set_distance(const FrontSet& a, const FrontSet& b);

struct RadiusStats {
    double mean = 0;  // length (2D) or area (3D) weighted
    double min = 0;
    double max = 0;
    std::size_t vertices = 0;
};

RadiusStats radius_stats(const FrontSet& f, const Vec3& center);
// Closed loop with the smallest mean radius among loops that wind around center.
RadiusStats innermost_loop_radius(const FrontSet& f, const Vec3& center);
// Largest distance of a contour vertex outside the ball B(center, radius).
double max_outside_distance(const FrontSet& f, const Vec3& center, double radius);

void write_contours_csv(const std::string& path, const FrontSet& f);

// Max over axes and nodes of |forward difference| / spacing; of_modulus
// measures |u| instead of u.
double lipschitz_estimate(const ScalarField& u, bool of_modulus = false);

struct HolderFit {
    double exponent = 0;
    bool degenerate = false;  // all increments zero: exponent reported as +inf
    double t_lo = 0;
    double t_hi = 0;
    std::size_t samples = 0;
};

// series holds (t, u(x0, t)); the t = 0 entry is the reference value.
HolderFit holder_exponent(const std::vector<std::pair<double, double>>& series);

struct HolderBound {
    double c = 0;          // |u(t_fit) - u(0)| / t_fit^exponent
    double max_ratio = 0;  // max over t in [t_min, t_fit] of |u(t) - u(0)| / (c t^exponent)
    bool holds = false;
};

HolderBound holder_bound_check(const std::vector<std::pair<double, double>>& series, double exponent,
                               double t_fit);

// (count of nodes with u <= eta) * cell volume / (2 eta ell)
double fattening_ratio(const ScalarField& u, double eta, double ell);

struct ResidualStep {
    std::size_t index = 0;
    double min = 0;
    double max = 0;
    std::size_t evaluated = 0;
    std::size_t excluded = 0;
};

struct ResidualReport {
    std::vector<ResidualStep> steps;
    std::vector<ScalarField> fields;  // only when requested
    double min = 0;
    double max = 0;
    double max_abs = 0;
    std::size_t excluded = 0;
};

// r = (u^{k+1} - u^k) / dt - R(u^k). Nodes where the central gradient is below
// params.eps are excluded, as are nodes flagged in `exclude[k]` when given.
ResidualReport pde_residual(const std::vector<ScalarField>& seq, double dt, const OperatorParams& params,
                            const std::vector<std::vector<std::uint8_t>>* exclude = nullptr,
                            bool keep_fields = false);
// Consecutive snapshots of a trajectory (needs snapshot_every = 1 for a
// single-step residual).
ResidualReport pde_residual(const Trajectory& traj, const OperatorParams& params, bool keep_fields = false);

enum class TubeConvention {
    OffsetFromSurface,  // kappa / (1 + d kappa)
    SigmaTube,          // kappa / (1 - delta kappa)
};

double tubular_curvature(double kappa, double d, TubeConvention convention);

struct TubeReport {
    double min_h = 0;
    std::size_t argmin = 0;
};

// Each sample lists the principal curvatures kappa_i(y, p) of the set at a
// base point y in normal direction p. H = (k - 1)/delta - sum_i kappa_i/(1 - delta kappa_i).
TubeReport tube_mean_convexity_check(const std::vector<std::vector<double>>& samples, double delta, int k);

// Curvature samples of a circle of the given radius embedded in R^3, over n
// normal directions.
std::vector<std::vector<double>> circle_in_r3_samples(double radius, int n);

// h(x, t) = L (c t delta^{-1/2} + (delta + |x - x0|^2)^{1/2}) + u0_at_x0
ScalarField barrier_field(const Grid& grid, double lip, double c, double delta, const Vec3& x0, double u0_at_x0,
                          double t);

}  // namespace lsmcf
