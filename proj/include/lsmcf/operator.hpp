#pragma once

#include <memory>
#include <vector>

#include "lsmcf/core_grid.hpp"
#include "lsmcf/orientation.hpp"

namespace lsmcf {

// Central second-order discretisation of |grad u| div(grad u / |grad u|),
// regularised as trace((I - p p^T / (|p|^2 + eps^2)) D^2 u).
struct OperatorParams {
    double eps = 0;
    std::shared_ptr<const CutMask> cuts;  // optional branch cuts of a signed field
};

// eps = smallest grid spacing.
OperatorParams default_params(const Grid& grid);
void validate(const OperatorParams& p, const Grid& grid);

ScalarField curvature_rhs(const ScalarField& u, const OperatorParams& params);

// Hot-path form: writes R(u) into out (resized as needed), no finiteness check.
void curvature_rhs_into(const ScalarField& u, const OperatorParams& params, std::vector<double>& out);

// safety / (2 * sum_k spacing_k^-2)
double cfl_dt(const Grid& grid, double safety);

// R at a single 2D node from its nine stencil values laid out as v[di + 1][dj + 1].
double curvature_stencil_2d(const double (&v)[3][3], double hx, double hy, double eps);

}  // namespace lsmcf
