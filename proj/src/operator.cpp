#include "lsmcf/operator.hpp"

#include <cmath>

#include "kernels_common.hpp"
#include "lsmcf/kernels.hpp"

namespace lsmcf {

OperatorParams default_params(const Grid& grid) {
    OperatorParams p;
    p.eps = grid.h_min();
    return p;
}

void validate(const OperatorParams& p, const Grid& grid) {
    if (!(p.eps > 0) || !std::isfinite(p.eps)) throw Error("operator eps must be positive");
    if (p.cuts && p.cuts->grid != grid) throw Error("cut mask lives on a different grid");
}

void curvature_rhs_into(const ScalarField& u, const OperatorParams& params, std::vector<double>& out) {
    const Grid& g = u.grid();
    out.resize(u.size());
    kernels::CurvatureArgs a;
    a.u = u.data();
    a.out = out.data();
    for (int k = 0; k < g.dim(); ++k) {
        a.n[k] = g.size(k);
        a.h[k] = g.spacing(k);
    }
    a.eps = params.eps;
    a.cuts = params.cuts ? params.cuts->bits.data() : nullptr;
    if (g.dim() == 2)
        kernels::curvature_2d(kernels::active_backend(), a);
    else
        kernels::curvature_3d(kernels::active_backend(), a);
}

ScalarField curvature_rhs(const ScalarField& u, const OperatorParams& params) {
    validate(params, u.grid());
    u.check_finite("curvature_rhs input");
    std::vector<double> out;
    curvature_rhs_into(u, params, out);
    return ScalarField(u.grid(), std::move(out));
}

double cfl_dt(const Grid& grid, double safety) {
    if (!(safety > 0) || safety > 1) throw Error("CFL safety must lie in (0, 1]");
    double s = 0;
    for (int k = 0; k < grid.dim(); ++k) s += 1.0 / (grid.spacing(k) * grid.spacing(k));
    return safety / (2 * s);
}

double curvature_stencil_2d(const double (&v)[3][3], double hx, double hy, double eps) {
    kernels::CurvatureArgs a;
    a.h[0] = hx;
    a.h[1] = hy;
    a.eps = eps;
    const auto q = kernels::coeffs_2d(a);
    return kernels::node_rhs_2d(q, v[1][1], v[2][1], v[0][1], v[1][2], v[1][0], v[2][2], v[2][0], v[0][2],
                                v[0][0]);
}

}  // namespace lsmcf
