#include "kernels_common.hpp"

namespace lsmcf::kernels::scalar {

void curvature_2d(const CurvatureArgs& a) {
    const Coeffs2 q = coeffs_2d(a);
    for (int i = 0; i < a.n[0]; ++i)
        for (int j = 0; j < a.n[1]; ++j) a.out[std::size_t(i) * a.n[1] + j] = node_2d(a, q, i, j);
}

void curvature_3d(const CurvatureArgs& a) {
    const Coeffs3 q = coeffs_3d(a);
    std::size_t p = 0;
    for (int i = 0; i < a.n[0]; ++i)
        for (int j = 0; j < a.n[1]; ++j)
            for (int k = 0; k < a.n[2]; ++k) a.out[p++] = node_3d(a, q, i, j, k);
}

void euler_clamp(double* u, const double* r, double dt, const double* lo, const double* hi,
                 std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = u[i] + dt * r[i];
        if (lo) v = std::max(v, lo[i]);
        if (hi) v = std::min(v, hi[i]);
        u[i] = v;
    }
}

void min_dist2_row(const double* x, double y, double z, std::size_t nq, const SegmentBatch& segs,
                   double* out) {
    for (std::size_t i = 0; i < nq; ++i) {
        double best = out[i];
        for (std::size_t m = 0; m < segs.count; ++m) best = std::min(best, seg_dist2(x[i], y, z, segs, m));
        out[i] = best;
    }
}

}  // namespace lsmcf::kernels::scalar
