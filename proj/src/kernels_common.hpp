#pragma once

// Shared per-node formulas. Everything here has internal linkage because the
// AVX2 translation unit is compiled with different target flags.

#include <algorithm>
#include <cstddef>
#include <cstdint>

#include "lsmcf/kernels.hpp"

namespace lsmcf::kernels {
namespace {

struct Coeffs2 {
    double cx, cy, kx, ky, kxy, eps2;
};

struct Coeffs3 {
    double c[3], k[3], kxy, kxz, kyz, eps2;
};

inline Coeffs2 coeffs_2d(const CurvatureArgs& a) {
    return {0.5 / a.h[0], 0.5 / a.h[1], 1.0 / (a.h[0] * a.h[0]), 1.0 / (a.h[1] * a.h[1]),
            0.25 / (a.h[0] * a.h[1]), a.eps * a.eps};
}

inline Coeffs3 coeffs_3d(const CurvatureArgs& a) {
    Coeffs3 q{};
    for (int k = 0; k < 3; ++k) {
        q.c[k] = 0.5 / a.h[k];
        q.k[k] = 1.0 / (a.h[k] * a.h[k]);
    }
    q.kxy = 0.25 / (a.h[0] * a.h[1]);
    q.kxz = 0.25 / (a.h[0] * a.h[2]);
    q.kyz = 0.25 / (a.h[1] * a.h[2]);
    q.eps2 = a.eps * a.eps;
    return q;
}

// Neighbour naming: first letter along axis 0 (e = +1, w = -1), second along axis 1.
inline double node_rhs_2d(const Coeffs2& q, double c, double e, double w, double n, double s,
                          double ne, double se, double nw, double sw) {
    const double ux = (e - w) * q.cx;
    const double uy = (n - s) * q.cy;
    const double uxx = ((e - c) + (w - c)) * q.kx;
    const double uyy = ((n - c) + (s - c)) * q.ky;
    const double uxy = ((ne - se) - (nw - sw)) * q.kxy;
    const double px = ux * ux;
    const double py = uy * uy;
    const double pxy = ux * uy;
    const double num = (px * uxx + py * uyy) + (pxy + pxy) * uxy;
    const double den = (px + py) + q.eps2;
    return (uxx + uyy) - num / den;
}

struct Stencil3 {
    double c;
    double xp, xm, yp, ym, zp, zm;
    double xpyp, xpym, xmyp, xmym;
    double xpzp, xpzm, xmzp, xmzm;
    double ypzp, ypzm, ymzp, ymzm;
};

inline double node_rhs_3d(const Coeffs3& q, const Stencil3& v) {
    const double ux = (v.xp - v.xm) * q.c[0];
    const double uy = (v.yp - v.ym) * q.c[1];
    const double uz = (v.zp - v.zm) * q.c[2];
    const double uxx = ((v.xp - v.c) + (v.xm - v.c)) * q.k[0];
    const double uyy = ((v.yp - v.c) + (v.ym - v.c)) * q.k[1];
    const double uzz = ((v.zp - v.c) + (v.zm - v.c)) * q.k[2];
    const double uxy = ((v.xpyp - v.xpym) - (v.xmyp - v.xmym)) * q.kxy;
    const double uxz = ((v.xpzp - v.xpzm) - (v.xmzp - v.xmzm)) * q.kxz;
    const double uyz = ((v.ypzp - v.ypzm) - (v.ymzp - v.ymzm)) * q.kyz;
    const double px = ux * ux;
    const double py = uy * uy;
    const double pz = uz * uz;
    const double pxy = ux * uy;
    const double pxz = ux * uz;
    const double pyz = uy * uz;
    const double num = ((px * uxx + py * uyy) + pz * uzz) +
                       (((pxy + pxy) * uxy + (pxz + pxz) * uxz) + (pyz + pyz) * uyz);
    const double den = ((px + py) + pz) + q.eps2;
    return ((uxx + uyy) + uzz) - num / den;
}

inline int clampi(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

inline double pick(double v, std::uint32_t bits, int bit) { return ((bits >> bit) & 1u) ? -v : v; }

// Reference evaluation at one node with constant extension at the box faces.
inline double node_2d(const CurvatureArgs& a, const Coeffs2& q, int i, int j) {
    const int n0 = a.n[0], n1 = a.n[1];
    const std::uint32_t bits = a.cuts ? a.cuts[std::size_t(i) * n1 + j] : 0u;
    auto at = [&](int di, int dj) {
        const double v = a.u[std::size_t(clampi(i + di, n0)) * n1 + clampi(j + dj, n1)];
        return pick(v, bits, offset_bit_2d(di, dj));
    };
    return node_rhs_2d(q, a.u[std::size_t(i) * n1 + j], at(1, 0), at(-1, 0), at(0, 1), at(0, -1),
                       at(1, 1), at(1, -1), at(-1, 1), at(-1, -1));
}

inline double node_3d(const CurvatureArgs& a, const Coeffs3& q, int i, int j, int k) {
    const int n0 = a.n[0], n1 = a.n[1], n2 = a.n[2];
    const std::size_t idx = (std::size_t(i) * n1 + j) * n2 + k;
    const std::uint32_t bits = a.cuts ? a.cuts[idx] : 0u;
    auto at = [&](int di, int dj, int dk) {
        const std::size_t p =
            (std::size_t(clampi(i + di, n0)) * n1 + clampi(j + dj, n1)) * n2 + clampi(k + dk, n2);
        return pick(a.u[p], bits, offset_bit_3d(di, dj, dk));
    };
    Stencil3 s{a.u[idx],
               at(1, 0, 0),   at(-1, 0, 0),  at(0, 1, 0),   at(0, -1, 0),  at(0, 0, 1),
               at(0, 0, -1),  at(1, 1, 0),   at(1, -1, 0),  at(-1, 1, 0),  at(-1, -1, 0),
               at(1, 0, 1),   at(1, 0, -1),  at(-1, 0, 1),  at(-1, 0, -1), at(0, 1, 1),
               at(0, 1, -1),  at(0, -1, 1),  at(0, -1, -1)};
    return node_rhs_3d(q, s);
}

inline double seg_dist2(double qx, double qy, double qz, const SegmentBatch& s, std::size_t m) {
    const double rx = qx - s.ax[m];
    const double ry = qy - s.ay[m];
    const double rz = qz - s.az[m];
    double t = ((rx * s.dx[m] + ry * s.dy[m]) + rz * s.dz[m]) * s.inv_len2[m];
    t = std::min(std::max(t, 0.0), 1.0);
    const double ex = rx - t * s.dx[m];
    const double ey = ry - t * s.dy[m];
    const double ez = rz - t * s.dz[m];
    return (ex * ex + ey * ey) + ez * ez;
}

}  // namespace
}  // namespace lsmcf::kernels
