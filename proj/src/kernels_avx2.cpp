#include "kernels_common.hpp"

#if defined(LSMCF_HAVE_AVX2)

#include <immintrin.h>

namespace lsmcf::kernels::avx2 {
namespace {

// Operand order in max/min mirrors std::max(v, lo) / std::min(v, hi) so that
// ties between signed zeros resolve identically to the scalar path.
inline __m256d vmax_like_std(__m256d v, __m256d lo) { return _mm256_max_pd(lo, v); }
inline __m256d vmin_like_std(__m256d v, __m256d hi) { return _mm256_min_pd(hi, v); }

inline __m256d flip(__m256d v, __m256i bits, int bit) {
    const __m256i b = _mm256_set1_epi64x(std::int64_t(1) << bit);
    const __m256i hit = _mm256_cmpeq_epi64(_mm256_and_si256(bits, b), b);
    const __m256d sign = _mm256_castsi256_pd(_mm256_and_si256(hit, _mm256_set1_epi64x(INT64_MIN)));
    return _mm256_xor_pd(v, sign);
}

inline __m256i load_bits(const std::uint32_t* p) {
    return _mm256_cvtepu32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(p)));
}

}  // namespace

void curvature_2d(const CurvatureArgs& a) {
    const Coeffs2 q = coeffs_2d(a);
    const int n0 = a.n[0], n1 = a.n[1];
    const __m256d cx = _mm256_set1_pd(q.cx), cy = _mm256_set1_pd(q.cy);
    const __m256d kx = _mm256_set1_pd(q.kx), ky = _mm256_set1_pd(q.ky);
    const __m256d kxy = _mm256_set1_pd(q.kxy), eps2 = _mm256_set1_pd(q.eps2);

    for (int i = 0; i < n0; ++i) {
        double* out = a.out + std::size_t(i) * n1;
        if (i == 0 || i == n0 - 1 || n1 < 6) {
            for (int j = 0; j < n1; ++j) out[j] = node_2d(a, q, i, j);
            continue;
        }
        const double* rm = a.u + std::size_t(i - 1) * n1;
        const double* r0 = a.u + std::size_t(i) * n1;
        const double* rp = a.u + std::size_t(i + 1) * n1;
        const std::uint32_t* cb = a.cuts ? a.cuts + std::size_t(i) * n1 : nullptr;
        out[0] = node_2d(a, q, i, 0);
        int j = 1;
        for (; j + 4 <= n1 - 1; j += 4) {
            const __m256d c = _mm256_loadu_pd(r0 + j);
            __m256d e = _mm256_loadu_pd(rp + j), w = _mm256_loadu_pd(rm + j);
            __m256d n = _mm256_loadu_pd(r0 + j + 1), s = _mm256_loadu_pd(r0 + j - 1);
            __m256d ne = _mm256_loadu_pd(rp + j + 1), se = _mm256_loadu_pd(rp + j - 1);
            __m256d nw = _mm256_loadu_pd(rm + j + 1), sw = _mm256_loadu_pd(rm + j - 1);
            if (cb) {
                const __m256i bits = load_bits(cb + j);
                e = flip(e, bits, offset_bit_2d(1, 0));
                w = flip(w, bits, offset_bit_2d(-1, 0));
                n = flip(n, bits, offset_bit_2d(0, 1));
                s = flip(s, bits, offset_bit_2d(0, -1));
                ne = flip(ne, bits, offset_bit_2d(1, 1));
                se = flip(se, bits, offset_bit_2d(1, -1));
                nw = flip(nw, bits, offset_bit_2d(-1, 1));
                sw = flip(sw, bits, offset_bit_2d(-1, -1));
            }
            const __m256d ux = _mm256_mul_pd(_mm256_sub_pd(e, w), cx);
            const __m256d uy = _mm256_mul_pd(_mm256_sub_pd(n, s), cy);
            const __m256d uxx = _mm256_mul_pd(_mm256_add_pd(_mm256_sub_pd(e, c), _mm256_sub_pd(w, c)), kx);
            const __m256d uyy = _mm256_mul_pd(_mm256_add_pd(_mm256_sub_pd(n, c), _mm256_sub_pd(s, c)), ky);
            const __m256d uxy =
                _mm256_mul_pd(_mm256_sub_pd(_mm256_sub_pd(ne, se), _mm256_sub_pd(nw, sw)), kxy);
            const __m256d px = _mm256_mul_pd(ux, ux);
            const __m256d py = _mm256_mul_pd(uy, uy);
            const __m256d pxy = _mm256_mul_pd(ux, uy);
            const __m256d num =
                _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(px, uxx), _mm256_mul_pd(py, uyy)),
                              _mm256_mul_pd(_mm256_add_pd(pxy, pxy), uxy));
            const __m256d den = _mm256_add_pd(_mm256_add_pd(px, py), eps2);
            _mm256_storeu_pd(out + j, _mm256_sub_pd(_mm256_add_pd(uxx, uyy), _mm256_div_pd(num, den)));
        }
        for (; j < n1; ++j) out[j] = node_2d(a, q, i, j);
    }
}

void curvature_3d(const CurvatureArgs& a) {
    const Coeffs3 q = coeffs_3d(a);
    const int n0 = a.n[0], n1 = a.n[1], n2 = a.n[2];
    const std::size_t sx = std::size_t(n1) * n2, sy = std::size_t(n2);
    const __m256d c0 = _mm256_set1_pd(q.c[0]), c1 = _mm256_set1_pd(q.c[1]), c2 = _mm256_set1_pd(q.c[2]);
    const __m256d k0 = _mm256_set1_pd(q.k[0]), k1 = _mm256_set1_pd(q.k[1]), k2 = _mm256_set1_pd(q.k[2]);
    const __m256d kxy = _mm256_set1_pd(q.kxy), kxz = _mm256_set1_pd(q.kxz), kyz = _mm256_set1_pd(q.kyz);
    const __m256d eps2 = _mm256_set1_pd(q.eps2);

    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            const std::size_t row = std::size_t(i) * sx + std::size_t(j) * sy;
            double* out = a.out + row;
            if (i == 0 || i == n0 - 1 || j == 0 || j == n1 - 1 || n2 < 6) {
                for (int k = 0; k < n2; ++k) out[k] = node_3d(a, q, i, j, k);
                continue;
            }
            const double* p = a.u + row;
            const std::uint32_t* cb = a.cuts ? a.cuts + row : nullptr;
            out[0] = node_3d(a, q, i, j, 0);
            int k = 1;
            for (; k + 4 <= n2 - 1; k += 4) {
                const double* b = p + k;
                auto ld = [&](std::ptrdiff_t off) { return _mm256_loadu_pd(b + off); };
                const std::ptrdiff_t X = std::ptrdiff_t(sx), Y = std::ptrdiff_t(sy);
                __m256d v[19] = {ld(0),          ld(X),          ld(-X),         ld(Y),
                                 ld(-Y),         ld(1),          ld(-1),         ld(X + Y),
                                 ld(X - Y),      ld(-X + Y),     ld(-X - Y),     ld(X + 1),
                                 ld(X - 1),      ld(-X + 1),     ld(-X - 1),     ld(Y + 1),
                                 ld(Y - 1),      ld(-Y + 1),     ld(-Y - 1)};
                if (cb) {
                    static constexpr int bit[19] = {
                        -1,
                        offset_bit_3d(1, 0, 0),   offset_bit_3d(-1, 0, 0),  offset_bit_3d(0, 1, 0),
                        offset_bit_3d(0, -1, 0),  offset_bit_3d(0, 0, 1),   offset_bit_3d(0, 0, -1),
                        offset_bit_3d(1, 1, 0),   offset_bit_3d(1, -1, 0),  offset_bit_3d(-1, 1, 0),
                        offset_bit_3d(-1, -1, 0), offset_bit_3d(1, 0, 1),   offset_bit_3d(1, 0, -1),
                        offset_bit_3d(-1, 0, 1),  offset_bit_3d(-1, 0, -1), offset_bit_3d(0, 1, 1),
                        offset_bit_3d(0, 1, -1),  offset_bit_3d(0, -1, 1),  offset_bit_3d(0, -1, -1)};
                    const __m256i bits = load_bits(cb + k);
                    for (int m = 1; m < 19; ++m) v[m] = flip(v[m], bits, bit[m]);
                }
                const __m256d c = v[0];
                const __m256d ux = _mm256_mul_pd(_mm256_sub_pd(v[1], v[2]), c0);
                const __m256d uy = _mm256_mul_pd(_mm256_sub_pd(v[3], v[4]), c1);
                const __m256d uz = _mm256_mul_pd(_mm256_sub_pd(v[5], v[6]), c2);
                auto second = [&](__m256d pl, __m256d mi, __m256d kk) {
                    return _mm256_mul_pd(_mm256_add_pd(_mm256_sub_pd(pl, c), _mm256_sub_pd(mi, c)), kk);
                };
                auto mixed = [&](__m256d pp, __m256d pm, __m256d mp, __m256d mm, __m256d kk) {
                    return _mm256_mul_pd(_mm256_sub_pd(_mm256_sub_pd(pp, pm), _mm256_sub_pd(mp, mm)), kk);
                };
                const __m256d uxx = second(v[1], v[2], k0);
                const __m256d uyy = second(v[3], v[4], k1);
                const __m256d uzz = second(v[5], v[6], k2);
                const __m256d uxy = mixed(v[7], v[8], v[9], v[10], kxy);
                const __m256d uxz = mixed(v[11], v[12], v[13], v[14], kxz);
                const __m256d uyz = mixed(v[15], v[16], v[17], v[18], kyz);
                const __m256d px = _mm256_mul_pd(ux, ux), py = _mm256_mul_pd(uy, uy),
                              pz = _mm256_mul_pd(uz, uz);
                const __m256d pxy = _mm256_mul_pd(ux, uy), pxz = _mm256_mul_pd(ux, uz),
                              pyz = _mm256_mul_pd(uy, uz);
                const __m256d diag = _mm256_add_pd(
                    _mm256_add_pd(_mm256_mul_pd(px, uxx), _mm256_mul_pd(py, uyy)), _mm256_mul_pd(pz, uzz));
                const __m256d off = _mm256_add_pd(
                    _mm256_add_pd(_mm256_mul_pd(_mm256_add_pd(pxy, pxy), uxy),
                                  _mm256_mul_pd(_mm256_add_pd(pxz, pxz), uxz)),
                    _mm256_mul_pd(_mm256_add_pd(pyz, pyz), uyz));
                const __m256d num = _mm256_add_pd(diag, off);
                const __m256d den = _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(px, py), pz), eps2);
                const __m256d lap = _mm256_add_pd(_mm256_add_pd(uxx, uyy), uzz);
                _mm256_storeu_pd(out + k, _mm256_sub_pd(lap, _mm256_div_pd(num, den)));
            }
            for (; k < n2; ++k) out[k] = node_3d(a, q, i, j, k);
        }
    }
}

void euler_clamp(double* u, const double* r, double dt, const double* lo, const double* hi,
                 std::size_t n) {
    const __m256d vdt = _mm256_set1_pd(dt);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_add_pd(_mm256_loadu_pd(u + i), _mm256_mul_pd(vdt, _mm256_loadu_pd(r + i)));
        if (lo) v = vmax_like_std(v, _mm256_loadu_pd(lo + i));
        if (hi) v = vmin_like_std(v, _mm256_loadu_pd(hi + i));
        _mm256_storeu_pd(u + i, v);
    }
    for (; i < n; ++i) {
        double v = u[i] + dt * r[i];
        if (lo) v = std::max(v, lo[i]);
        if (hi) v = std::min(v, hi[i]);
        u[i] = v;
    }
}

void min_dist2_row(const double* x, double y, double z, std::size_t nq, const SegmentBatch& s,
                   double* out) {
    const __m256d zero = _mm256_setzero_pd(), one = _mm256_set1_pd(1.0);
    const __m256d vy = _mm256_set1_pd(y), vz = _mm256_set1_pd(z);
    std::size_t i = 0;
    for (; i + 4 <= nq; i += 4) {
        const __m256d qx = _mm256_loadu_pd(x + i);
        __m256d best = _mm256_loadu_pd(out + i);
        for (std::size_t m = 0; m < s.count; ++m) {
            const __m256d dx = _mm256_set1_pd(s.dx[m]), dy = _mm256_set1_pd(s.dy[m]),
                          dz = _mm256_set1_pd(s.dz[m]);
            const __m256d rx = _mm256_sub_pd(qx, _mm256_set1_pd(s.ax[m]));
            const __m256d ry = _mm256_sub_pd(vy, _mm256_set1_pd(s.ay[m]));
            const __m256d rz = _mm256_sub_pd(vz, _mm256_set1_pd(s.az[m]));
            __m256d t = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(rx, dx), _mm256_mul_pd(ry, dy)),
                                      _mm256_mul_pd(rz, dz));
            t = _mm256_mul_pd(t, _mm256_set1_pd(s.inv_len2[m]));
            t = _mm256_min_pd(one, _mm256_max_pd(zero, t));
            const __m256d ex = _mm256_sub_pd(rx, _mm256_mul_pd(t, dx));
            const __m256d ey = _mm256_sub_pd(ry, _mm256_mul_pd(t, dy));
            const __m256d ez = _mm256_sub_pd(rz, _mm256_mul_pd(t, dz));
            const __m256d d2 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey)),
                                             _mm256_mul_pd(ez, ez));
            best = _mm256_min_pd(d2, best);
        }
        _mm256_storeu_pd(out + i, best);
    }
    for (; i < nq; ++i) {
        double best = out[i];
        for (std::size_t m = 0; m < s.count; ++m) best = std::min(best, seg_dist2(x[i], y, z, s, m));
        out[i] = best;
    }
}

}  // namespace lsmcf::kernels::avx2

#endif
