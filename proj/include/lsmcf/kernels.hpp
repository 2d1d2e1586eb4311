#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// where the CPU supports it, an AVX2 version that performs the same IEEE
// operations in the same order, so both produce bit-identical output.
namespace lsmcf::kernels {

enum class Backend { Scalar, Avx2 };

const char* backend_name(Backend b);
bool backend_available(Backend b);

// Selected once from CPUID; LSMCF_SIMD=scalar in the environment forces the
// reference path.
Backend active_backend();
void set_active_backend(Backend b);

// Stencil-offset bit for neighbour (di, dj[, dk]), each in {-1, 0, 1}.
constexpr int offset_bit_2d(int di, int dj) { return (di + 1) * 3 + (dj + 1); }
constexpr int offset_bit_3d(int di, int dj, int dk) { return (di + 1) * 9 + (dj + 1) * 3 + (dk + 1); }

struct CurvatureArgs {
    const double* u = nullptr;
    double* out = nullptr;
    int n[3] = {1, 1, 1};
    double h[3] = {1, 1, 1};
    double eps = 1;
    // Optional per-node bit set: bit offset_bit(...) set means the neighbour in
    // that direction lies across a branch cut and enters with flipped sign.
    const std::uint32_t* cuts = nullptr;
};

void curvature_2d(Backend b, const CurvatureArgs& a);
void curvature_3d(Backend b, const CurvatureArgs& a);

// u[i] = min(max(u[i] + dt * r[i], lo[i]), hi[i]); lo/hi may be null (no bound).
void euler_clamp(Backend b, double* u, const double* r, double dt, const double* lo,
                 const double* hi, std::size_t n);

struct SegmentBatch {
    const double* ax = nullptr;
    const double* ay = nullptr;
    const double* az = nullptr;
    const double* dx = nullptr;
    const double* dy = nullptr;
    const double* dz = nullptr;
    const double* inv_len2 = nullptr;  // 0 for degenerate (point) segments
    std::size_t count = 0;
};

// out[i] = min(out[i], squared distance from (x[i], y, z) to every segment).
// Queries share y and z; x varies along the row.
void min_dist2_row(Backend b, const double* x, double y, double z, std::size_t nq,
                   const SegmentBatch& segs, double* out);

}  // namespace lsmcf::kernels
