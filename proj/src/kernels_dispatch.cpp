#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "lsmcf/kernels.hpp"

namespace lsmcf::kernels {

namespace scalar {
void curvature_2d(const CurvatureArgs& a);
void curvature_3d(const CurvatureArgs& a);
void euler_clamp(double* u, const double* r, double dt, const double* lo, const double* hi, std::size_t n);
void min_dist2_row(const double* x, double y, double z, std::size_t nq, const SegmentBatch& segs, double* out);
}  // namespace scalar

#if defined(LSMCF_HAVE_AVX2)
namespace avx2 {
void curvature_2d(const CurvatureArgs& a);
void curvature_3d(const CurvatureArgs& a);
void euler_clamp(double* u, const double* r, double dt, const double* lo, const double* hi, std::size_t n);
void min_dist2_row(const double* x, double y, double z, std::size_t nq, const SegmentBatch& segs, double* out);
}  // namespace avx2
#endif

namespace {

Backend detect() {
    const char* env = std::getenv("LSMCF_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return Backend::Scalar;
    return backend_available(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

Backend& active() {
    static Backend b = detect();
    return b;
}

}  // namespace

const char* backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

bool backend_available(Backend b) {
    if (b == Backend::Scalar) return true;
#if defined(LSMCF_HAVE_AVX2)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend active_backend() { return active(); }

void set_active_backend(Backend b) {
    if (!backend_available(b)) throw std::runtime_error(std::string("backend not available: ") + backend_name(b));
    active() = b;
}

#if defined(LSMCF_HAVE_AVX2)
#define LSMCF_DISPATCH(fn, ...)                                  \
    do {                                                         \
        if (b == Backend::Avx2) return avx2::fn(__VA_ARGS__);    \
        return scalar::fn(__VA_ARGS__);                          \
    } while (0)
#else
#define LSMCF_DISPATCH(fn, ...)                \
    do {                                       \
        (void)b;                               \
        return scalar::fn(__VA_ARGS__);        \
    } while (0)
#endif

void curvature_2d(Backend b, const CurvatureArgs& a) { LSMCF_DISPATCH(curvature_2d, a); }
void curvature_3d(Backend b, const CurvatureArgs& a) { LSMCF_DISPATCH(curvature_3d, a); }

void euler_clamp(Backend b, double* u, const double* r, double dt, const double* lo, const double* hi,
                 std::size_t n) {
    LSMCF_DISPATCH(euler_clamp, u, r, dt, lo, hi, n);
}

void min_dist2_row(Backend b, const double* x, double y, double z, std::size_t nq, const SegmentBatch& segs,
                   double* out) {
    LSMCF_DISPATCH(min_dist2_row, x, y, z, nq, segs, out);
}

}  // namespace lsmcf::kernels
