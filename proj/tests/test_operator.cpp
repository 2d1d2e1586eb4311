#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <limits>
#include <random>

#include "lsmcf/kernels.hpp"
#include "lsmcf/operator.hpp"
#include "lsmcf/scenarios.hpp"

using namespace lsmcf;

namespace {

ScalarField sample(const Grid& g, double (*f)(const Vec3&)) {
    ScalarField u(g, 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(g.point(i));
    return u;
}

bool interior(const Grid& g, std::size_t i) {
    const auto ijk = g.unflatten(i);
    for (int k = 0; k < g.dim(); ++k)
        if (ijk[k] == 0 || ijk[k] == g.size(k) - 1) return false;
    return true;
}

}  // namespace

TEST_CASE("affine and constant fields are stationary exactly") {
    const Grid g = make_grid({9, 8}, {0.125, 0.125}, {-0.5, -0.5});
    const ScalarField aff = sample(g, [](const Vec3& p) { return 0.75 * p[0] - 0.5 * p[1] + 0.25; });
    const ScalarField r = curvature_rhs(aff, default_params(g));
    for (std::size_t i = 0; i < r.size(); ++i)
        if (interior(g, i)) CHECK(r[i] == 0.0);
    const ScalarField c(g, 3.5);
    const ScalarField rc = curvature_rhs(c, default_params(g));
    for (double v : rc.values()) CHECK(v == 0.0);

    const Grid g3 = make_grid({5, 6, 7}, {0.25, 0.25, 0.5}, {-0.5, -1.0, 0.0});
    const ScalarField aff3 = sample(g3, [](const Vec3& p) { return 0.5 * p[0] + 0.25 * p[1] - p[2]; });
    const ScalarField r3 = curvature_rhs(aff3, default_params(g3));
    for (std::size_t i = 0; i < r3.size(); ++i)
        if (interior(g3, i)) CHECK(r3[i] == 0.0);
}

TEST_CASE("adding a constant changes R only by rounding") {
    const Grid g = box_grid(2, 32, 1.5);
    const ScalarField u = sample(g, [](const Vec3& p) { return std::sin(3 * p[0]) * std::cos(2 * p[1]); });
    ScalarField v = u;
    for (auto& x : v.values()) x += 0.5;
    const ScalarField ru = curvature_rhs(u, default_params(g));
    const ScalarField rv = curvature_rhs(v, default_params(g));
    double d = 0;
    for (std::size_t i = 0; i < ru.size(); ++i) d = std::max(d, std::abs(ru[i] - rv[i]));
    CHECK(d < 1e-9);
}

TEST_CASE("translating by whole nodes shifts R exactly") {
    const Grid g = box_grid(2, 40, 1.0);
    auto f = [](double x, double y) { return std::min(std::abs(std::hypot(x - 0.1, y + 0.2) - 0.4), 0.3); };
    ScalarField u(g, 0.0), v(g, 0.0);
    const int s = 3;
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j) {
            u[g.index(i, j)] = f(g.coord(0, i), g.coord(1, j));
            v[g.index(i, j)] = f(g.coord(0, i - s), g.coord(1, j));
        }
    const ScalarField ru = curvature_rhs(u, default_params(g));
    const ScalarField rv = curvature_rhs(v, default_params(g));
    for (int i = 1; i + s < 40; ++i)
        for (int j = 1; j < 40; ++j) CHECK(rv[g.index(i + s, j)] == ru[g.index(i, j)]);
}

TEST_CASE("radial quadratic: error drops by a factor in [3, 5] when h halves (eps = h)") {
    const double e1 = radial_quadratic_error(64);
    const double e2 = radial_quadratic_error(128);
    const double e3 = radial_quadratic_error(256);
    CHECK(e1 / e2 >= 3.0);
    CHECK(e1 / e2 <= 5.0);
    CHECK(e2 / e3 >= 3.0);
    CHECK(e2 / e3 <= 5.0);
}

TEST_CASE("level circles of r - 1 have R = 1/r") {
    const Grid g = box_grid(2, 256, 1.5);
    const ScalarField u = sample(g, [](const Vec3& p) { return std::hypot(p[0], p[1]) - 1.0; });
    const ScalarField r = curvature_rhs(u, default_params(g));
    // Node (0.5, 0) lies on the grid: index (128 + 0.5 / h, 128).
    const double h = g.spacing(0);
    const int i = 128 + int(std::lround(0.5 / h));
    const Vec3 p = g.point(g.index(i, 128));
    CHECK(r[g.index(i, 128)] == doctest::Approx(1.0 / p[0]).epsilon(0.01));
}

TEST_CASE("radial fields give radial R up to O(h^2)") {
    auto asym = [](int cells) {
        const Grid g = box_grid(2, cells, 1.5);
        const ScalarField u = sample(g, [](const Vec3& p) { return std::exp(-(p[0] * p[0] + p[1] * p[1])); });
        const ScalarField r = curvature_rhs(u, default_params(g));
        // Nodes at equal radius: the 8 symmetric images of (i, j) plus swaps.
        double worst = 0;
        const int c = cells / 2;
        for (int a = 0; a < cells / 3; ++a)
            for (int b = 0; b < cells / 3; ++b) {
                const double v = r[g.index(c + a, c + b)];
                worst = std::max(worst, std::abs(v - r[g.index(c - a, c + b)]));
                worst = std::max(worst, std::abs(v - r[g.index(c + b, c + a)]));
                worst = std::max(worst, std::abs(v - r[g.index(c - b, c - a)]));
            }
        // Pairs with equal radius but not related by a symmetry: (3,4) and (5,0).
        const double s = cells / 32.0;
        const int k = int(s);
        worst = std::max(worst, std::abs(r[g.index(c + 3 * k, c + 4 * k)] - r[g.index(c + 5 * k, c)]));
        return worst;
    };
    const double a64 = asym(64), a128 = asym(128);
    CHECK(a64 < 0.05);
    CHECK(a128 <= a64 / 3.0);
}

TEST_CASE("degenerate ellipticity: a nonnegative Hessian perturbation never decreases R") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-1, 1);
    const double h = 0.05, eps = 0.05;
    for (int trial = 0; trial < 2000; ++trial) {
        double v[3][3];
        for (auto& row : v)
            for (double& x : row) x = U(rng);
        const double base = curvature_stencil_2d(v, h, h, eps);
        // Add q(x) = a x^2 + 2 b x y + c y^2 with [a b; b c] >= 0; its central
        // differences leave the gradient unchanged and add 2[a b; b c] to the Hessian.
        const double a = std::abs(U(rng)), c = std::abs(U(rng));
        const double b = U(rng) * std::sqrt(a * c);
        double w[3][3];
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                const double x = di * h, y = dj * h;
                w[di + 1][dj + 1] = v[di + 1][dj + 1] + a * x * x + 2 * b * x * y + c * y * y;
            }
        CHECK(curvature_stencil_2d(w, h, h, eps) >= base - 1e-9);
    }
}

TEST_CASE("scalar and active backends agree bitwise through curvature_rhs") {
    const Grid g = box_grid(2, 45, 1.5);
    const ScalarField u = sample(g, [](const Vec3& p) { return std::min(std::abs(std::hypot(p[0], p[1]) - 1), 0.3); });
    const auto active = kernels::active_backend();
    const ScalarField a = curvature_rhs(u, default_params(g));
    kernels::set_active_backend(kernels::Backend::Scalar);
    const ScalarField b = curvature_rhs(u, default_params(g));
    kernels::set_active_backend(active);
    CHECK(a.values() == b.values());
}

TEST_CASE("cfl_dt examples") {
    const Grid g2 = box_grid(2, 10, 0.5);  // h = 0.1
    CHECK(cfl_dt(g2, 1.0) == doctest::Approx(0.01 / 4));
    const Grid g3 = box_grid(3, 10, 0.5);
    CHECK(cfl_dt(g3, 1.0) == doctest::Approx(0.01 / 6));
    const Grid ga = make_grid({5, 5}, {0.01, 0.02}, {0, 0});
    CHECK(cfl_dt(ga, 0.5) == doctest::Approx(2e-5));
    CHECK_THROWS_AS(cfl_dt(g2, 0.0), Error);
    CHECK_THROWS_AS(cfl_dt(g2, 1.5), Error);
}

TEST_CASE("operator errors") {
    const Grid g = box_grid(2, 8, 1.0);
    ScalarField u(g, 0.0);
    u[10] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(curvature_rhs(u, default_params(g)), Error);
    OperatorParams p = default_params(g);
    p.eps = 0;
    CHECK_THROWS_AS(curvature_rhs(ScalarField(g, 0.0), p), Error);
}
