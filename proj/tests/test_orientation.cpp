#include <doctest.h>

#include <cmath>

#include "lsmcf/operator.hpp"
#include "lsmcf/orientation.hpp"

using namespace lsmcf;

TEST_CASE("closed orientation: inside is -1") {
    const Grid g = box_grid(2, 20, 1.0);
    const Orientation o = orientation_closed(GeometrySet::circle({0, 0, 0}, 0.5), g);
    CHECK(o.cuts == nullptr);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const Vec3 p = g.point(i);
        CHECK(o.sign[i] == (std::hypot(p[0], p[1]) < 0.5 ? -1.0 : 1.0));
    }
    CHECK_THROWS_AS(orientation_closed(GeometrySet::segment({0, 0, 0}, {1, 0, 0}), g), Error);
}

TEST_CASE("open chord: sides split by the extended line, cuts only on the rays") {
    const Grid g = box_grid(2, 20, 1.0);  // h = 0.1
    // Chord from (-0.45, 0.05) to (0.45, 0.05): the extended line y = 0.05 lies between rows.
    const Orientation o = orientation_open_curve({{-0.45, 0.05, 0}, {0.45, 0.05, 0}}, g);
    REQUIRE(o.cuts != nullptr);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const Vec3 p = g.point(i);
        // An upward ray from below crosses the line once.
        CHECK(o.sign[i] == (p[1] < 0.05 ? -1.0 : 1.0));
    }
    std::size_t cut_edges = 0;
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j)
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if ((!di && !dj) || i + di < 0 || i + di > 20 || j + dj < 0 || j + dj > 20) continue;
                    if (!o.cuts->cut(g.index(i, j), di, dj)) continue;
                    ++cut_edges;
                    // A cut edge reaches beyond the chord ends.
                    const double x0 = g.coord(0, i), x1 = g.coord(0, i + di);
                    CHECK(std::max(std::abs(x0), std::abs(x1)) >= 0.45);
                    // And the edge crosses the line.
                    CHECK((g.coord(1, j) - 0.05) * (g.coord(1, j + dj) - 0.05) < 0);
                }
    CHECK(cut_edges > 0);
    // Cuts are symmetric: a cut seen from one end is seen from the other.
    for (int i = 1; i < 20; ++i)
        for (int j = 1; j < 20; ++j)
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj)
                    if (di || dj)
                        CHECK(o.cuts->cut(g.index(i, j), di, dj) == o.cuts->cut(g.index(i + di, j + dj), -di, -dj));
}

TEST_CASE("cut-aware operator on signed data equals the signed operator on the distance") {
    // Beyond the chord ends the only sign changes are across the rays, where the
    // flipped neighbours restore sign(c) * dist locally. R is odd, so the two sides
    // agree bitwise.
    const Grid g = box_grid(2, 20, 1.0);
    const std::vector<Vec3> chord{{-0.45, 0.05, 0}, {0.45, 0.05, 0}};
    const Orientation o = orientation_open_curve(chord, g);
    const ScalarField dist = distance_field(GeometrySet::polyline_set({chord}), g);
    const ScalarField s = apply_orientation(dist, o);
    OperatorParams p = default_params(g);
    p.cuts = o.cuts;
    const ScalarField rs = curvature_rhs(s, p);
    const ScalarField rd = curvature_rhs(dist, default_params(g));
    int checked = 0;
    for (int i = 1; i < 20; ++i)
        for (int j = 1; j < 20; ++j) {
            if (std::abs(g.coord(0, i)) < 0.6) continue;
            const std::size_t c = g.index(i, j);
            CHECK(rs[c] == o.sign[c] * rd[c]);
            ++checked;
        }
    CHECK(checked == 8 * 19);
}

TEST_CASE("open orientation errors") {
    const Grid g = box_grid(2, 10, 1.0);
    CHECK_THROWS_AS(orientation_open_curve({{0, 0, 0}}, g), Error);
    CHECK_THROWS_AS(orientation_open_curve({{0, 0, 0}, {0, 0.5, 0}}, g), Error);
    CHECK_THROWS_AS(orientation_open_curve({{0, 0, 0}, {0, 0, 0}}, g), Error);
    CHECK_THROWS_AS(orientation_open_curve({{0, 0, 0}, {0.5, 0, 0}}, box_grid(3, 4, 1.0)), Error);
}
