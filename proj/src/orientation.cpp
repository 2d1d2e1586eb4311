#include "lsmcf/orientation.hpp"

#include <algorithm>
#include <cmath>

#include "lsmcf/kernels.hpp"

namespace lsmcf {

bool CutMask::cut(std::size_t node, int di, int dj, int dk) const {
    const int bit = grid.dim() == 2 ? kernels::offset_bit_2d(di, dj) : kernels::offset_bit_3d(di, dj, dk);
    return (bits[node] >> bit) & 1u;
}

std::size_t CutMask::edge_count() const {
    std::size_t n = 0;
    for (auto b : bits) n += std::size_t(__builtin_popcount(b));
    return n / 2;
}

Orientation orientation_closed(const GeometrySet& round, const Grid& grid) {
    if (round.kind != GeometrySet::Kind::Circle && round.kind != GeometrySet::Kind::Sphere)
        throw Error("orientation_closed needs a circle or sphere");
    round.validate();
    ScalarField s(grid, 1.0);
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const Vec3 p = grid.point(i);
        double r2 = 0;
        for (int k = 0; k < grid.dim(); ++k) r2 += (p[k] - round.center[k]) * (p[k] - round.center[k]);
        if (r2 < round.radius * round.radius) s[i] = -1.0;
    }
    return {std::move(s), nullptr};
}

namespace {

struct Seg {
    Vec3 a, b;
};

double cross(const Vec3& o, const Vec3& p, const Vec3& q) {
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0]);
}

bool on_box(const Vec3& o, const Vec3& p, const Vec3& q) {
    return std::min(o[0], p[0]) <= q[0] && q[0] <= std::max(o[0], p[0]) && std::min(o[1], p[1]) <= q[1] &&
           q[1] <= std::max(o[1], p[1]);
}

// Closed segment intersection.
bool intersects(const Seg& s, const Seg& t) {
    const double d1 = cross(t.a, t.b, s.a), d2 = cross(t.a, t.b, s.b);
    const double d3 = cross(s.a, s.b, t.a), d4 = cross(s.a, s.b, t.b);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    if (d1 == 0 && on_box(t.a, t.b, s.a)) return true;
    if (d2 == 0 && on_box(t.a, t.b, s.b)) return true;
    if (d3 == 0 && on_box(s.a, s.b, t.a)) return true;
    if (d4 == 0 && on_box(s.a, s.b, t.b)) return true;
    return false;
}

}  // namespace

Orientation orientation_open_curve(const std::vector<Vec3>& poly, const Grid& grid) {
    if (grid.dim() != 2) throw Error("open-curve orientation is 2D only");
    if (poly.size() < 2) throw Error("open curve needs at least 2 vertices");

    double span = 0;
    for (int k = 0; k < 2; ++k) span += grid.spacing(k) * (grid.size(k) - 1);
    const double far = 10 * span;
    auto ray = [&](const Vec3& end, const Vec3& prev) {
        Vec3 d{end[0] - prev[0], end[1] - prev[1], 0};
        const double len = std::hypot(d[0], d[1]);
        if (len == 0 || d[0] == 0) throw Error("open curve end tangent must be non-degenerate and non-vertical");
        return Seg{end, {end[0] + far * d[0] / len, end[1] + far * d[1] / len, 0}};
    };
    const Seg rays[2] = {ray(poly.front(), poly[1]), ray(poly.back(), poly[poly.size() - 2])};

    std::vector<Seg> pieces;
    for (std::size_t k = 0; k + 1 < poly.size(); ++k) pieces.push_back({poly[k], poly[k + 1]});
    pieces.push_back(rays[0]);
    pieces.push_back(rays[1]);

    ScalarField sign(grid, 1.0);
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const Vec3 p = grid.point(i);
        int crossings = 0;
        for (const auto& s : pieces) {
            if ((s.a[0] <= p[0]) == (s.b[0] <= p[0])) continue;
            const double y = s.a[1] + (p[0] - s.a[0]) * (s.b[1] - s.a[1]) / (s.b[0] - s.a[0]);
            if (y > p[1]) ++crossings;
        }
        sign[i] = (crossings % 2 == 0) ? 1.0 : -1.0;
    }

    auto mask = std::make_shared<CutMask>();
    mask->grid = grid;
    mask->bits.assign(grid.node_count(), 0u);
    const int n0 = grid.size(0), n1 = grid.size(1);
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            const std::size_t c = grid.index(i, j);
            const Vec3 pc = grid.point(c);
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (!di && !dj) continue;
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || jj < 0 || ii >= n0 || jj >= n1) continue;
                    const std::size_t q = grid.index(ii, jj);
                    if (sign[c] == sign[q]) continue;
                    const Seg e{pc, grid.point(q)};
                    if (intersects(e, rays[0]) || intersects(e, rays[1]))
                        mask->bits[c] |= 1u << kernels::offset_bit_2d(di, dj);
                }
        }
    return {std::move(sign), std::move(mask)};
}

ScalarField apply_orientation(const ScalarField& magnitude, const Orientation& o) {
    return multiply(magnitude, o.sign);
}

}  // namespace lsmcf
