#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "lsmcf/analysis.hpp"

namespace lsmcf {

std::size_t FrontSet::vertex_count() const {
    std::size_t n = 0;
    for (const auto& p : pieces) n += p.size();
    return n;
}

namespace {

// Edge keys: axis-a edge leaving node n has key n * 3 + a.
using Key = std::uint64_t;

struct Linker {
    std::vector<Vec3> verts;
    std::unordered_map<Key, int> ids;
    std::vector<std::array<int, 2>> segs;

    int vertex(Key k, const Vec3& p) {
        auto [it, fresh] = ids.try_emplace(k, int(verts.size()));
        if (fresh) verts.push_back(p);
        return it->second;
    }

    void chain(FrontSet& out) const {
        std::vector<std::vector<int>> adj(verts.size());
        for (int s = 0; s < int(segs.size()); ++s) {
            adj[segs[s][0]].push_back(s);
            adj[segs[s][1]].push_back(s);
        }
        std::vector<char> used(segs.size(), 0);
        auto walk = [&](int start_vertex, int first_seg) {
            std::vector<Vec3> line{verts[start_vertex]};
            int v = start_vertex, s = first_seg;
            while (s >= 0) {
                used[s] = 1;
                v = segs[s][0] == v ? segs[s][1] : segs[s][0];
                line.push_back(verts[v]);
                int next = -1;
                for (int t : adj[v])
                    if (!used[t]) {
                        next = t;
                        break;
                    }
                s = next;
            }
            const bool loop = line.size() > 2 && v == start_vertex;
            out.pieces.push_back(std::move(line));
            out.closed.push_back(loop);
        };
        // Open chains first, starting from odd-degree ends, then loops.
        for (int v = 0; v < int(verts.size()); ++v)
            if (adj[v].size() % 2 == 1)
                for (int s : adj[v])
                    if (!used[s]) walk(v, s);
        for (int s = 0; s < int(segs.size()); ++s)
            if (!used[s]) walk(segs[s][0], s);
    }
};

Vec3 lerp(const Vec3& a, const Vec3& b, double va, double vb) {
    const double t = va / (va - vb);
    return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
}

// f is the field minus the level; negative = inside.
void march_squares(const Grid& g, const std::vector<double>& f, const CutMask* cuts, FrontSet& out) {
    const int n0 = g.size(0), n1 = g.size(1);
    Linker L;
    // Corner order: c0 (i,j), c1 (i+1,j), c2 (i+1,j+1), c3 (i,j+1).
    // Edges: e0 c0-c1, e1 c1-c2, e2 c3-c2, e3 c0-c3.
    static const int edge_corners[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};
    static const int table[16][4] = {
        {-1, -1, -1, -1}, {3, 0, -1, -1}, {0, 1, -1, -1}, {3, 1, -1, -1}, {1, 2, -1, -1}, {-2, -1, -1, -1},
        {0, 2, -1, -1},   {3, 2, -1, -1}, {2, 3, -1, -1}, {0, 2, -1, -1}, {-3, -1, -1, -1}, {1, 2, -1, -1},
        {1, 3, -1, -1},   {0, 1, -1, -1}, {3, 0, -1, -1}, {-1, -1, -1, -1}};
    for (int i = 0; i + 1 < n0; ++i)
        for (int j = 0; j + 1 < n1; ++j) {
            const std::size_t node[4] = {g.index(i, j), g.index(i + 1, j), g.index(i + 1, j + 1), g.index(i, j + 1)};
            double v[4] = {f[node[0]], f[node[1]], f[node[2]], f[node[3]]};
            if (cuts) {
                if (cuts->cut(node[0], 1, 0)) v[1] = -v[1];
                if (cuts->cut(node[0], 1, 1)) v[2] = -v[2];
                if (cuts->cut(node[0], 0, 1)) v[3] = -v[3];
            }
            int c = 0;
            for (int k = 0; k < 4; ++k)
                if (v[k] < 0) c |= 1 << k;
            if (c == 0 || c == 15) continue;
            auto edge_vertex = [&](int e) {
                const int a = edge_corners[e][0], b = edge_corners[e][1];
                const std::size_t lo = std::min(node[a], node[b]);
                const int axis = (e == 0 || e == 2) ? 0 : 1;
                return L.vertex(Key(lo) * 3 + Key(axis), lerp(g.point(node[a]), g.point(node[b]), v[a], v[b]));
            };
            auto add = [&](int e0, int e1) { L.segs.push_back({edge_vertex(e0), edge_vertex(e1)}); };
            if (table[c][0] >= 0) {
                add(table[c][0], table[c][1]);
                continue;
            }
            const bool centre_inside = (v[0] + v[1] + v[2] + v[3]) < 0;
            if (c == 5) {
                if (centre_inside) {
                    add(0, 1);
                    add(2, 3);
                } else {
                    add(3, 0);
                    add(1, 2);
                }
            } else {  // c == 10
                if (centre_inside) {
                    add(3, 0);
                    add(1, 2);
                } else {
                    add(0, 1);
                    add(2, 3);
                }
            }
        }
    L.chain(out);
}

void march_tetrahedra(const Grid& g, const std::vector<double>& f, FrontSet& out) {
    const int n0 = g.size(0), n1 = g.size(1), n2 = g.size(2);
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int i = 0; i + 1 < n0; ++i)
        for (int j = 0; j + 1 < n1; ++j)
            for (int k = 0; k + 1 < n2; ++k)
                for (const auto& p : perms) {
                    std::array<int, 3> c{i, j, k};
                    std::size_t id[4];
                    id[0] = g.flatten(c);
                    for (int s = 0; s < 3; ++s) {
                        ++c[p[s]];
                        id[s + 1] = g.flatten(c);
                    }
                    double v[4];
                    Vec3 x[4];
                    int in = 0, mask = 0;
                    for (int s = 0; s < 4; ++s) {
                        v[s] = f[id[s]];
                        x[s] = g.point(id[s]);
                        if (v[s] < 0) {
                            ++in;
                            mask |= 1 << s;
                        }
                    }
                    if (in == 0 || in == 4) continue;
                    auto cut = [&](int a, int b) { return lerp(x[a], x[b], v[a], v[b]); };
                    if (in == 1 || in == 3) {
                        const bool lone_in = in == 1;
                        int lone = 0;
                        for (int s = 0; s < 4; ++s)
                            if (((mask >> s) & 1) == int(lone_in)) lone = s;
                        std::vector<Vec3> tri;
                        for (int s = 0; s < 4; ++s)
                            if (s != lone) tri.push_back(cut(lone, s));
                        out.pieces.push_back(std::move(tri));
                        out.closed.push_back(true);
                    } else {
                        int a[2], b[2], na = 0, nb = 0;
                        for (int s = 0; s < 4; ++s) {
                            if ((mask >> s) & 1)
                                a[na++] = s;
                            else
                                b[nb++] = s;
                        }
                        const Vec3 q0 = cut(a[0], b[0]), q1 = cut(a[0], b[1]), q2 = cut(a[1], b[1]),
                                   q3 = cut(a[1], b[0]);
                        out.pieces.push_back({q0, q1, q2});
                        out.closed.push_back(true);
                        out.pieces.push_back({q0, q2, q3});
                        out.closed.push_back(true);
                    }
                }
}

FrontSet contour(const ScalarField& field, double level, const CutMask* cuts, bool absolute_marks, double eta) {
    FrontSet out;
    out.grid = field.grid();
    out.level = eta;
    std::vector<double> f(field.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = field[i] - level;
        const double m = absolute_marks ? std::abs(field[i]) : field[i];
        if (m <= eta) out.marked_nodes.push_back(i);
    }
    if (field.grid().dim() == 2)
        march_squares(field.grid(), f, cuts, out);
    else
        march_tetrahedra(field.grid(), f, out);
    return out;
}

}  // namespace

FrontSet extract_front(const ScalarField& u, double eta) {
    if (!(eta >= 0)) throw Error("extract_front: eta must be >= 0");
    return contour(u, eta, nullptr, false, eta);
}

FrontSet extract_zero_front(const ScalarField& s, double eta, const CutMask* cuts) {
    if (!(eta >= 0)) throw Error("extract_zero_front: eta must be >= 0");
    if (cuts && cuts->grid != s.grid()) throw Error("extract_zero_front: cut mask on a different grid");
    return contour(s, 0.0, cuts, true, eta);
}

FrontSet sample_front(const GeometrySet& set, const Grid& grid, int per_unit) {
    set.validate();
    FrontSet out;
    out.grid = grid;
    auto densify = [&](const Vec3& a, const Vec3& b, std::vector<Vec3>& line) {
        const double len = std::hypot(std::hypot(b[0] - a[0], b[1] - a[1]), b[2] - a[2]);
        const int n = std::max(1, int(std::ceil(len * per_unit)));
        for (int s = line.empty() ? 0 : 1; s <= n; ++s) {
            const double t = double(s) / n;
            line.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])});
        }
    };
    switch (set.kind) {
        case GeometrySet::Kind::PointCloud:
            for (const auto& p : set.points) {
                out.pieces.push_back({p});
                out.closed.push_back(false);
            }
            break;
        case GeometrySet::Kind::Segment: {
            std::vector<Vec3> line;
            densify(set.a, set.b, line);
            out.pieces.push_back(std::move(line));
            out.closed.push_back(false);
            break;
        }
        case GeometrySet::Kind::PolylineSet:
            for (const auto& l : set.polylines) {
                std::vector<Vec3> line;
                for (std::size_t k = 0; k + 1 < l.size(); ++k) densify(l[k], l[k + 1], line);
                out.pieces.push_back(std::move(line));
                out.closed.push_back(false);
            }
            break;
        case GeometrySet::Kind::Circle:
        case GeometrySet::Kind::Sphere: {
            if (grid.dim() != 2 || set.kind == GeometrySet::Kind::Sphere)
                throw Error("sample_front: only 2D circles are sampled");
            const double pi = std::acos(-1.0);
            const int n = std::max(16, int(std::ceil(2 * pi * set.radius * per_unit)));
            std::vector<Vec3> line;
            for (int s = 0; s <= n; ++s) {
                const double th = 2 * pi * (s % n) / n;
                line.push_back({set.center[0] + set.radius * std::cos(th), set.center[1] + set.radius * std::sin(th), 0});
            }
            out.pieces.push_back(std::move(line));
            out.closed.push_back(true);
            break;
        }
    }
    return out;
}

void write_contours_csv(const std::string& path, const FrontSet& f) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    const bool three = f.grid.dim() == 3;
    os << (three ? "x,y,z,polyline_id\n" : "x,y,polyline_id\n");
    for (std::size_t k = 0; k < f.pieces.size(); ++k)
        for (const auto& p : f.pieces[k]) {
            os << format_double(p[0]) << ',' << format_double(p[1]);
            if (three) os << ',' << format_double(p[2]);
            os << ',' << k << '\n';
        }
}

}  // namespace lsmcf
