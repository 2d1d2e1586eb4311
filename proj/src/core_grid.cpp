#include "lsmcf/core_grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "lsmcf/kernels.hpp"

namespace lsmcf {

Grid make_grid(const std::vector<int>& dims, const std::vector<double>& spacing,
               const std::vector<double>& origin) {
    const std::size_t n = dims.size();
    if (n != 2 && n != 3) throw Error("grid dimension must be 2 or 3");
    if (spacing.size() != n || origin.size() != n) throw Error("grid spacing/origin arity mismatch");
    Grid g;
    g.dim_ = int(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (dims[k] < 3) throw Error("grid dims must be >= 3 along every axis");
        if (!(spacing[k] > 0) || !std::isfinite(spacing[k])) throw Error("grid spacing must be positive");
        if (!std::isfinite(origin[k])) throw Error("grid origin must be finite");
        g.dims_[k] = dims[k];
        g.spacing_[k] = spacing[k];
        g.origin_[k] = origin[k];
    }
    std::size_t s = 1;
    for (int k = int(n) - 1; k >= 0; --k) {
        g.stride_[k] = s;
        s *= std::size_t(g.dims_[k]);
    }
    g.count_ = s;
    return g;
}

Grid box_grid(int dim, int cells, double half_width) {
    if (cells < 2) throw Error("box grid needs at least 2 cells per axis");
    const double h = 2 * half_width / cells;
    return make_grid(std::vector<int>(dim, cells + 1), std::vector<double>(dim, h),
                     std::vector<double>(dim, -half_width));
}

double Grid::h_min() const {
    double h = spacing_[0];
    for (int k = 1; k < dim_; ++k) h = std::min(h, spacing_[k]);
    return h;
}

std::array<int, 3> Grid::unflatten(std::size_t flat) const {
    std::array<int, 3> ijk{0, 0, 0};
    for (int k = 0; k < dim_; ++k) {
        ijk[k] = int(flat / stride_[k]);
        flat %= stride_[k];
    }
    return ijk;
}

std::size_t Grid::flatten(const std::array<int, 3>& ijk) const {
    std::size_t f = 0;
    for (int k = 0; k < dim_; ++k) f += std::size_t(ijk[k]) * stride_[k];
    return f;
}

Vec3 Grid::point(std::size_t flat) const {
    const auto ijk = unflatten(flat);
    Vec3 p{0, 0, 0};
    for (int k = 0; k < dim_; ++k) p[k] = coord(k, ijk[k]);
    return p;
}

std::size_t Grid::nearest_node(const Vec3& p) const {
    std::array<int, 3> ijk{0, 0, 0};
    for (int k = 0; k < dim_; ++k) {
        const double s = (p[k] - origin_[k]) / spacing_[k];
        int i = int(std::ceil(s - 0.5));
        ijk[k] = std::clamp(i, 0, dims_[k] - 1);
    }
    return flatten(ijk);
}

bool Grid::operator==(const Grid& o) const {
    return dim_ == o.dim_ && dims_ == o.dims_ && spacing_ == o.spacing_ && origin_ == o.origin_;
}

ScalarField::ScalarField(Grid grid, double fill) : grid_(std::move(grid)), values_(grid_.node_count(), fill) {
    if (!std::isfinite(fill)) throw Error("field fill value must be finite");
}

ScalarField::ScalarField(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.node_count()) throw Error("field size does not match grid node count");
    check_finite("field");
}

void ScalarField::check_finite(const char* what) const {
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]))
            throw Error(std::string(what) + ": non-finite value at node " + std::to_string(i));
}

GeometrySet GeometrySet::point_cloud(std::vector<Vec3> pts) {
    GeometrySet g;
    g.kind = Kind::PointCloud;
    g.points = std::move(pts);
    return g;
}

GeometrySet GeometrySet::polyline_set(std::vector<std::vector<Vec3>> lines) {
    GeometrySet g;
    g.kind = Kind::PolylineSet;
    g.polylines = std::move(lines);
    g.validate();
    return g;
}

GeometrySet GeometrySet::circle(Vec3 center, double radius) {
    GeometrySet g;
    g.kind = Kind::Circle;
    g.center = center;
    g.radius = radius;
    g.validate();
    return g;
}

GeometrySet GeometrySet::sphere(Vec3 center, double radius) {
    GeometrySet g = circle(center, radius);
    g.kind = Kind::Sphere;
    return g;
}

GeometrySet GeometrySet::segment(Vec3 a, Vec3 b) {
    GeometrySet g;
    g.kind = Kind::Segment;
    g.a = a;
    g.b = b;
    return g;
}

bool GeometrySet::empty() const {
    switch (kind) {
        case Kind::PointCloud: return points.empty();
        case Kind::PolylineSet: return polylines.empty();
        default: return false;
    }
}

void GeometrySet::validate() const {
    if ((kind == Kind::Circle || kind == Kind::Sphere) && !(radius > 0))
        throw Error("circle/sphere radius must be positive");
    if (kind == Kind::PolylineSet)
        for (const auto& l : polylines)
            if (l.size() < 2) throw Error("polyline needs at least 2 vertices");
}

namespace {

struct SegmentSoA {
    std::vector<double> ax, ay, az, dx, dy, dz, inv;

    void add(const Vec3& a, const Vec3& b) {
        const double x = b[0] - a[0], y = b[1] - a[1], z = b[2] - a[2];
        const double l2 = (x * x + y * y) + z * z;
        ax.push_back(a[0]);
        ay.push_back(a[1]);
        az.push_back(a[2]);
        dx.push_back(x);
        dy.push_back(y);
        dz.push_back(z);
        inv.push_back(l2 > 0 ? 1.0 / l2 : 0.0);
    }

    kernels::SegmentBatch batch() const {
        return {ax.data(), ay.data(), az.data(), dx.data(), dy.data(), dz.data(), inv.data(), ax.size()};
    }
};

ScalarField analytic_round(const GeometrySet& set, const Grid& grid) {
    ScalarField f(grid, 0.0);
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const Vec3 p = grid.point(i);
        double r2 = 0;
        for (int k = 0; k < grid.dim(); ++k) r2 += (p[k] - set.center[k]) * (p[k] - set.center[k]);
        if (set.kind == GeometrySet::Kind::Circle && grid.dim() == 3) {
            // Circle in the z = center.z plane.
            const double rho = std::sqrt((p[0] - set.center[0]) * (p[0] - set.center[0]) +
                                         (p[1] - set.center[1]) * (p[1] - set.center[1]));
            const double dz = p[2] - set.center[2];
            f[i] = std::hypot(rho - set.radius, dz);
        } else {
            f[i] = std::abs(std::sqrt(r2) - set.radius);
        }
    }
    return f;
}

}  // namespace

ScalarField distance_field(const GeometrySet& set, const Grid& grid) {
    set.validate();
    if (set.empty()) throw Error("distance_field: empty geometry set");
    if (set.kind == GeometrySet::Kind::Circle || set.kind == GeometrySet::Kind::Sphere)
        return analytic_round(set, grid);

    std::vector<std::pair<Vec3, Vec3>> pieces;
    switch (set.kind) {
        case GeometrySet::Kind::PointCloud:
            for (const auto& p : set.points) pieces.emplace_back(p, p);
            break;
        case GeometrySet::Kind::PolylineSet:
            for (const auto& l : set.polylines)
                for (std::size_t k = 0; k + 1 < l.size(); ++k) pieces.emplace_back(l[k], l[k + 1]);
            break;
        case GeometrySet::Kind::Segment: pieces.emplace_back(set.a, set.b); break;
        default: break;
    }
    // Kernel rows run along the grid's last axis, so segments are expressed in
    // the frame (last axis, first axis, second axis).
    auto frame = [&](const Vec3& v) -> Vec3 {
        return grid.dim() == 2 ? Vec3{v[1], v[0], 0} : Vec3{v[2], v[0], v[1]};
    };
    SegmentSoA rot;
    for (const auto& [a, b] : pieces) rot.add(frame(a), frame(b));
    const auto batch = rot.batch();
    const auto backend = kernels::active_backend();
    const int last = grid.dim() - 1;
    const int nrow = grid.size(last);
    std::vector<double> xs(nrow);
    for (int i = 0; i < nrow; ++i) xs[i] = grid.coord(last, i);
    std::vector<double> out(grid.node_count(), std::numeric_limits<double>::infinity());
    for (std::size_t row = 0; row < grid.node_count(); row += nrow) {
        const Vec3 p = grid.point(row);
        kernels::min_dist2_row(backend, xs.data(), p[0], grid.dim() == 3 ? p[1] : 0.0, nrow, batch,
                               out.data() + row);
    }
    for (auto& v : out) v = std::sqrt(v);
    return ScalarField(grid, std::move(out));
}

ScalarField cap(const ScalarField& field, double delta) {
    if (!(delta > 0)) throw Error("cap: delta must be positive");
    ScalarField out = field;
    for (auto& v : out.values()) v = std::min(v, delta);
    return out;
}

namespace {
void require_same(const ScalarField& a, const ScalarField& b, const char* op) {
    if (a.grid() != b.grid()) throw Error(std::string(op) + ": fields live on different grids");
}
}  // namespace

ScalarField field_min(const ScalarField& a, const ScalarField& b) {
    require_same(a, b, "field_min");
    ScalarField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(a[i], b[i]);
    return out;
}

ScalarField field_max(const ScalarField& a, const ScalarField& b) {
    require_same(a, b, "field_max");
    ScalarField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(a[i], b[i]);
    return out;
}

ScalarField pointwise_clamp(const ScalarField& f, const ScalarField& lo, const ScalarField& hi) {
    require_same(f, lo, "pointwise_clamp");
    require_same(f, hi, "pointwise_clamp");
    ScalarField out = f;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (lo[i] > hi[i]) throw Error("pointwise_clamp: lo > hi at node " + std::to_string(i));
        out[i] = std::min(std::max(f[i], lo[i]), hi[i]);
    }
    return out;
}

ScalarField pointwise_clamp(const ScalarField& f, double lo, double hi) {
    if (lo > hi) throw Error("pointwise_clamp: lo > hi");
    ScalarField out = f;
    for (auto& v : out.values()) v = std::min(std::max(v, lo), hi);
    return out;
}

ScalarField abs_field(const ScalarField& f) {
    ScalarField out = f;
    for (auto& v : out.values()) v = std::abs(v);
    return out;
}

ScalarField scaled(const ScalarField& f, double s) {
    ScalarField out = f;
    for (auto& v : out.values()) v *= s;
    return out;
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
    require_same(a, b, "multiply");
    ScalarField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, std::size_t(n));
}

void write_field_csv(std::ostream& os, const ScalarField& f) {
    const Grid& g = f.grid();
    os << g.dim();
    for (int k = 0; k < g.dim(); ++k) os << ',' << g.size(k);
    for (int k = 0; k < g.dim(); ++k) os << ',' << format_double(g.spacing(k));
    for (int k = 0; k < g.dim(); ++k) os << ',' << format_double(g.origin(k));
    os << '\n';
    const std::size_t row = std::size_t(g.size(g.dim() - 1));
    std::string line;
    for (std::size_t start = 0; start < f.size(); start += row) {
        line.clear();
        for (std::size_t i = 0; i < row; ++i) {
            if (i) line += ',';
            line += format_double(f[start + i]);
        }
        line += '\n';
        os << line;
    }
}

void write_field_csv(const std::string& path, const ScalarField& f) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_field_csv(os, f);
}

namespace {
std::vector<double> split_numbers(const std::string& line, int lineno) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || *end != '\0') throw Error("field csv: bad number on line " + std::to_string(lineno));
        out.push_back(v);
    }
    return out;
}
}  // namespace

ScalarField read_field_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw Error("field csv: missing header");
    const auto head = split_numbers(line, 1);
    if (head.empty()) throw Error("field csv: empty header");
    const int n = int(head[0]);
    if ((n != 2 && n != 3) || head.size() != std::size_t(1 + 3 * n)) throw Error("field csv: malformed header");
    std::vector<int> dims(n);
    std::vector<double> sp(n), org(n);
    for (int k = 0; k < n; ++k) {
        dims[k] = int(head[1 + k]);
        sp[k] = head[1 + n + k];
        org[k] = head[1 + 2 * n + k];
    }
    const Grid g = make_grid(dims, sp, org);
    std::vector<double> vals;
    vals.reserve(g.node_count());
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto row = split_numbers(line, lineno);
        if (row.size() != std::size_t(g.size(n - 1)))
            throw Error("field csv: wrong row length on line " + std::to_string(lineno));
        vals.insert(vals.end(), row.begin(), row.end());
    }
    return ScalarField(g, std::move(vals));
}

ScalarField read_field_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path);
    return read_field_csv(is);
}

void write_field_vtk(const std::string& path, const ScalarField& f) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    const Grid& g = f.grid();
    // VTK orders points with x fastest; our last axis is contiguous, so axis
    // order is reversed in the header.
    int d[3] = {1, 1, 1};
    double s[3] = {1, 1, 1}, o[3] = {0, 0, 0};
    for (int k = 0; k < g.dim(); ++k) {
        const int r = g.dim() - 1 - k;
        d[r] = g.size(k);
        s[r] = g.spacing(k);
        o[r] = g.origin(k);
    }
    os << "# vtk DataFile Version 3.0\nlevel-set field u\nASCII\nDATASET STRUCTURED_POINTS\n";
    os << "DIMENSIONS " << d[0] << ' ' << d[1] << ' ' << d[2] << '\n';
    os << "ORIGIN " << format_double(o[0]) << ' ' << format_double(o[1]) << ' ' << format_double(o[2]) << '\n';
    os << "SPACING " << format_double(s[0]) << ' ' << format_double(s[1]) << ' ' << format_double(s[2]) << '\n';
    os << "POINT_DATA " << f.size() << "\nSCALARS u double 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < f.size(); ++i) os << format_double(f[i]) << '\n';
}

}  // namespace lsmcf
