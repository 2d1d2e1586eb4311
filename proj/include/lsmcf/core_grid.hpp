#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsmcf {

using Vec3 = std::array<double, 3>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rectilinear node grid in 2 or 3 dimensions. Node i along axis k sits at
// origin[k] + i * spacing[k]. Flat indices are row-major: the last axis is
// contiguous.
class Grid {
public:
    Grid() = default;

    int dim() const { return dim_; }
    int size(int axis) const { return dims_[axis]; }
    double spacing(int axis) const { return spacing_[axis]; }
    double origin(int axis) const { return origin_[axis]; }
    double h_min() const;
    std::size_t node_count() const { return count_; }
    std::size_t stride(int axis) const { return stride_[axis]; }

    double coord(int axis, int i) const { return origin_[axis] + i * spacing_[axis]; }
    Vec3 point(std::size_t flat) const;
    std::array<int, 3> unflatten(std::size_t flat) const;
    std::size_t flatten(const std::array<int, 3>& ijk) const;
    std::size_t index(int i, int j) const { return std::size_t(i) * stride_[0] + std::size_t(j); }
    std::size_t index(int i, int j, int k) const {
        return std::size_t(i) * stride_[0] + std::size_t(j) * stride_[1] + std::size_t(k);
    }

    // Node nearest to p (ties resolved towards the lower index), clamped to the box.
    std::size_t nearest_node(const Vec3& p) const;

    bool operator==(const Grid& o) const;
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    friend Grid make_grid(const std::vector<int>&, const std::vector<double>&,
                          const std::vector<double>&);
    int dim_ = 0;
    std::array<int, 3> dims_{1, 1, 1};
    std::array<double, 3> spacing_{1, 1, 1};
    std::array<double, 3> origin_{0, 0, 0};
    std::array<std::size_t, 3> stride_{0, 0, 1};
    std::size_t count_ = 0;
};

Grid make_grid(const std::vector<int>& dims, const std::vector<double>& spacing,
               const std::vector<double>& origin);

// The cube [-half_width, half_width]^dim split into `cells` intervals per axis
// (cells + 1 nodes). Even `cells` puts a node on the origin.
Grid box_grid(int dim, int cells, double half_width);

class ScalarField {
public:
    ScalarField() = default;
    ScalarField(Grid grid, double fill);
    ScalarField(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    const double* data() const { return values_.data(); }
    double* data() { return values_.data(); }

    // Throws naming the first non-finite node.
    void check_finite(const char* what) const;

private:
    Grid grid_;
    std::vector<double> values_;
};

struct GeometrySet {
    enum class Kind { PointCloud, PolylineSet, Circle, Sphere, Segment };

    Kind kind = Kind::PointCloud;
    std::vector<Vec3> points;
    std::vector<std::vector<Vec3>> polylines;
    Vec3 center{0, 0, 0};
    double radius = 0;
    Vec3 a{0, 0, 0};
    Vec3 b{0, 0, 0};

    static GeometrySet point_cloud(std::vector<Vec3> pts);
    static GeometrySet polyline_set(std::vector<std::vector<Vec3>> lines);
    static GeometrySet circle(Vec3 center, double radius);
    static GeometrySet sphere(Vec3 center, double radius);
    static GeometrySet segment(Vec3 a, Vec3 b);

    bool empty() const;
    void validate() const;
};

// Exact Euclidean distance from every node to the set (brute force).
ScalarField distance_field(const GeometrySet& set, const Grid& grid);

ScalarField cap(const ScalarField& field, double delta);
ScalarField field_min(const ScalarField& a, const ScalarField& b);
ScalarField field_max(const ScalarField& a, const ScalarField& b);
ScalarField pointwise_clamp(const ScalarField& f, const ScalarField& lo, const ScalarField& hi);
ScalarField pointwise_clamp(const ScalarField& f, double lo, double hi);
ScalarField abs_field(const ScalarField& f);
ScalarField scaled(const ScalarField& f, double s);
ScalarField multiply(const ScalarField& a, const ScalarField& b);

// Field snapshot format: header `n,dims...,spacings...,origin...`, then one
// row along the last axis per line, 17 significant digits.
void write_field_csv(std::ostream& os, const ScalarField& f);
void write_field_csv(const std::string& path, const ScalarField& f);
ScalarField read_field_csv(std::istream& is);
ScalarField read_field_csv(const std::string& path);

// Legacy ASCII VTK structured points with one scalar array `u`.
void write_field_vtk(const std::string& path, const ScalarField& f);

std::string format_double(double v);

}  // namespace lsmcf
