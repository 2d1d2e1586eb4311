#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "lsmcf/core_grid.hpp"

namespace lsmcf {

// Stencil edges that cross a branch cut of a signed representation. A bit set
// for (node, offset) means the neighbour's value enters that node's stencil
// with its sign flipped.
struct CutMask {
    Grid grid;
    std::vector<std::uint32_t> bits;

    bool cut(std::size_t node, int di, int dj, int dk = 0) const;
    std::size_t edge_count() const;
};

// Side assignment for building signed data sigma * dist. For an open curve the
// sides are those of the curve continued by rays along its end tangents; stencil
// edges crossing those rays are branch cuts.
struct Orientation {
    ScalarField sign;  // +1 / -1 per node
    std::shared_ptr<const CutMask> cuts;
};

// Inside of a circle (2D) or sphere (3D) is -1.
Orientation orientation_closed(const GeometrySet& round, const Grid& grid);

// 2D open polyline whose end tangents are not vertical. +1 is the side an
// upward vertical ray from the node reaches after an even number of crossings;
// nodes exactly on the extended curve count as +1.
Orientation orientation_open_curve(const std::vector<Vec3>& polyline, const Grid& grid);

ScalarField apply_orientation(const ScalarField& magnitude, const Orientation& o);

}  // namespace lsmcf
