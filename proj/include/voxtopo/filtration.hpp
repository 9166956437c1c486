#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "voxtopo/volume.hpp"

namespace voxtopo {

enum class Direction { sublevel, superlevel };

using CellId = std::uint32_t;

struct Cell {
    CellId id = 0;
    int dim = 0;
    int filtration_bin = 0;

    bool operator==(const Cell&) const = default;
};

/// Filtered cubical complex of a quantized volume.
///
/// Voxels are the top-dimensional cells. Every lower-dimensional cell (face,
/// edge, vertex) enters at the minimum bin over the voxels that contain it, so
/// the sublevel complex at bin n is the union of closed voxels with bin <= n and
/// foreground components are 26-connected.
///
/// Cells live on a grid of (2nx+1) x (2ny+1) x (2nz+1) positions: voxel i sits at
/// coordinate 2i+1 along each axis, shared faces/edges/vertices at even
/// coordinates. An axis of extent 1 is collapsed to a single coordinate and
/// contributes no dimension, so a 2D image yields a 2D complex (no 3-cells) and a
/// single voxel yields one 0-cell. Cell ids are linear grid indices, x fastest.
///
/// Superlevel filtrations are built on the reflected bins b -> N + 1 - b;
/// diagrams of a superlevel filtration are therefore in reflected coordinates.
class CubicalFiltration {
public:
    static CubicalFiltration build(const QuantizedVolume& qvol, Direction direction = Direction::sublevel);

    const Dims& voxel_dims() const { return voxel_dims_; }
    const std::array<std::size_t, 3>& cell_dims() const { return cell_dims_; }
    int levels() const { return levels_; }
    Direction direction() const { return direction_; }
    /// Highest cell dimension present (number of non-degenerate axes).
    int max_dim() const { return max_dim_; }

    std::size_t cell_count() const { return bins_.size(); }
    int dim(CellId id) const;
    int bin(CellId id) const { return bins_[id]; }
    Cell cell(CellId id) const { return {id, dim(id), bin(id)}; }
    std::array<std::size_t, 3> coords(CellId id) const;

    /// Cells sorted by (bin, dim, id); every cell appears after its boundary.
    std::span<const CellId> order() const { return order_; }

    /// The 2*dim codimension-1 faces, axis by axis (x, y, z), low side first.
    std::vector<CellId> boundary(CellId id) const;
    /// Allocation-free variant; returns the number of faces written (<= 6).
    int boundary(CellId id, std::array<CellId, 6>& out) const;

    /// Cell counts per dimension (c0, c1, c2, c3) with bin <= `bin`. Bins below 1
    /// give the empty complex; bins above N give the full complex.
    std::array<std::size_t, 4> cells_at_or_below(int bin) const;

private:
    CubicalFiltration() = default;

    Dims voxel_dims_;
    std::array<std::size_t, 3> cell_dims_{1, 1, 1};
    std::array<std::size_t, 3> strides_{1, 1, 1};
    std::array<bool, 3> collapsed_{true, true, true};
    int levels_ = 0;
    int max_dim_ = 0;
    Direction direction_ = Direction::sublevel;
    std::vector<std::uint16_t> bins_;
    std::vector<CellId> order_;
    // cumulative_[bin * 4 + dim] = number of cells of that dim with bin <= bin.
    std::vector<std::size_t> cumulative_;
};

}  // namespace voxtopo
