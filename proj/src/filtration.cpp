#include "voxtopo/filtration.hpp"

#include <algorithm>
#include <limits>

namespace voxtopo {

namespace {
constexpr std::uint16_t kUnset = std::numeric_limits<std::uint16_t>::max();
}

CubicalFiltration CubicalFiltration::build(const QuantizedVolume& input, Direction direction) {
    const QuantizedVolume qvol = direction == Direction::superlevel ? input.reflected() : input;

    CubicalFiltration f;
    f.voxel_dims_ = qvol.dims();
    f.levels_ = qvol.levels();
    f.direction_ = direction;

    const std::array<std::size_t, 3> extent{qvol.dims().nx, qvol.dims().ny, qvol.dims().nz};
    for (int a = 0; a < 3; ++a) {
        f.collapsed_[a] = extent[a] == 1;
        f.cell_dims_[a] = f.collapsed_[a] ? 1 : 2 * extent[a] + 1;
        f.max_dim_ += f.collapsed_[a] ? 0 : 1;
    }
    f.strides_ = {1, f.cell_dims_[0], f.cell_dims_[0] * f.cell_dims_[1]};
    const std::size_t total = f.cell_dims_[0] * f.cell_dims_[1] * f.cell_dims_[2];
    if (total >= std::numeric_limits<CellId>::max()) {
        throw Error("volume " + to_string(qvol.dims()) + " is too large for 32-bit cell ids");
    }

    // Voxels first, then spread minima to the even coordinates one axis at a time;
    // the min over a product of neighbour sets is the iterated per-axis min. The
    // pass along axis a fills cells that are even on a and still on voxel
    // coordinates for every later axis.
    f.bins_.assign(total, kUnset);
    auto voxel_coord = [&](int a, std::size_t i) { return f.collapsed_[a] ? 0 : 2 * i + 1; };
    for (std::size_t z = 0; z < extent[2]; ++z) {
        for (std::size_t y = 0; y < extent[1]; ++y) {
            for (std::size_t x = 0; x < extent[0]; ++x) {
                const std::size_t id = voxel_coord(0, x) + f.strides_[1] * voxel_coord(1, y) + f.strides_[2] * voxel_coord(2, z);
                f.bins_[id] = qvol.at(x, y, z);
            }
        }
    }
    for (int a = 0; a < 3; ++a) {
        if (f.collapsed_[a]) {
            continue;
        }
        const std::size_t len = f.cell_dims_[a];
        const std::size_t stride = f.strides_[a];
        for (CellId id = 0; id < total; ++id) {
            const std::size_t c = (id / stride) % len;
            if (c % 2 != 0) {
                continue;
            }
            bool ready = true;
            for (int b = a + 1; b < 3; ++b) {
                if (!f.collapsed_[b] && ((id / f.strides_[b]) % f.cell_dims_[b]) % 2 == 0) {
                    ready = false;
                }
            }
            if (!ready) {
                continue;
            }
            std::uint16_t v = kUnset;
            if (c > 0) v = std::min(v, f.bins_[id - stride]);
            if (c + 1 < len) v = std::min(v, f.bins_[id + stride]);
            f.bins_[id] = v;
        }
    }
    // Counting sort on (bin, dim); ids ascend within each bucket.
    const std::size_t buckets = static_cast<std::size_t>(f.levels_ + 1) * 4;
    std::vector<std::size_t> counts(buckets, 0);
    for (CellId id = 0; id < total; ++id) {
        ++counts[static_cast<std::size_t>(f.bins_[id]) * 4 + static_cast<std::size_t>(f.dim(id))];
    }
    f.cumulative_.assign(buckets, 0);
    std::vector<std::size_t> start(buckets, 0);
    std::size_t running = 0;
    std::array<std::size_t, 4> per_dim{};
    for (std::size_t k = 0; k < buckets; ++k) {
        start[k] = running;
        running += counts[k];
        per_dim[k % 4] += counts[k];
        f.cumulative_[k] = per_dim[k % 4];
    }
    f.order_.resize(total);
    for (CellId id = 0; id < total; ++id) {
        f.order_[start[static_cast<std::size_t>(f.bins_[id]) * 4 + static_cast<std::size_t>(f.dim(id))]++] = id;
    }
    return f;
}

std::array<std::size_t, 3> CubicalFiltration::coords(CellId id) const {
    return {id % cell_dims_[0], (id / strides_[1]) % cell_dims_[1], id / strides_[2]};
}

int CubicalFiltration::dim(CellId id) const {
    const auto c = coords(id);
    int d = 0;
    for (int a = 0; a < 3; ++a) {
        if (!collapsed_[a] && c[a] % 2 == 1) {
            ++d;
        }
    }
    return d;
}

int CubicalFiltration::boundary(CellId id, std::array<CellId, 6>& out) const {
    const auto c = coords(id);
    int n = 0;
    for (int a = 0; a < 3; ++a) {
        if (!collapsed_[a] && c[a] % 2 == 1) {
            out[n++] = static_cast<CellId>(id - strides_[a]);
            out[n++] = static_cast<CellId>(id + strides_[a]);
        }
    }
    return n;
}

std::vector<CellId> CubicalFiltration::boundary(CellId id) const {
    std::array<CellId, 6> faces{};
    const int n = boundary(id, faces);
    return {faces.begin(), faces.begin() + n};
}

std::array<std::size_t, 4> CubicalFiltration::cells_at_or_below(int bin) const {
    if (bin < 1) {
        return {0, 0, 0, 0};
    }
    const auto b = static_cast<std::size_t>(std::min(bin, levels_));
    return {cumulative_[b * 4], cumulative_[b * 4 + 1], cumulative_[b * 4 + 2], cumulative_[b * 4 + 3]};
}

}  // namespace voxtopo
