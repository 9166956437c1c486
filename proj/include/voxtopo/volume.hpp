#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "voxtopo/error.hpp"

namespace voxtopo {

/// Extent of a voxel grid. x varies fastest in memory, z slowest.
struct Dims {
    std::size_t nx = 1;
    std::size_t ny = 1;
    std::size_t nz = 1;

    std::size_t count() const { return nx * ny * nz; }
    std::size_t index(std::size_t x, std::size_t y, std::size_t z) const { return x + nx * (y + ny * z); }
    std::size_t extent(int axis) const { return axis == 0 ? nx : axis == 1 ? ny : nz; }

    bool operator==(const Dims&) const = default;
};

std::string to_string(const Dims& d);

enum class Axis { x = 0, y = 1, z = 2 };

/// Raw scalar volume. Intensities are finite reals; the range is computed from
/// the voxels on construction.
class GrayVolume {
public:
    GrayVolume(Dims dims, std::vector<double> voxels);

    const Dims& dims() const { return dims_; }
    std::span<const double> voxels() const { return voxels_; }
    double at(std::size_t x, std::size_t y, std::size_t z) const { return voxels_[dims_.index(x, y, z)]; }

    double min_intensity() const { return min_; }
    double max_intensity() const { return max_; }
    /// True when every voxel holds an integer value (any integer source dtype).
    bool integral() const { return integral_; }

private:
    Dims dims_;
    std::vector<double> voxels_;
    double min_ = 0.0;
    double max_ = 0.0;
    bool integral_ = true;
};

/// Volume whose voxels are threshold-bin indices in [1, levels].
class QuantizedVolume {
public:
    using Bin = std::uint16_t;

    QuantizedVolume(Dims dims, int levels, std::vector<Bin> bins);

    const Dims& dims() const { return dims_; }
    int levels() const { return levels_; }
    std::span<const Bin> bins() const { return bins_; }
    Bin at(std::size_t x, std::size_t y, std::size_t z) const { return bins_[dims_.index(x, y, z)]; }

    /// Bin reflection b -> levels + 1 - b.
    QuantizedVolume reflected() const;

    bool operator==(const QuantizedVolume&) const = default;

private:
    Dims dims_;
    int levels_;
    std::vector<Bin> bins_;
};

/// Keeps min(count, extent) slices centred on the axis midpoint. When the
/// number of discarded slices is odd, the extra one comes off the high side.
GrayVolume select_middle_slices(const GrayVolume& vol, std::size_t count, Axis axis = Axis::z);

struct RangeMode {
    enum class Kind { minmax, fixed };
    Kind kind = Kind::minmax;
    double lo = 0.0;
    double hi = 0.0;

    static RangeMode minmax() { return {}; }
    static RangeMode fixed(double lo, double hi) { return {Kind::fixed, lo, hi}; }
};

/// Maps intensities onto bins 1..levels:
///   bin(v) = 1 + floor((clamp(v, lo, hi) - lo) * levels / width)
/// where width = hi - lo + 1 for integer-valued data on an integer range (so an
/// 8-bit [0,255] volume uses 1 + floor(v * N / 256)), and width = hi - lo with the
/// top value clamped into bin N for real-valued data. A constant volume in minmax
/// mode maps to bin 1.
QuantizedVolume quantize(const GrayVolume& vol, int levels, RangeMode range = RangeMode::minmax());

}  // namespace voxtopo
