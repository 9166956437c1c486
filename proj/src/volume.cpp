#include "voxtopo/volume.hpp"

#include <algorithm>
#include <cmath>

namespace voxtopo {

std::string to_string(const Dims& d) {
    return std::to_string(d.nx) + "x" + std::to_string(d.ny) + "x" + std::to_string(d.nz);
}

GrayVolume::GrayVolume(Dims dims, std::vector<double> voxels) : dims_(dims), voxels_(std::move(voxels)) {
    if (dims_.nx == 0 || dims_.ny == 0 || dims_.nz == 0) {
        throw Error("volume dims must be positive, got " + to_string(dims_));
    }
    if (voxels_.size() != dims_.count()) {
        throw Error("voxel count " + std::to_string(voxels_.size()) + " does not match dims " + to_string(dims_));
    }
    min_ = voxels_.front();
    max_ = voxels_.front();
    for (double v : voxels_) {
        if (!std::isfinite(v)) {
            throw Error("volume contains a non-finite intensity");
        }
        min_ = std::min(min_, v);
        max_ = std::max(max_, v);
        if (integral_ && v != std::floor(v)) {
            integral_ = false;
        }
    }
}

QuantizedVolume::QuantizedVolume(Dims dims, int levels, std::vector<Bin> bins)
    : dims_(dims), levels_(levels), bins_(std::move(bins)) {
    if (dims_.nx == 0 || dims_.ny == 0 || dims_.nz == 0) {
        throw Error("volume dims must be positive, got " + to_string(dims_));
    }
    if (levels_ < 1 || levels_ > 65535) {
        throw Error("levels must lie in [1, 65535], got " + std::to_string(levels_));
    }
    if (bins_.size() != dims_.count()) {
        throw Error("bin count does not match dims " + to_string(dims_));
    }
    for (Bin b : bins_) {
        if (b < 1 || b > levels_) {
            throw Error("bin " + std::to_string(b) + " outside [1, " + std::to_string(levels_) + "]");
        }
    }
}

QuantizedVolume QuantizedVolume::reflected() const {
    std::vector<Bin> out(bins_.size());
    std::transform(bins_.begin(), bins_.end(), out.begin(),
                   [this](Bin b) { return static_cast<Bin>(levels_ + 1 - b); });
    return QuantizedVolume(dims_, levels_, std::move(out));
}

GrayVolume select_middle_slices(const GrayVolume& vol, std::size_t count, Axis axis) {
    if (count == 0) {
        throw Error("slice count must be at least 1");
    }
    const int a = static_cast<int>(axis);
    const Dims& in = vol.dims();
    const std::size_t extent = in.extent(a);
    if (count >= extent) {
        return vol;
    }
    const std::size_t start = (extent - count) / 2;

    Dims out = in;
    (a == 0 ? out.nx : a == 1 ? out.ny : out.nz) = count;
    std::vector<double> voxels;
    voxels.reserve(out.count());
    for (std::size_t z = 0; z < out.nz; ++z) {
        for (std::size_t y = 0; y < out.ny; ++y) {
            for (std::size_t x = 0; x < out.nx; ++x) {
                std::size_t sx = x, sy = y, sz = z;
                (a == 0 ? sx : a == 1 ? sy : sz) += start;
                voxels.push_back(vol.at(sx, sy, sz));
            }
        }
    }
    return GrayVolume(out, std::move(voxels));
}

QuantizedVolume quantize(const GrayVolume& vol, int levels, RangeMode range) {
    if (levels < 2 || levels > 65535) {
        throw Error("levels must lie in [2, 65535], got " + std::to_string(levels));
    }
    double lo = vol.min_intensity();
    double hi = vol.max_intensity();
    if (range.kind == RangeMode::Kind::fixed) {
        if (!(range.lo < range.hi)) {
            throw Error("degenerate fixed range: lo must be < hi");
        }
        lo = range.lo;
        hi = range.hi;
    }

    std::vector<QuantizedVolume::Bin> bins(vol.voxels().size(), 1);
    if (hi > lo) {
        const bool integer_grid = vol.integral() && lo == std::floor(lo) && hi == std::floor(hi);
        const double width = integer_grid ? hi - lo + 1.0 : hi - lo;
        const auto voxels = vol.voxels();
        for (std::size_t i = 0; i < voxels.size(); ++i) {
            const double v = std::clamp(voxels[i], lo, hi);
            const auto step = static_cast<long long>(std::floor((v - lo) * levels / width));
            bins[i] = static_cast<QuantizedVolume::Bin>(std::min<long long>(levels, 1 + step));
        }
    }
    return QuantizedVolume(vol.dims(), levels, std::move(bins));
}

}  // namespace voxtopo
