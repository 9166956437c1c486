#include "voxtopo/phantoms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace voxtopo {

std::string to_string(Shape shape) {
    switch (shape) {
        case Shape::solid_ball: return "solid_ball";
        case Shape::hollow_shell: return "hollow_shell";
        case Shape::solid_torus: return "solid_torus";
        case Shape::two_blobs: return "two_blobs";
        case Shape::random_noise: return "random_noise";
    }
    return "unknown";
}

Shape parse_shape(const std::string& name) {
    for (Shape s : {Shape::solid_ball, Shape::hollow_shell, Shape::solid_torus, Shape::two_blobs, Shape::random_noise}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw Error("unknown phantom shape '" + name + "'");
}

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::array<double, 3> resolve_center(const std::array<double, 3>& c, const Dims& dims) {
    std::array<double, 3> out{};
    for (int a = 0; a < 3; ++a) {
        out[a] = c[a] < 0.0 ? (static_cast<double>(dims.extent(a)) - 1.0) / 2.0 : c[a];
    }
    return out;
}

// Half-extents of the shape's bounding box around its centre.
std::array<double, 3> half_extent(const PhantomSpec& s) {
    switch (s.shape) {
        case Shape::solid_torus: {
            const double planar = s.radius + s.tube_radius;
            return {planar, planar, s.tube_radius};
        }
        default: return {s.radius, s.radius, s.radius};
    }
}

void check_box(const std::array<double, 3>& c, const std::array<double, 3>& half, const Dims& dims, const char* what) {
    for (int a = 0; a < 3; ++a) {
        const double n = static_cast<double>(dims.extent(a));
        if (c[a] - half[a] <= 0.0 || c[a] + half[a] >= n - 1.0) {
            throw Error(std::string(what) + " does not fit inside " + to_string(dims) + " with a one-voxel margin");
        }
    }
}

bool inside(const PhantomSpec& s, const std::array<double, 3>& c1, const std::array<double, 3>& c2, double x, double y,
            double z) {
    const double dx = x - c1[0];
    const double dy = y - c1[1];
    const double dz = z - c1[2];
    const double r2 = dx * dx + dy * dy + dz * dz;
    switch (s.shape) {
        case Shape::solid_ball: return r2 <= s.radius * s.radius;
        case Shape::hollow_shell: return r2 <= s.radius * s.radius && r2 >= s.inner_radius * s.inner_radius;
        case Shape::solid_torus: {
            const double ring = std::sqrt(dx * dx + dy * dy) - s.radius;
            return ring * ring + dz * dz <= s.tube_radius * s.tube_radius;
        }
        case Shape::two_blobs: {
            const double ex = x - c2[0];
            const double ey = y - c2[1];
            const double ez = z - c2[2];
            return r2 <= s.radius * s.radius || ex * ex + ey * ey + ez * ez <= s.radius * s.radius;
        }
        case Shape::random_noise: return false;
    }
    return false;
}

}  // namespace

void validate(const PhantomSpec& s) {
    if (s.levels < 2 || s.levels > 65535) {
        throw Error("phantom levels must lie in [2, 65535]");
    }
    if (s.dims.nx == 0 || s.dims.ny == 0 || s.dims.nz == 0) {
        throw Error("phantom dims must be positive");
    }
    if (!(1 <= s.foreground_bin && s.foreground_bin < s.background_bin && s.background_bin <= s.levels)) {
        throw Error("phantom bins need 1 <= foreground_bin < background_bin <= levels");
    }
    if (s.jitter < 0) {
        throw Error("phantom jitter must be >= 0");
    }
    if (s.shape == Shape::random_noise) {
        return;
    }
    if (s.radius < 2.0) {
        throw Error("phantom radius must be at least 2 voxels");
    }
    if (s.shape == Shape::hollow_shell && !(s.inner_radius >= 2.0 && s.inner_radius < s.radius)) {
        throw Error("hollow_shell needs 2 <= inner_radius < radius");
    }
    if (s.shape == Shape::solid_torus && !(s.tube_radius >= 2.0 && s.tube_radius < s.radius)) {
        throw Error("solid_torus needs 2 <= tube_radius < radius");
    }
    const auto c1 = resolve_center(s.center, s.dims);
    check_box(c1, half_extent(s), s.dims, to_string(s.shape).c_str());
    if (s.shape == Shape::two_blobs) {
        const auto c2 = resolve_center(s.center2, s.dims);
        check_box(c2, half_extent(s), s.dims, "second blob");
        const double dist = std::sqrt((c1[0] - c2[0]) * (c1[0] - c2[0]) + (c1[1] - c2[1]) * (c1[1] - c2[1]) +
                                      (c1[2] - c2[2]) * (c1[2] - c2[2]));
        if (dist - 2.0 * s.radius < 3.0) {
            throw Error("two_blobs must be separated by at least 3 voxels");
        }
    }
}

QuantizedVolume generate(const PhantomSpec& s) {
    validate(s);
    const auto c1 = resolve_center(s.center, s.dims);
    const auto c2 = resolve_center(s.center2, s.dims);
    std::mt19937_64 rng(mix_seed(s.seed));
    const auto span = static_cast<std::uint64_t>(2 * s.jitter + 1);
    const auto noise_span = static_cast<std::uint64_t>(s.background_bin - s.foreground_bin + 1);

    std::vector<QuantizedVolume::Bin> bins(s.dims.count());
    for (std::size_t z = 0; z < s.dims.nz; ++z) {
        for (std::size_t y = 0; y < s.dims.ny; ++y) {
            for (std::size_t x = 0; x < s.dims.nx; ++x) {
                int bin = 0;
                if (s.shape == Shape::random_noise) {
                    bin = s.foreground_bin + static_cast<int>(rng() % noise_span);
                } else {
                    const bool fg = inside(s, c1, c2, static_cast<double>(x), static_cast<double>(y), static_cast<double>(z));
                    bin = fg ? s.foreground_bin : s.background_bin;
                    if (s.jitter > 0) {
                        bin += static_cast<int>(rng() % span) - s.jitter;
                    }
                }
                bins[s.dims.index(x, y, z)] = static_cast<QuantizedVolume::Bin>(std::clamp(bin, 1, s.levels));
            }
        }
    }
    return QuantizedVolume(s.dims, s.levels, std::move(bins));
}

PhantomSpec perturbed(const PhantomSpec& base, std::uint64_t seed) {
    PhantomSpec s = base;
    s.seed = seed;
    if (base.shape == Shape::random_noise) {
        return s;
    }
    std::mt19937_64 rng(mix_seed(seed ^ 0x5eedULL));
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };  // [0, 1)
    const auto c1 = resolve_center(base.center, base.dims);
    const auto c2 = resolve_center(base.center2, base.dims);
    for (int a = 0; a < 3; ++a) {
        s.center[a] = c1[a] + (2.0 * unit() - 1.0);
        s.center2[a] = c2[a] + (2.0 * unit() - 1.0);
    }
    const double scale = 0.9 + 0.2 * unit();
    s.radius = base.radius * scale;
    s.inner_radius = base.inner_radius * scale;
    s.tube_radius = base.tube_radius * scale;
    try {
        validate(s);
        return s;
    } catch (const Error&) {
        PhantomSpec fallback = base;
        fallback.seed = seed;
        return fallback;
    }
}

std::array<int, 3> expected_betti(Shape shape) {
    switch (shape) {
        case Shape::solid_ball: return {1, 0, 0};
        case Shape::hollow_shell: return {1, 0, 1};
        case Shape::solid_torus: return {1, 1, 0};
        case Shape::two_blobs: return {2, 0, 0};
        case Shape::random_noise: break;
    }
    throw Error("random_noise has no ground-truth Betti numbers");
}

}  // namespace voxtopo
