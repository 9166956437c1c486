#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "voxtopo/volume.hpp"

namespace voxtopo {

enum class Shape { solid_ball, hollow_shell, solid_torus, two_blobs, random_noise };

std::string to_string(Shape shape);
Shape parse_shape(const std::string& name);

/// Synthetic volume with known topology. Coordinates are voxel-centre units;
/// a centre component below zero means "middle of the grid".
///
///   solid_ball    |p - c| <= radius
///   hollow_shell  inner_radius <= |p - c| <= radius
///   solid_torus   (sqrt(dx^2 + dy^2) - radius)^2 + dz^2 <= tube_radius^2 (axis along z)
///   two_blobs     balls of `radius` around `center` and `center2`
///   random_noise  every voxel uniform in [foreground_bin, background_bin]
struct PhantomSpec {
    Shape shape = Shape::solid_ball;
    Dims dims{16, 16, 16};
    int levels = 100;
    std::array<double, 3> center{-1.0, -1.0, -1.0};
    std::array<double, 3> center2{-1.0, -1.0, -1.0};
    double radius = 4.0;
    double inner_radius = 0.0;
    double tube_radius = 0.0;
    int foreground_bin = 30;
    int background_bin = 70;
    /// Each voxel gets an independent uniform offset in [-jitter, jitter] bins,
    /// clamped to [1, levels].
    int jitter = 0;
    std::uint64_t seed = 0;
};

/// Checks bins, radii >= 2 and that the shape keeps a one-voxel margin inside
/// the grid; two_blobs additionally need a gap of at least 3 voxels. Throws Error.
void validate(const PhantomSpec& spec);

/// Deterministic in (spec, seed): the same spec always yields identical bins.
QuantizedVolume generate(const PhantomSpec& spec);

/// Seeded perturbation for building datasets: shifts centres by up to one
/// voxel and scales radii by up to +/-10%, keeping the result valid (falls back
/// to the unperturbed geometry otherwise). `seed` also becomes the jitter seed.
PhantomSpec perturbed(const PhantomSpec& base, std::uint64_t seed);

/// Ground-truth Betti numbers (b0, b1, b2) on [foreground_bin, background_bin).
std::array<int, 3> expected_betti(Shape shape);

/// SplitMix64 step, used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace voxtopo
