#pragma once

// Shared volumes for unit tests and the acceptance runner.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "voxtopo/phantoms.hpp"
#include "voxtopo/volume.hpp"

namespace voxtopo::testing {

struct NamedVolume {
    std::string name;
    QuantizedVolume volume;
};

inline QuantizedVolume random_volume(std::mt19937_64& rng, std::size_t max_extent, int levels) {
    std::uniform_int_distribution<std::size_t> extent(1, max_extent);
    const Dims d{extent(rng), extent(rng), extent(rng)};
    std::uniform_int_distribution<int> bin(1, levels);
    std::vector<QuantizedVolume::Bin> bins(d.count());
    for (auto& b : bins) {
        b = static_cast<QuantizedVolume::Bin>(bin(rng));
    }
    return QuantizedVolume(d, levels, std::move(bins));
}

/// Seeded random volumes up to max_extent per axis. Level counts alternate
/// between few levels (many ties) and many levels.
inline std::vector<NamedVolume> random_corpus(std::size_t count, std::size_t max_extent, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<NamedVolume> out;
    for (std::size_t i = 0; i < count; ++i) {
        const int levels = i % 3 == 0 ? 3 : i % 3 == 1 ? 10 : 100;
        out.push_back({"random_" + std::to_string(i), random_volume(rng, max_extent, levels)});
    }
    return out;
}

inline PhantomSpec ball_fixture() {
    PhantomSpec s;
    s.shape = Shape::solid_ball;
    s.dims = {16, 16, 16};
    s.radius = 4;
    return s;
}

inline PhantomSpec shell_fixture() {
    PhantomSpec s;
    s.shape = Shape::hollow_shell;
    s.dims = {16, 16, 16};
    s.radius = 5;
    s.inner_radius = 3;
    return s;
}

inline PhantomSpec torus_fixture() {
    PhantomSpec s;
    s.shape = Shape::solid_torus;
    s.dims = {20, 20, 12};
    s.radius = 5;
    s.tube_radius = 2;
    return s;
}

inline PhantomSpec small_torus_fixture() {
    PhantomSpec s = torus_fixture();
    s.dims = {14, 14, 10};
    s.radius = 4;
    return s;
}

inline PhantomSpec blobs_fixture() {
    PhantomSpec s;
    s.shape = Shape::two_blobs;
    s.dims = {16, 10, 10};
    s.radius = 2;
    s.center = {4.0, 4.5, 4.5};
    s.center2 = {11.0, 4.5, 4.5};
    return s;
}

inline std::vector<PhantomSpec> phantom_fixtures() {
    return {ball_fixture(), shell_fixture(), torus_fixture(), small_torus_fixture(), blobs_fixture()};
}

/// Small hand-built volumes with known diagrams.
inline std::vector<NamedVolume> crafted_corpus() {
    std::vector<NamedVolume> out;
    out.push_back({"constant_4x4x4", QuantizedVolume({4, 4, 4}, 10, std::vector<QuantizedVolume::Bin>(64, 6))});
    out.push_back({"line_2_9_3", QuantizedVolume({3, 1, 1}, 10, {2, 9, 3})});
    std::vector<QuantizedVolume::Bin> shell(125, 9);
    for (std::size_t z = 1; z < 4; ++z) {
        for (std::size_t y = 1; y < 4; ++y) {
            for (std::size_t x = 1; x < 4; ++x) {
                shell[x + 5 * (y + 5 * z)] = 2;
            }
        }
    }
    shell[2 + 5 * (2 + 5 * 2)] = 9;
    out.push_back({"shell_5x5x5", QuantizedVolume({5, 5, 5}, 10, shell)});
    out.push_back({"single_voxel", QuantizedVolume({1, 1, 1}, 10, {7})});
    // Diagonal-touching voxels: joined under the closed-voxel construction.
    out.push_back({"diagonal_2x2x1", QuantizedVolume({2, 2, 1}, 5, {1, 5, 5, 1})});
    return out;
}

/// Every volume the oracle and Euler checks run over.
inline std::vector<NamedVolume> full_corpus() {
    auto out = random_corpus(100, 6, 20240611);
    for (auto& v : crafted_corpus()) {
        out.push_back(std::move(v));
    }
    for (const auto& spec : phantom_fixtures()) {
        out.push_back({to_string(spec.shape) + "_" + to_string(spec.dims), generate(spec)});
    }
    return out;
}

/// Cell limit large enough for the phantom fixtures.
inline constexpr std::size_t kFixtureOracleLimit = 100000;

}  // namespace voxtopo::testing
