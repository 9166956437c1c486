#pragma once

#include <string>
#include <vector>

#include "voxtopo/persistence.hpp"

namespace voxtopo {

/// Number of pairs alive at each bin n = 1..N, counting b <= n < d. Essential
/// pairs stay alive through N.
std::vector<int> betti_curve(const PersistenceDiagram& pd, int levels);

struct SilhouetteOptions {
    double power = 1.0;
    /// Essential pairs take death N + 1; when false they are dropped.
    bool include_essential = true;
};

/// Persistence-weighted average of tent functions sampled at n = 1..N:
///   rho(n) = sum_j w_j * max(0, min(n - b_j, d_j - n)) / sum_j w_j,
///   w_j = (d_j - b_j)^p.
/// An empty diagram gives the zero vector.
std::vector<double> silhouette(const PersistenceDiagram& pd, int levels, const SilhouetteOptions& options = {});

struct Vectorization {
    enum class Kind { betti, silhouette };
    Kind kind = Kind::betti;
    SilhouetteOptions silhouette;

    static Vectorization betti() { return {}; }
    static Vectorization silhouette_with_power(double p) { return {Kind::silhouette, {p, true}}; }
};

/// Feature vector with names. Blocks are concatenated in ascending dimension
/// order, each N long; names are b{k}_{nnn} or s{k}_{nnn} with n zero-padded to
/// at least three digits.
struct FeatureVector {
    std::vector<std::string> names;
    std::vector<double> values;
};

std::vector<std::string> feature_names(int levels, const Vectorization& kind, const std::vector<int>& subset);

FeatureVector assemble_features(const Diagrams& diagrams, int levels, const Vectorization& kind,
                                const std::vector<int>& subset = {0, 1, 2});

}  // namespace voxtopo
