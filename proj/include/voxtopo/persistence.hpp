#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <vector>

#include "voxtopo/filtration.hpp"

namespace voxtopo {

/// Death bin of an essential class.
inline constexpr int kInfinity = std::numeric_limits<int>::max();

struct PersistencePair {
    int birth = 0;
    int death = kInfinity;

    bool essential() const { return death == kInfinity; }
    auto operator<=>(const PersistencePair&) const = default;
};

/// Multiset of (birth, death) bins in one homology dimension. Zero-persistence
/// pairs are never stored.
struct PersistenceDiagram {
    int dim = 0;
    std::vector<PersistencePair> pairs;

    /// Stable sort by (birth, death) with essential pairs after finite ones.
    void sort();
    std::size_t essential_count() const;
    bool operator==(const PersistenceDiagram&) const = default;
};

/// Diagrams for dimensions 0, 1, 2, each sorted.
struct Diagrams {
    std::array<PersistenceDiagram, 3> dims{PersistenceDiagram{0, {}}, PersistenceDiagram{1, {}}, PersistenceDiagram{2, {}}};

    PersistenceDiagram& operator[](int k) { return dims[static_cast<std::size_t>(k)]; }
    const PersistenceDiagram& operator[](int k) const { return dims[static_cast<std::size_t>(k)]; }
    bool operator==(const Diagrams&) const = default;
};

/// Persistence diagrams over Z/2 by column reduction of the boundary matrix in
/// filtration order. Dimensions are reduced from the top down; a column whose
/// cell was already a pivot of the dimension above is cleared without work.
/// Columns are sparse, pivots are found through a row-to-column table, and only
/// columns that actually changed during reduction are kept in memory.
Diagrams compute_diagrams(const CubicalFiltration& f);

inline constexpr std::size_t kDefaultOracleLimit = 20000;

/// Textbook standard reduction: one left-to-right sweep over every column of
/// every dimension, no clearing, every reduced column retained. Shares nothing
/// with compute_diagrams beyond the filtration's bins; order and boundaries are
/// recomputed from cell coordinates. Throws when the complex exceeds `cell_limit`.
Diagrams reduce_naive(const CubicalFiltration& f, std::size_t cell_limit = kDefaultOracleLimit);

/// Dimension-0 diagram by Kruskal-style union-find over vertices and edges in
/// filtration order. On a merge the younger root dies (elder rule); among roots
/// born in the same bin the one with the smaller cell id survives.
PersistenceDiagram dim0_unionfind(const CubicalFiltration& f);

/// Entry n-1 is the Euler characteristic c0 - c1 + c2 - c3 of the sublevel
/// complex at bin n, for n = 1..N.
std::vector<long long> euler_profile(const CubicalFiltration& f);

/// Betti number of `pd` at bin n: pairs with birth <= n < death.
int betti_at(const PersistenceDiagram& pd, int n);

}  // namespace voxtopo
