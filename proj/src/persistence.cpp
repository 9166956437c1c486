#include "voxtopo/persistence.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace voxtopo {

void PersistenceDiagram::sort() {
    std::stable_sort(pairs.begin(), pairs.end());
}

std::size_t PersistenceDiagram::essential_count() const {
    return static_cast<std::size_t>(
        std::count_if(pairs.begin(), pairs.end(), [](const PersistencePair& p) { return p.essential(); }));
}

int betti_at(const PersistenceDiagram& pd, int n) {
    int count = 0;
    for (const auto& p : pd.pairs) {
        if (p.birth <= n && n < p.death) {
            ++count;
        }
    }
    return count;
}

namespace {

using Column = std::vector<std::uint32_t>;
constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

void add_pair(Diagrams& out, int dim, int birth, int death) {
    if (dim > 2 || birth == death) {
        return;
    }
    out[dim].pairs.push_back({birth, death});
}

void sort_all(Diagrams& d) {
    for (auto& pd : d.dims) {
        pd.sort();
    }
}

// Symmetric difference of two columns sorted in descending order.
void add_descending(const Column& a, const Column& b, Column& out) {
    out.clear();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] > b[j]) {
            out.push_back(a[i++]);
        } else if (b[j] > a[i]) {
            out.push_back(b[j++]);
        } else {
            ++i;
            ++j;
        }
    }
    out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
    out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
}

}  // namespace

Diagrams compute_diagrams(const CubicalFiltration& f) {
    const std::size_t n = f.cell_count();
    const auto order = f.order();

    std::vector<std::uint32_t> position(n);
    for (std::size_t j = 0; j < n; ++j) {
        position[order[j]] = static_cast<std::uint32_t>(j);
    }
    std::vector<std::uint8_t> dim_at(n);
    for (std::size_t j = 0; j < n; ++j) {
        dim_at[j] = static_cast<std::uint8_t>(f.dim(order[j]));
    }

    // pivot_column[row] = column whose reduced lowest entry is `row`.
    std::vector<std::uint32_t> pivot_column(n, kNone);
    std::vector<bool> paired(n, false);
    std::unordered_map<std::uint32_t, Column> modified;

    auto original_column = [&](std::uint32_t j, Column& col) {
        std::array<CellId, 6> faces{};
        const int count = f.boundary(order[j], faces);
        col.resize(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k) {
            col[static_cast<std::size_t>(k)] = position[faces[static_cast<std::size_t>(k)]];
        }
        std::sort(col.begin(), col.end(), std::greater<>());
    };

    Diagrams out;
    Column working;
    Column other;
    Column scratch;
    for (int d = f.max_dim(); d >= 1; --d) {
        for (std::uint32_t j = 0; j < n; ++j) {
            if (dim_at[j] != d || paired[j]) {
                continue;
            }
            original_column(j, working);
            bool changed = false;
            while (!working.empty()) {
                const std::uint32_t k = pivot_column[working.front()];
                if (k == kNone) {
                    break;
                }
                const auto it = modified.find(k);
                if (it != modified.end()) {
                    add_descending(working, it->second, scratch);
                } else {
                    original_column(k, other);
                    add_descending(working, other, scratch);
                }
                working.swap(scratch);
                changed = true;
            }
            if (working.empty()) {
                continue;
            }
            const std::uint32_t low = working.front();
            pivot_column[low] = j;
            paired[low] = true;
            paired[j] = true;
            if (changed) {
                modified.emplace(j, working);
            }
            add_pair(out, d - 1, f.bin(order[low]), f.bin(order[j]));
        }
    }
    for (std::uint32_t j = 0; j < n; ++j) {
        if (!paired[j]) {
            add_pair(out, dim_at[j], f.bin(order[j]), kInfinity);
        }
    }
    sort_all(out);
    return out;
}

Diagrams reduce_naive(const CubicalFiltration& f, std::size_t cell_limit) {
    const auto cell_dims = f.cell_dims();
    const std::size_t n = cell_dims[0] * cell_dims[1] * cell_dims[2];
    if (n > cell_limit) {
        throw Error("naive reduction limited to " + std::to_string(cell_limit) + " cells, complex has " +
                    std::to_string(n));
    }

    // Dimension and faces straight from grid coordinates.
    struct Entry {
        int bin;
        int dim;
        std::size_t id;
    };
    std::vector<Entry> cells(n);
    std::vector<std::vector<std::size_t>> faces(n);
    for (std::size_t z = 0; z < cell_dims[2]; ++z) {
        for (std::size_t y = 0; y < cell_dims[1]; ++y) {
            for (std::size_t x = 0; x < cell_dims[0]; ++x) {
                const std::size_t id = x + cell_dims[0] * (y + cell_dims[1] * z);
                const std::size_t c[3] = {x, y, z};
                const std::size_t stride[3] = {1, cell_dims[0], cell_dims[0] * cell_dims[1]};
                int dim = 0;
                for (int a = 0; a < 3; ++a) {
                    if (cell_dims[a] > 1 && c[a] % 2 == 1) {
                        ++dim;
                        faces[id].push_back(id - stride[a]);
                        faces[id].push_back(id + stride[a]);
                    }
                }
                cells[id] = {f.bin(static_cast<CellId>(id)), dim, id};
            }
        }
    }
    std::vector<std::size_t> sorted(n);
    std::iota(sorted.begin(), sorted.end(), 0);
    std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        const Entry& ea = cells[a];
        const Entry& eb = cells[b];
        if (ea.bin != eb.bin) return ea.bin < eb.bin;
        if (ea.dim != eb.dim) return ea.dim < eb.dim;
        return ea.id < eb.id;
    });
    std::vector<std::size_t> index_of(n);
    for (std::size_t j = 0; j < n; ++j) {
        index_of[sorted[j]] = j;
    }

    // Columns hold row indices in ascending order; low = back().
    std::vector<std::vector<std::size_t>> columns(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t face : faces[sorted[j]]) {
            if (index_of[face] >= j) {
                throw Error("filtration order places a face after its coface");
            }
            columns[j].push_back(index_of[face]);
        }
        std::sort(columns[j].begin(), columns[j].end());
    }

    std::vector<std::size_t> low_owner(n, n);
    std::vector<std::size_t> merged;
    for (std::size_t j = 0; j < n; ++j) {
        auto& col = columns[j];
        while (!col.empty() && low_owner[col.back()] != n) {
            const auto& src = columns[low_owner[col.back()]];
            merged.clear();
            std::set_symmetric_difference(col.begin(), col.end(), src.begin(), src.end(), std::back_inserter(merged));
            col.swap(merged);
        }
        if (!col.empty()) {
            low_owner[col.back()] = j;
        }
    }

    Diagrams out;
    std::vector<bool> is_low(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        if (!columns[j].empty()) {
            const std::size_t i = columns[j].back();
            is_low[i] = true;
            add_pair(out, cells[sorted[i]].dim, cells[sorted[i]].bin, cells[sorted[j]].bin);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (columns[j].empty() && !is_low[j]) {
            add_pair(out, cells[sorted[j]].dim, cells[sorted[j]].bin, kInfinity);
        }
    }
    sort_all(out);
    return out;
}

PersistenceDiagram dim0_unionfind(const CubicalFiltration& f) {
    const auto order = f.order();
    const std::size_t n = order.size();
    std::vector<std::uint32_t> position(n);
    for (std::size_t j = 0; j < n; ++j) {
        position[order[j]] = static_cast<std::uint32_t>(j);
    }
    // Parent links over filtration positions; a root is always the oldest
    // vertex of its component, i.e. the smallest position.
    std::vector<std::uint32_t> parent(n, kNone);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    PersistenceDiagram pd{0, {}};
    std::array<CellId, 6> faces{};
    for (std::uint32_t j = 0; j < n; ++j) {
        const CellId id = order[j];
        const int d = f.dim(id);
        if (d == 0) {
            parent[j] = j;
        } else if (d == 1) {
            f.boundary(id, faces);
            std::uint32_t a = find(position[faces[0]]);
            std::uint32_t b = find(position[faces[1]]);
            if (a == b) {
                continue;
            }
            if (a > b) {
                std::swap(a, b);
            }
            const int birth = f.bin(order[b]);
            const int death = f.bin(id);
            if (birth != death) {
                pd.pairs.push_back({birth, death});
            }
            parent[b] = a;
        }
    }
    for (std::uint32_t j = 0; j < n; ++j) {
        if (parent[j] == j) {
            pd.pairs.push_back({f.bin(order[j]), kInfinity});
        }
    }
    pd.sort();
    return pd;
}

std::vector<long long> euler_profile(const CubicalFiltration& f) {
    std::vector<long long> chi(static_cast<std::size_t>(f.levels()));
    for (int bin = 1; bin <= f.levels(); ++bin) {
        const auto c = f.cells_at_or_below(bin);
        chi[static_cast<std::size_t>(bin - 1)] = static_cast<long long>(c[0]) - static_cast<long long>(c[1]) +
                                                 static_cast<long long>(c[2]) - static_cast<long long>(c[3]);
    }
    return chi;
}

}  // namespace voxtopo
