#include "voxtopo/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace voxtopo {

namespace {

void check_coordinates(const PersistenceDiagram& pd, int levels) {
    for (const auto& p : pd.pairs) {
        if (p.birth < 1 || p.birth > levels || (!p.essential() && (p.death < 1 || p.death > levels))) {
            throw Error("diagram pair outside bins [1, " + std::to_string(levels) + "]");
        }
    }
}

}  // namespace

std::vector<int> betti_curve(const PersistenceDiagram& pd, int levels) {
    check_coordinates(pd, levels);
    // Difference array: +1 at birth, -1 at death.
    std::vector<int> delta(static_cast<std::size_t>(levels) + 2, 0);
    for (const auto& p : pd.pairs) {
        if (p.birth >= p.death) {
            continue;
        }
        ++delta[static_cast<std::size_t>(p.birth)];
        const int end = p.essential() ? levels + 1 : p.death;
        --delta[static_cast<std::size_t>(end)];
    }
    std::vector<int> curve(static_cast<std::size_t>(levels));
    int alive = 0;
    for (int n = 1; n <= levels; ++n) {
        alive += delta[static_cast<std::size_t>(n)];
        curve[static_cast<std::size_t>(n - 1)] = alive;
    }
    return curve;
}

std::vector<double> silhouette(const PersistenceDiagram& pd, int levels, const SilhouetteOptions& options) {
    check_coordinates(pd, levels);
    if (!std::isfinite(options.power) || options.power < 0.0) {
        throw Error("silhouette power must be finite and >= 0");
    }
    std::vector<double> rho(static_cast<std::size_t>(levels), 0.0);
    double total_weight = 0.0;
    for (const auto& p : pd.pairs) {
        if (p.essential() && !options.include_essential) {
            continue;
        }
        const double b = p.birth;
        const double d = p.essential() ? levels + 1.0 : p.death;
        const double w = std::pow(d - b, options.power);
        total_weight += w;
        for (int n = 1; n <= levels; ++n) {
            const double tent = std::max(0.0, std::min(n - b, d - n));
            rho[static_cast<std::size_t>(n - 1)] += w * tent;
        }
    }
    if (total_weight > 0.0) {
        for (double& v : rho) {
            v /= total_weight;
        }
    }
    return rho;
}

std::vector<std::string> feature_names(int levels, const Vectorization& kind, const std::vector<int>& subset) {
    const int width = std::max(3, static_cast<int>(std::to_string(levels).size()));
    const char prefix = kind.kind == Vectorization::Kind::betti ? 'b' : 's';
    std::vector<std::string> names;
    names.reserve(subset.size() * static_cast<std::size_t>(levels));
    for (int k : subset) {
        for (int n = 1; n <= levels; ++n) {
            std::string index = std::to_string(n);
            index.insert(0, static_cast<std::size_t>(width) - index.size(), '0');
            names.push_back(std::string(1, prefix) + std::to_string(k) + "_" + index);
        }
    }
    return names;
}

FeatureVector assemble_features(const Diagrams& diagrams, int levels, const Vectorization& kind,
                                const std::vector<int>& subset) {
    if (subset.empty()) {
        throw Error("feature subset must name at least one dimension");
    }
    std::vector<int> dims = subset;
    std::sort(dims.begin(), dims.end());
    if (std::adjacent_find(dims.begin(), dims.end()) != dims.end() || dims.front() < 0 || dims.back() > 2) {
        throw Error("feature subset must be distinct dimensions from {0, 1, 2}");
    }

    FeatureVector fv;
    fv.names = feature_names(levels, kind, dims);
    fv.values.reserve(fv.names.size());
    for (int k : dims) {
        if (kind.kind == Vectorization::Kind::betti) {
            for (int v : betti_curve(diagrams[k], levels)) {
                fv.values.push_back(v);
            }
        } else {
            const auto s = silhouette(diagrams[k], levels, kind.silhouette);
            fv.values.insert(fv.values.end(), s.begin(), s.end());
        }
    }
    return fv;
}

}  // namespace voxtopo
