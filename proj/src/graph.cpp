#include "gnnlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace gnnlab {

std::vector<double> Graph::augmented_degrees() const {
    std::vector<double> d(n, 1.0);  // augmentation self-loop
    for (const auto& e : edges) {
        if (e.u == e.v) {
            d[e.u] += e.w;
        } else {
            d[e.u] += e.w;
            d[e.v] += e.w;
        }
    }
    return d;
}

std::vector<std::vector<std::size_t>> Graph::neighbor_lists() const {
    std::vector<std::vector<std::size_t>> nbr(n);
    for (const auto& e : edges) {
        if (e.u == e.v) continue;
        nbr[e.u].push_back(e.v);
        nbr[e.v].push_back(e.u);
    }
    for (auto& v : nbr) std::sort(v.begin(), v.end());
    return nbr;
}

std::vector<std::size_t> Graph::components() const {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : edges) {
        auto a = find(e.u), b = find(e.v);
        if (a != b) parent[a] = b;
    }
    std::vector<std::size_t> comp(n);
    std::map<std::size_t, std::size_t> relabel;
    for (std::size_t i = 0; i < n; ++i) {
        auto r = find(i);
        auto [it, inserted] = relabel.emplace(r, relabel.size());
        comp[i] = it->second;
    }
    return comp;
}

Graph build_graph(std::size_t n,
                  const std::vector<std::tuple<std::size_t, std::size_t, double>>& edge_list) {
    std::map<std::pair<std::size_t, std::size_t>, double> merged;
    for (const auto& [u, v, w] : edge_list) {
        if (u >= n || v >= n)
            throw std::out_of_range("build_graph: node index out of range");
        if (w <= 0) throw std::invalid_argument("build_graph: edge weight must be > 0");
        merged[{std::min(u, v), std::max(u, v)}] += w;
    }
    Graph g;
    g.n = n;
    g.edges.reserve(merged.size());
    for (const auto& [uv, w] : merged) g.edges.push_back({uv.first, uv.second, w});
    return g;
}

NormalizedAdjacency normalize(const Graph& g, AdjacencyVariant variant) {
    if (g.n == 0) throw std::invalid_argument("normalize: empty graph");
    const auto deg = g.augmented_degrees();
    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    trip.reserve(2 * g.edges.size() + g.n);
    auto scale = [&](std::size_t i, std::size_t j, double w) {
        if (variant == AdjacencyVariant::Symmetric)
            return w / std::sqrt(deg[i] * deg[j]);
        return w / deg[i];
    };
    for (std::size_t i = 0; i < g.n; ++i) trip.emplace_back(i, i, scale(i, i, 1.0));
    for (const auto& e : g.edges) {
        if (e.u == e.v) {
            trip.emplace_back(e.u, e.u, scale(e.u, e.u, e.w));
        } else {
            trip.emplace_back(e.u, e.v, scale(e.u, e.v, e.w));
            trip.emplace_back(e.v, e.u, scale(e.v, e.u, e.w));
        }
    }
    return {variant, SparseMatrix::from_triplets(g.n, g.n, std::move(trip))};
}

double spectral_gap(const NormalizedAdjacency& na) {
    if (na.variant != AdjacencyVariant::Symmetric)
        throw std::invalid_argument("spectral_gap: symmetric variant required");
    const std::size_t n = na.matrix.rows;
    if (n > kDenseEigCap)
        throw std::domain_error("spectral_gap: unavailable above dense-eig cap");
    DenseMatrix lap = na.matrix.to_dense();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) lap(i, j) = (i == j ? 1.0 : 0.0) - lap(i, j);
    const auto eig = jacobi_eigh(lap, 1e-12);
    constexpr double kZeroThreshold = 1e-8;
    for (double lambda : eig.eigenvalues)
        if (lambda >= kZeroThreshold) return lambda;
    throw std::domain_error("spectral_gap: all eigenvalues below zero threshold");
}

SbmSample sbm_generate(RngStream& rng, std::size_t communities,
                       std::size_t nodes_per_community, double p_in, double p_out,
                       std::size_t feature_dim, double feature_noise) {
    if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0))
        throw std::invalid_argument("sbm_generate: need 0 <= p_out < p_in <= 1");
    if (communities == 0 || nodes_per_community == 0 || feature_dim == 0)
        throw std::invalid_argument("sbm_generate: empty shape");
    const std::size_t n = communities * nodes_per_community;

    SbmSample out;
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.labels[i] = static_cast<int>(i / nodes_per_community);

    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            const double p = out.labels[u] == out.labels[v] ? p_in : p_out;
            if (rng.next_uniform() < p) edges.emplace_back(u, v, 1.0);
        }
    }
    out.graph = build_graph(n, edges);

    out.features = DenseMatrix(n, feature_dim);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t hot = static_cast<std::size_t>(out.labels[i]) % feature_dim;
        for (std::size_t j = 0; j < feature_dim; ++j) {
            out.features(i, j) = (j == hot ? 1.0 : 0.0) +
                                 feature_noise * rng.next_gaussian();
        }
    }
    return out;
}

}  // namespace gnnlab
