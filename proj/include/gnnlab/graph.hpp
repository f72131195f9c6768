#pragma once

#include <cstddef>
#include <tuple>
#include <vector>

#include "gnnlab/linalg.hpp"

namespace gnnlab {

/// Undirected weighted graph. Edges are stored once with u <= v; duplicate
/// (u,v)/(v,u) inputs are merged by weight summation.
struct Edge {
    std::size_t u;
    std::size_t v;
    double w;
    bool operator==(const Edge&) const = default;
};

struct Graph {
    std::size_t n = 0;
    std::vector<Edge> edges;  // canonical: u <= v, sorted, unique

    /// d_i with the augmentation self-loop (weight 1) included.
    std::vector<double> augmented_degrees() const;
    /// Neighbor lists excluding self-loops.
    std::vector<std::vector<std::size_t>> neighbor_lists() const;
    /// Connected components (self-loops ignored); returns component id per node.
    std::vector<std::size_t> components() const;
};

enum class AdjacencyVariant { Symmetric, Row };

struct NormalizedAdjacency {
    AdjacencyVariant variant;
    SparseMatrix matrix;
};

Graph build_graph(std::size_t n,
                  const std::vector<std::tuple<std::size_t, std::size_t, double>>& edge_list);

/// D^{-1/2}(A+I)D^{-1/2} (symmetric) or D^{-1}(A+I) (row).
NormalizedAdjacency normalize(const Graph& g, AdjacencyVariant variant);

/// Smallest nonzero eigenvalue of I - A_hat (symmetric variant only).
double spectral_gap(const NormalizedAdjacency& na);

struct SbmSample {
    Graph graph;
    DenseMatrix features;
    std::vector<int> labels;
};

/// Stochastic block model with one-hot community centroids plus Gaussian noise.
SbmSample sbm_generate(RngStream& rng, std::size_t communities,
                       std::size_t nodes_per_community, double p_in, double p_out,
                       std::size_t feature_dim, double feature_noise);

}  // namespace gnnlab
