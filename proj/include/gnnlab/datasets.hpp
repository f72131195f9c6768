#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gnnlab/graph.hpp"
#include "gnnlab/model.hpp"

namespace gnnlab {

class BundleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class MissingFileError : public BundleError {
public:
    using BundleError::BundleError;
};
class RaggedDataError : public BundleError {
public:
    using BundleError::BundleError;
};
class IndexRangeError : public BundleError {
public:
    using BundleError::BundleError;
};
class MaskOverlapError : public BundleError {
public:
    using BundleError::BundleError;
};
class RecordParseError : public BundleError {
public:
    RecordParseError(const std::string& what, std::size_t line_number)
        : BundleError(what + " (line " + std::to_string(line_number) + ")"),
          line(line_number) {}
    std::size_t line;
};

struct NodeBundle {
    Graph graph;
    DenseMatrix features;
    std::vector<int> labels;  // -1 for unlabeled
    SplitMasks masks;
};

/// Directory layout: edges.tsv, features.csv, labels.csv, masks.csv.
NodeBundle load_node_bundle(const std::filesystem::path& dir);
void save_node_bundle(const NodeBundle& bundle, const std::filesystem::path& dir);

/// Zero the features of every node outside the train mask.
NodeBundle cold_start(const NodeBundle& bundle);

struct GraphRecord {
    Graph graph;
    DenseMatrix features;
    int label = 0;
};

struct GraphSetBundle {
    std::vector<GraphRecord> graphs;
    /// Disjoint union for batched training.
    struct Batch {
        Graph graph;
        DenseMatrix features;
        std::vector<int> labels;             // one per graph
        std::vector<std::size_t> graph_ids;  // one per node
    };
    Batch batched() const;
};

/// JSON-lines file, one record per line:
/// {"num_nodes": n, "edges": [[u,v],...], "features": [[...],...], "label": k}
GraphSetBundle load_graph_set(const std::filesystem::path& path);

/// CSV export of H^(layer) with header node,label,h0,...;
/// layer 0 exports the input features.
void export_embeddings(const ModelState& state, const ModelConfig& config,
                       const std::vector<int>& labels, std::size_t layer,
                       const std::filesystem::path& path);

}  // namespace gnnlab
