#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gnnlab/graph.hpp"
#include "gnnlab/init.hpp"
#include "gnnlab/linalg.hpp"

namespace gnnlab {

/// One layer of H' = sigma((alpha*A_hat*H + beta*H0 + gamma*H_prev)(delta*W + eps*I) + b).
struct LayerSpec {
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 1.0;
    double epsilon = 0.0;
    std::size_t width_in = 0;
    std::size_t width_out = 0;
    bool has_bias = true;

    static LayerSpec gcn(std::size_t width_in, std::size_t width_out);
    /// depth_index is 1-based; lambda_h scales the identity-decay schedule.
    static LayerSpec gcnii(std::size_t width, std::size_t depth_index, double lambda_h);
};

enum class Task { NodeClassification, GraphClassification };
enum class Metric { Accuracy, Auroc };

struct ModelConfig {
    std::vector<LayerSpec> layers;
    Task task = Task::NodeClassification;
    InitScheme init;
    double l2_penalty = 5e-4;
    double learning_rate = 1e-3;
    std::size_t epochs = 200;

    std::size_t depth() const { return layers.size(); }
    void validate(std::size_t feature_dim) const;
};

/// Uniform-width GCN stack: feature_dim -> hidden x (depth-1) -> classes.
ModelConfig make_gcn_config(std::size_t feature_dim, std::size_t hidden,
                            std::size_t classes, std::size_t depth,
                            InitScheme init, Task task = Task::NodeClassification);

struct ModelState {
    std::vector<DenseMatrix> weights;
    std::vector<std::vector<double>> biases;

    // caches from the last forward pass
    std::vector<DenseMatrix> activations;     // H^(0..L)
    std::vector<DenseMatrix> preactivations;  // Y^(1..L), index l-1
    std::vector<DenseMatrix> aggregated;      // P^(l) = alpha*A_hat*H + beta*H0 + gamma*H_prev
    DenseMatrix pooled;                       // graph task: readout input of the last layer
    bool forward_cached = false;

    // filled by loss_and_grad: adjoint of the aggregated input per layer
    std::vector<DenseMatrix> aggregated_adjoints;
};

ModelState init_model(const ModelConfig& config, RngStream& rng);

/// graph_ids maps each node to its graph (graph-classification only).
DenseMatrix forward(ModelState& state, const ModelConfig& config,
                    const NormalizedAdjacency& na, const DenseMatrix& x0,
                    const std::vector<std::size_t>* graph_ids = nullptr);

struct Gradients {
    std::vector<DenseMatrix> weights;
    std::vector<std::vector<double>> biases;
};

/// Softmax cross-entropy over masked rows plus (l2/2)*sum ||W||_F^2,
/// with exact reverse-mode gradients. Requires a cached forward pass.
std::pair<double, Gradients> loss_and_grad(
    ModelState& state, const ModelConfig& config, const NormalizedAdjacency& na,
    const DenseMatrix& x0, const std::vector<int>& labels,
    const std::vector<std::uint8_t>& mask,
    const std::vector<std::size_t>* graph_ids = nullptr);

struct AdamState {
    std::vector<DenseMatrix> m_w, v_w;
    std::vector<std::vector<double>> m_b, v_b;
    std::size_t t = 0;

    static AdamState like(const ModelState& state);
};

void adam_step(ModelState& state, const Gradients& grads, AdamState& opt, double lr);

struct EpochRecord {
    std::size_t epoch;
    double train_loss;
    double val_accuracy;
    double test_accuracy;
};

struct TrainReport {
    std::vector<EpochRecord> epochs;
    double final_test_accuracy = 0.0;
    double best_val_test_accuracy = 0.0;
    std::size_t best_epoch = 0;
};

struct SplitMasks {
    std::vector<std::uint8_t> train, val, test;
    void validate(std::size_t n) const;
};

TrainReport train(ModelState& state, const ModelConfig& config,
                  const NormalizedAdjacency& na, const DenseMatrix& x0,
                  const std::vector<int>& labels, const SplitMasks& masks,
                  const std::vector<std::size_t>* graph_ids = nullptr);

double accuracy(const DenseMatrix& logits, const std::vector<int>& labels,
                const std::vector<std::uint8_t>& mask);
double auroc(const DenseMatrix& logits, const std::vector<int>& labels,
             const std::vector<std::uint8_t>& mask);
double evaluate(const DenseMatrix& logits, const std::vector<int>& labels,
                const std::vector<std::uint8_t>& mask, Metric metric);

}  // namespace gnnlab
