#include "gnnlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gnnlab {

LayerSpec LayerSpec::gcn(std::size_t width_in, std::size_t width_out) {
    LayerSpec s;
    s.alpha = 1.0;
    s.delta = 1.0;
    s.width_in = width_in;
    s.width_out = width_out;
    return s;
}

LayerSpec LayerSpec::gcnii(std::size_t width, std::size_t depth_index, double lambda_h) {
    LayerSpec s;
    s.alpha = 0.9;
    s.beta = 0.1;
    s.gamma = 0.0;
    s.delta = lambda_h / static_cast<double>(depth_index);
    s.epsilon = 1.0 - s.delta;
    s.width_in = width;
    s.width_out = width;
    return s;
}

void ModelConfig::validate(std::size_t feature_dim) const {
    if (layers.empty()) throw std::invalid_argument("config: no layers");
    std::size_t w = feature_dim;
    const std::size_t hidden0 = layers.front().width_out;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& s = layers[l];
        if (s.width_in != w)
            throw std::invalid_argument("config: layer " + std::to_string(l + 1) +
                                        " width_in does not chain");
        if (s.epsilon != 0.0 && s.width_in != s.width_out)
            throw std::invalid_argument("config: epsilon != 0 needs square layer");
        if (s.beta != 0.0 && l > 0) {
            const std::size_t h0_width = (feature_dim == s.width_in) ? feature_dim : hidden0;
            if (h0_width != s.width_in)
                throw std::invalid_argument("config: beta path width mismatch at layer " +
                                            std::to_string(l + 1));
        }
        if (s.gamma != 0.0 && l > 0) {
            const std::size_t prev_width = (l == 1) ? feature_dim : layers[l - 2].width_out;
            if (prev_width != s.width_in)
                throw std::invalid_argument("config: gamma path width mismatch at layer " +
                                            std::to_string(l + 1));
        }
        w = s.width_out;
    }
}

ModelConfig make_gcn_config(std::size_t feature_dim, std::size_t hidden,
                            std::size_t classes, std::size_t depth,
                            InitScheme init, Task task) {
    if (depth == 0) throw std::invalid_argument("make_gcn_config: depth == 0");
    ModelConfig cfg;
    cfg.init = init;
    cfg.task = task;
    if (depth == 1) {
        cfg.layers.push_back(LayerSpec::gcn(feature_dim, classes));
    } else {
        cfg.layers.push_back(LayerSpec::gcn(feature_dim, hidden));
        for (std::size_t l = 2; l < depth; ++l)
            cfg.layers.push_back(LayerSpec::gcn(hidden, hidden));
        cfg.layers.push_back(LayerSpec::gcn(hidden, classes));
    }
    return cfg;
}

ModelState init_model(const ModelConfig& config, RngStream& rng) {
    ModelState st;
    st.weights.reserve(config.layers.size());
    st.biases.reserve(config.layers.size());
    for (const auto& spec : config.layers) {
        st.weights.push_back(sample_weight(rng, config.init, spec.width_in, spec.width_out));
        st.biases.emplace_back(spec.has_bias ? spec.width_out : 0, 0.0);
    }
    return st;
}

namespace {

// index of the activation the beta path reads: the raw features, or the
// post-projection activation when the input width does not chain
std::size_t h0_index(std::size_t feature_dim, const LayerSpec& spec) {
    return feature_dim == spec.width_in ? 0 : 1;
}

DenseMatrix group_mean(const DenseMatrix& h, const std::vector<std::size_t>& graph_ids,
                       std::size_t n_graphs) {
    DenseMatrix out(n_graphs, h.cols());
    std::vector<double> counts(n_graphs, 0.0);
    for (std::size_t i = 0; i < h.rows(); ++i) {
        counts[graph_ids[i]] += 1.0;
        for (std::size_t j = 0; j < h.cols(); ++j)
            out(graph_ids[i], j) += h(i, j);
    }
    for (std::size_t g = 0; g < n_graphs; ++g) {
        if (counts[g] == 0.0) throw std::invalid_argument("forward: empty graph in batch");
        for (std::size_t j = 0; j < out.cols(); ++j) out(g, j) /= counts[g];
    }
    return out;
}

void axpy(DenseMatrix& y, double a, const DenseMatrix& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y.data()[i] += a * x.data()[i];
}

}  // namespace

DenseMatrix forward(ModelState& state, const ModelConfig& config,
                    const NormalizedAdjacency& na, const DenseMatrix& x0,
                    const std::vector<std::size_t>* graph_ids) {
    const std::size_t L = config.layers.size();
    const std::size_t n = x0.rows();
    if (na.matrix.rows != n)
        throw DimensionError("forward: feature rows != adjacency size");
    config.validate(x0.cols());
    if (config.task == Task::GraphClassification && graph_ids == nullptr)
        throw std::invalid_argument("forward: graph task needs graph ids");

    std::size_t n_graphs = 0;
    if (graph_ids) {
        if (graph_ids->size() != n)
            throw DimensionError("forward: graph_ids size != node count");
        n_graphs = *std::max_element(graph_ids->begin(), graph_ids->end()) + 1;
    }

    state.activations.assign(1, x0);
    state.preactivations.clear();
    state.aggregated.clear();
    state.aggregated_adjoints.clear();

    for (std::size_t l = 1; l <= L; ++l) {
        const auto& spec = config.layers[l - 1];
        const DenseMatrix& h_prev = state.activations[l - 1];

        DenseMatrix p;
        const bool readout_layer =
            config.task == Task::GraphClassification && l == L;
        if (readout_layer) {
            p = group_mean(h_prev, *graph_ids, n_graphs);
            state.pooled = p;
        } else {
            if (spec.alpha != 0.0) {
                p = spmm(na.matrix, h_prev);
                if (spec.alpha != 1.0)
                    for (std::size_t i = 0; i < p.size(); ++i) p.data()[i] *= spec.alpha;
            } else {
                p = DenseMatrix(n, spec.width_in);
            }
            if (spec.beta != 0.0)
                axpy(p, spec.beta, state.activations[h0_index(x0.cols(), spec)]);
            if (spec.gamma != 0.0 && l >= 2)
                axpy(p, spec.gamma, state.activations[l - 2]);
        }

        DenseMatrix y(p.rows(), spec.width_out);
        if (spec.delta != 0.0) {
            y = matmul(p, state.weights[l - 1]);
            if (spec.delta != 1.0)
                for (std::size_t i = 0; i < y.size(); ++i) y.data()[i] *= spec.delta;
        }
        if (spec.epsilon != 0.0) axpy(y, spec.epsilon, p);
        if (spec.has_bias) {
            const auto& b = state.biases[l - 1];
            for (std::size_t i = 0; i < y.rows(); ++i)
                for (std::size_t j = 0; j < y.cols(); ++j) y(i, j) += b[j];
        }
        if (!y.all_finite())
            throw std::runtime_error("forward: non-finite activation at layer " +
                                     std::to_string(l));

        state.aggregated.push_back(std::move(p));
        DenseMatrix h = y;
        if (l < L)
            for (std::size_t i = 0; i < h.size(); ++i)
                h.data()[i] = std::max(0.0, h.data()[i]);
        state.preactivations.push_back(std::move(y));
        state.activations.push_back(std::move(h));
    }
    state.forward_cached = true;
    return state.activations.back();
}

namespace {

// softmax cross-entropy over masked rows; fills the logits adjoint
double masked_ce(const DenseMatrix& logits, const std::vector<int>& labels,
                 const std::vector<std::uint8_t>& mask, DenseMatrix* adjoint) {
    const std::size_t rows = logits.rows(), c = logits.cols();
    if (labels.size() != rows || mask.size() != rows)
        throw DimensionError("loss: labels/mask size mismatch");
    std::size_t m = 0;
    for (auto f : mask) m += f != 0;
    if (m == 0) throw std::invalid_argument("loss: empty mask");

    double loss = 0.0;
    if (adjoint) *adjoint = DenseMatrix(rows, c);
    std::vector<double> prob(c);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!mask[i]) continue;
        const int y = labels[i];
        if (y < 0 || static_cast<std::size_t>(y) >= c)
            throw std::invalid_argument("loss: label out of range at row " +
                                        std::to_string(i));
        double mx = logits(i, 0);
        for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, logits(i, j));
        double z = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            prob[j] = std::exp(logits(i, j) - mx);
            z += prob[j];
        }
        loss -= std::log(prob[static_cast<std::size_t>(y)] / z);
        if (adjoint) {
            for (std::size_t j = 0; j < c; ++j) {
                (*adjoint)(i, j) = (prob[j] / z -
                                    (j == static_cast<std::size_t>(y) ? 1.0 : 0.0)) /
                                   static_cast<double>(m);
            }
        }
    }
    return loss / static_cast<double>(m);
}

}  // namespace

std::pair<double, Gradients> loss_and_grad(
    ModelState& state, const ModelConfig& config, const NormalizedAdjacency& na,
    const DenseMatrix& x0, const std::vector<int>& labels,
    const std::vector<std::uint8_t>& mask, const std::vector<std::size_t>* graph_ids) {
    if (!state.forward_cached)
        throw std::logic_error("loss_and_grad: no cached forward pass");
    const std::size_t L = config.layers.size();
    const DenseMatrix& logits = state.activations[L];

    DenseMatrix g_logits;
    double loss = masked_ce(logits, labels, mask, &g_logits);
    for (const auto& w : state.weights) {
        const double f = w.frobenius_norm();
        loss += 0.5 * config.l2_penalty * f * f;
    }

    Gradients grads;
    grads.weights.resize(L);
    grads.biases.resize(L);
    state.aggregated_adjoints.assign(L, DenseMatrix());

    // row variant is not symmetric; the alpha path backpropagates through A^T
    SparseMatrix at;
    const SparseMatrix* a_back = &na.matrix;
    if (na.variant == AdjacencyVariant::Row) {
        at = na.matrix.transposed();
        a_back = &at;
    }

    std::vector<DenseMatrix> adj_h(L + 1);
    auto add_into = [&](std::size_t idx, double scale, const DenseMatrix& src) {
        if (idx == 0) return;  // input features are data
        if (adj_h[idx].rows() == 0)
            adj_h[idx] = DenseMatrix(state.activations[idx].rows(),
                                     state.activations[idx].cols());
        axpy(adj_h[idx], scale, src);
    };

    for (std::size_t l = L; l >= 1; --l) {
        const auto& spec = config.layers[l - 1];
        const DenseMatrix& p = state.aggregated[l - 1];
        const DenseMatrix& y = state.preactivations[l - 1];
        const bool readout_layer =
            config.task == Task::GraphClassification && l == L;

        DenseMatrix g_y;
        if (l == L) {
            g_y = std::move(g_logits);
        } else {
            g_y = adj_h[l].rows() ? std::move(adj_h[l])
                                  : DenseMatrix(y.rows(), y.cols());
            for (std::size_t i = 0; i < g_y.size(); ++i)
                if (y.data()[i] <= 0.0) g_y.data()[i] = 0.0;
        }

        // dW = delta * P^T G_Y + l2 * W
        DenseMatrix dw(spec.width_in, spec.width_out);
        if (spec.delta != 0.0) {
            dw = matmul(p.transposed(), g_y);
            if (spec.delta != 1.0)
                for (std::size_t i = 0; i < dw.size(); ++i) dw.data()[i] *= spec.delta;
        }
        axpy(dw, config.l2_penalty, state.weights[l - 1]);
        grads.weights[l - 1] = std::move(dw);

        std::vector<double> db(state.biases[l - 1].size(), 0.0);
        if (spec.has_bias)
            for (std::size_t i = 0; i < g_y.rows(); ++i)
                for (std::size_t j = 0; j < g_y.cols(); ++j) db[j] += g_y(i, j);
        grads.biases[l - 1] = std::move(db);

        // G_P = delta * G_Y W^T + epsilon * G_Y
        DenseMatrix g_p(p.rows(), p.cols());
        if (spec.delta != 0.0) {
            g_p = matmul(g_y, state.weights[l - 1].transposed());
            if (spec.delta != 1.0)
                for (std::size_t i = 0; i < g_p.size(); ++i) g_p.data()[i] *= spec.delta;
        }
        if (spec.epsilon != 0.0) axpy(g_p, spec.epsilon, g_y);
        state.aggregated_adjoints[l - 1] = g_p;

        if (readout_layer) {
            // spread the pooled adjoint back over each graph's nodes
            std::vector<double> counts;
            counts.assign(g_p.rows(), 0.0);
            for (std::size_t i = 0; i < x0.rows(); ++i) counts[(*graph_ids)[i]] += 1.0;
            DenseMatrix spread(x0.rows(), g_p.cols());
            for (std::size_t i = 0; i < x0.rows(); ++i) {
                const std::size_t g = (*graph_ids)[i];
                for (std::size_t j = 0; j < g_p.cols(); ++j)
                    spread(i, j) = g_p(g, j) / counts[g];
            }
            add_into(l - 1, 1.0, spread);
        } else {
            if (spec.alpha != 0.0 && l >= 2)
                add_into(l - 1, spec.alpha, spmm(*a_back, g_p));
            if (spec.beta != 0.0)
                add_into(h0_index(x0.cols(), spec), spec.beta, g_p);
            if (spec.gamma != 0.0 && l >= 2) add_into(l - 2, spec.gamma, g_p);
        }
    }
    return {loss, std::move(grads)};
}

AdamState AdamState::like(const ModelState& state) {
    AdamState a;
    for (const auto& w : state.weights) {
        a.m_w.emplace_back(w.rows(), w.cols());
        a.v_w.emplace_back(w.rows(), w.cols());
    }
    for (const auto& b : state.biases) {
        a.m_b.emplace_back(b.size(), 0.0);
        a.v_b.emplace_back(b.size(), 0.0);
    }
    return a;
}

void adam_step(ModelState& state, const Gradients& grads, AdamState& opt, double lr) {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    opt.t += 1;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(opt.t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(opt.t));
    for (std::size_t l = 0; l < state.weights.size(); ++l) {
        auto* w = state.weights[l].data();
        const auto* g = grads.weights[l].data();
        auto* m = opt.m_w[l].data();
        auto* v = opt.v_w[l].data();
        for (std::size_t i = 0; i < state.weights[l].size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
            w[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
        }
        auto& b = state.biases[l];
        for (std::size_t i = 0; i < b.size(); ++i) {
            const double gb = grads.biases[l][i];
            opt.m_b[l][i] = beta1 * opt.m_b[l][i] + (1.0 - beta1) * gb;
            opt.v_b[l][i] = beta2 * opt.v_b[l][i] + (1.0 - beta2) * gb * gb;
            b[i] -= lr * (opt.m_b[l][i] / bc1) / (std::sqrt(opt.v_b[l][i] / bc2) + eps);
        }
    }
    state.forward_cached = false;  // weights changed; caches are stale
}

void SplitMasks::validate(std::size_t n) const {
    if (train.size() != n || val.size() != n || test.size() != n)
        throw DimensionError("masks: size mismatch");
    for (std::size_t i = 0; i < n; ++i)
        if (train[i] + val[i] + test[i] > 1)
            throw std::invalid_argument("masks: overlap at index " + std::to_string(i));
}

TrainReport train(ModelState& state, const ModelConfig& config,
                  const NormalizedAdjacency& na, const DenseMatrix& x0,
                  const std::vector<int>& labels, const SplitMasks& masks,
                  const std::vector<std::size_t>* graph_ids) {
    const std::size_t rows = graph_ids
                                 ? *std::max_element(graph_ids->begin(), graph_ids->end()) + 1
                                 : x0.rows();
    masks.validate(rows);

    TrainReport report;
    AdamState opt = AdamState::like(state);
    DenseMatrix logits = forward(state, config, na, x0, graph_ids);

    double best_val = -1.0;
    for (std::size_t e = 0; e <= config.epochs; ++e) {
        auto [loss, grads] = loss_and_grad(state, config, na, x0, labels,
                                           masks.train, graph_ids);
        EpochRecord rec;
        rec.epoch = e;
        rec.train_loss = loss;
        rec.val_accuracy = accuracy(logits, labels, masks.val);
        rec.test_accuracy = accuracy(logits, labels, masks.test);
        report.epochs.push_back(rec);
        if (rec.val_accuracy > best_val) {
            best_val = rec.val_accuracy;
            report.best_val_test_accuracy = rec.test_accuracy;
            report.best_epoch = e;
        }
        if (e == config.epochs) break;
        adam_step(state, grads, opt, config.learning_rate);
        logits = forward(state, config, na, x0, graph_ids);
    }
    report.final_test_accuracy = report.epochs.back().test_accuracy;
    return report;
}

double accuracy(const DenseMatrix& logits, const std::vector<int>& labels,
                const std::vector<std::uint8_t>& mask) {
    std::size_t correct = 0, total = 0;
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        if (!mask[i]) continue;
        std::size_t arg = 0;
        for (std::size_t j = 1; j < logits.cols(); ++j)
            if (logits(i, j) > logits(i, arg)) arg = j;
        correct += static_cast<int>(arg) == labels[i];
        ++total;
    }
    if (total == 0) throw std::invalid_argument("accuracy: empty mask");
    return static_cast<double>(correct) / static_cast<double>(total);
}

double auroc(const DenseMatrix& logits, const std::vector<int>& labels,
             const std::vector<std::uint8_t>& mask) {
    std::vector<std::pair<double, int>> scored;
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        if (!mask[i]) continue;
        if (labels[i] != 0 && labels[i] != 1)
            throw std::invalid_argument("auroc: labels must be binary");
        const double score =
            logits.cols() >= 2 ? logits(i, 1) - logits(i, 0) : logits(i, 0);
        scored.emplace_back(score, labels[i]);
    }
    std::size_t pos = 0;
    for (const auto& [s, y] : scored) pos += y;
    const std::size_t neg = scored.size() - pos;
    if (pos == 0 || neg == 0)
        throw std::invalid_argument("auroc: needs both classes in the mask");
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // rank-sum with average ranks over ties
    double rank_sum = 0.0;
    std::size_t i = 0;
    while (i < scored.size()) {
        std::size_t j = i;
        while (j < scored.size() && scored[j].first == scored[i].first) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
        for (std::size_t k = i; k < j; ++k)
            if (scored[k].second == 1) rank_sum += avg_rank;
        i = j;
    }
    return (rank_sum - 0.5 * static_cast<double>(pos) * (pos + 1)) /
           (static_cast<double>(pos) * static_cast<double>(neg));
}

double evaluate(const DenseMatrix& logits, const std::vector<int>& labels,
                const std::vector<std::uint8_t>& mask, Metric metric) {
    return metric == Metric::Accuracy ? accuracy(logits, labels, mask)
                                      : auroc(logits, labels, mask);
}

}  // namespace gnnlab
