// Acceptance gate: one pass/fail line per criterion, exit 0 only when no
// criterion fails (skips allowed).
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "gnnlab/datasets.hpp"
#include "gnnlab/graph.hpp"
#include "gnnlab/init.hpp"
#include "gnnlab/model.hpp"
#include "gnnlab/probes.hpp"

using namespace gnnlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    enum Kind { Pass, Fail, Skip } kind;
    std::string detail;
};

Outcome pass(std::string d) { return {Outcome::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::Fail, std::move(d)}; }
Outcome skip(std::string d) { return {Outcome::Skip, std::move(d)}; }

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

Graph circulant3(std::size_t n) {
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n, 1.0);
    for (std::size_t i = 0; i < n / 2; ++i) edges.emplace_back(i, i + n / 2, 1.0);
    return build_graph(n, edges);
}

SplitMasks stratified_masks(const std::vector<int>& labels, double train_frac,
                            double val_frac, RngStream& rng) {
    const std::size_t n = labels.size();
    SplitMasks m;
    m.train.assign(n, 0);
    m.val.assign(n, 0);
    m.test.assign(n, 0);
    int classes = 0;
    for (int l : labels) classes = std::max(classes, l + 1);
    for (int c = 0; c < classes; ++c) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (labels[i] == c) idx.push_back(i);
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.next_u64() % i]);
        const auto n_train = static_cast<std::size_t>(
            std::max(1.0, std::round(train_frac * static_cast<double>(idx.size()))));
        const auto n_val = static_cast<std::size_t>(
            std::max(1.0, std::round(val_frac * static_cast<double>(idx.size()))));
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (i < n_train) m.train[idx[i]] = 1;
            else if (i < n_train + n_val) m.val[idx[i]] = 1;
            else m.test[idx[i]] = 1;
        }
    }
    return m;
}

const std::vector<InitScheme> kAllSchemes = {
    {InitKind::XavierNormal},  {InitKind::XavierUniform},
    {InitKind::KaimingNormal}, {InitKind::KaimingUniform},
    {InitKind::GInit, 2.0}};

// -------------------------------------------------------------- criterion 1

Outcome criterion_initializer_exactness() {
    const std::size_t samples = 1000000;
    for (const auto& scheme : kAllSchemes) {
        for (std::size_t fan : {64u, 128u, 256u}) {
            RngStream rng(1, fan);
            const std::size_t rows = (samples + fan - 1) / fan;
            auto w = sample_weight(rng, scheme, fan, rows);
            double mean = 0.0;
            for (double v : w.values()) mean += v;
            mean /= w.size();
            double var = 0.0;
            for (double v : w.values()) var += (v - mean) * (v - mean);
            const double emp = std::sqrt(var / w.size());
            const double target = target_std(scheme, fan);
            if (std::abs(emp - target) > 0.01 * target)
                return fail(scheme.name() + " fan " + std::to_string(fan) +
                            ": std " + num(emp) + " vs target " + num(target));
        }
    }
    for (std::size_t fan : {64u, 128u, 256u}) {
        const double g = target_std({InitKind::GInit, 2.0}, fan);
        const double k = target_std({InitKind::KaimingNormal}, fan);
        const double ratio = (g * g) / (k * k);
        if (std::abs(ratio - 2.0) > 1e-14)
            return fail("variance ratio " + num(ratio) + " != 2");
    }
    return pass("all schemes within 1% over 1e6 samples; variance ratio 2");
}

// -------------------------------------------------------------- criterion 2

double loss_only(ModelState& state, const ModelConfig& config,
                 const NormalizedAdjacency& na, const DenseMatrix& x0,
                 const std::vector<int>& labels,
                 const std::vector<std::uint8_t>& mask) {
    forward(state, config, na, x0);
    return loss_and_grad(state, config, na, x0, labels, mask).first;
}

Outcome criterion_gradcheck() {
    const double h = 1e-5;
    double worst = 0.0;
    RngStream master(2, 0);
    for (std::size_t inst = 0; inst < 20; ++inst) {
        RngStream rng = master.split(inst);
        const std::size_t n = 4 + rng.next_u64() % 7;  // 4..10
        std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v)
                if (rng.next_uniform() < 0.5) edges.emplace_back(u, v, 1.0);
        auto g = build_graph(n, edges);
        auto na = normalize(g, rng.next_uniform() < 0.5
                                   ? AdjacencyVariant::Symmetric
                                   : AdjacencyVariant::Row);

        const std::size_t depth = 2 + rng.next_u64() % 3;  // 2..4
        std::size_t feat = 2 + rng.next_u64() % 3;
        const std::size_t width = 2 + rng.next_u64() % 4;
        ModelConfig cfg;
        cfg.init = {InitKind::GInit, 2.0};
        const std::size_t preset = inst % 4;
        // the epsilon (identity residual) path requires square layers
        if (preset == 3) feat = width;
        for (std::size_t l = 0; l < depth; ++l) {
            LayerSpec s = LayerSpec::gcn(l == 0 ? feat : width, width);
            if (preset == 1 && l + 1 < depth)
                s = LayerSpec::gcnii(width, l + 1, 0.5),
                s.width_in = l == 0 ? feat : width;
            if (preset == 2 && l >= 2) s.gamma = 0.3;
            if (preset == 3) {
                s.alpha = 0.8;
                s.beta = l > 0 ? 0.15 : 0.0;
                s.gamma = l >= 2 ? 0.2 : 0.0;
                s.delta = 0.7;
                s.epsilon = 0.3;
            }
            if (preset == 1 && l == 0) {
                // gcnii beta path needs a projected H^(0)
                s = LayerSpec::gcn(feat, width);
            }
            cfg.layers.push_back(s);
        }
        cfg.validate(feat);

        auto x0 = sample_gaussian(rng, n, feat, 0.0, 1.0);
        std::vector<int> labels(n);
        std::vector<std::uint8_t> mask(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = static_cast<int>(rng.next_u64() % width);
            mask[i] = rng.next_uniform() < 0.8 ? 1 : 0;
        }
        mask[0] = 1;

        ModelState st = init_model(cfg, rng);
        forward(st, cfg, na, x0);
        auto [loss, grads] = loss_and_grad(st, cfg, na, x0, labels, mask);
        (void)loss;
        for (std::size_t l = 0; l < st.weights.size(); ++l) {
            for (std::size_t i = 0; i < st.weights[l].size(); ++i) {
                const double saved = st.weights[l].data()[i];
                st.weights[l].data()[i] = saved + h;
                const double lp = loss_only(st, cfg, na, x0, labels, mask);
                st.weights[l].data()[i] = saved - h;
                const double lm = loss_only(st, cfg, na, x0, labels, mask);
                st.weights[l].data()[i] = saved;
                const double numeric = (lp - lm) / (2.0 * h);
                const double analytic = grads.weights[l].data()[i];
                worst = std::max(worst, std::abs(analytic - numeric) /
                                            std::max({1e-4, std::abs(analytic),
                                                      std::abs(numeric)}));
            }
            for (std::size_t i = 0; i < st.biases[l].size(); ++i) {
                const double saved = st.biases[l][i];
                st.biases[l][i] = saved + h;
                const double lp = loss_only(st, cfg, na, x0, labels, mask);
                st.biases[l][i] = saved - h;
                const double lm = loss_only(st, cfg, na, x0, labels, mask);
                st.biases[l][i] = saved;
                const double numeric = (lp - lm) / (2.0 * h);
                worst = std::max(worst, std::abs(grads.biases[l][i] - numeric) /
                                            std::max({1e-4,
                                                      std::abs(grads.biases[l][i]),
                                                      std::abs(numeric)}));
            }
        }
    }
    if (worst > 1e-5) return fail("max relative error " + num(worst) + " > 1e-5");
    return pass("20 instances, max relative error " + num(worst));
}

// -------------------------------------------------------------- criterion 3

struct BundleLike {
    Graph graph;
    DenseMatrix features;
    std::vector<int> labels;
};

void count_bounds(const BundleLike& data, const InitScheme& scheme,
                  std::uint64_t seed, std::size_t hidden, std::size_t classes,
                  std::size_t& checked, std::size_t& satisfied) {
    const std::size_t depth = 8, trials = 200;
    auto cfg = make_gcn_config(data.features.cols(), hidden, classes, depth, scheme);
    for (auto& l : cfg.layers) l.has_bias = false;
    auto na = normalize(data.graph, AdjacencyVariant::Row);

    RngStream frng(seed, 4), brng(seed, 5);
    auto fwd = probe_forward_variance(cfg, data.graph, na, data.features, trials,
                                      frng);
    std::vector<std::uint8_t> all_mask(data.graph.n, 1);
    auto bwd = probe_backward_variance(cfg, data.graph, na, data.features,
                                       data.labels, all_mask, trials, brng);
    const double d_i = fwd[0].mean_degree;
    double var_prev1 = 0.0, var_prev2 = 0.0;
    for (std::size_t l = 0; l < depth; ++l) {
        const double var_w = std::pow(target_std(scheme, cfg.layers[l].width_in), 2);
        auto fb = forward_bound(fwd[l], cfg.layers[l], var_w, d_i,
                                cfg.layers[l].width_in, var_prev1, var_prev2);
        var_prev2 = var_prev1;
        var_prev1 = fwd[l].forward_var;
        ++checked;
        if (fb.satisfied) ++satisfied;
        if (l + 1 < depth) {
            auto bb = backward_bound(bwd[l], bwd[l + 1], cfg.layers[l], var_w, d_i,
                                     cfg.layers[l].width_out);
            ++checked;
            if (bb.satisfied) ++satisfied;
        }
    }
}

Outcome criterion_bound_validation() {
    BundleLike regular;
    regular.graph = circulant3(60);
    {
        RngStream rng(3, 0);
        regular.features = sample_gaussian(rng, 60, 16, 0.0, 1.0);
        regular.labels.resize(60);
        for (std::size_t i = 0; i < 60; ++i)
            regular.labels[i] = static_cast<int>(i % 16);
    }
    std::size_t checked = 0, satisfied = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (const auto& scheme :
             {InitScheme{InitKind::KaimingNormal}, InitScheme{InitKind::GInit, 2.0}}) {
            // The regular graph needs width headroom: at narrow widths the
            // ReLU-gate/adjoint correlation (a ~1/width effect) pushes the
            // backward variance a few percent past the bound, which assumes
            // independent gates.
            count_bounds(regular, scheme, seed, 128, 16, checked, satisfied);

            BundleLike sbm;
            RngStream grng(seed, 0);
            auto sample = sbm_generate(grng, 4, 30, 0.2, 0.02, 16, 0.1);
            sbm.graph = std::move(sample.graph);
            sbm.features = std::move(sample.features);
            sbm.labels = std::move(sample.labels);
            count_bounds(sbm, scheme, seed, 16, 16, checked, satisfied);
        }
    }
    const double rate =
        static_cast<double>(satisfied) / static_cast<double>(checked);
    std::string detail = std::to_string(satisfied) + "/" +
                         std::to_string(checked) + " (" + num(100 * rate) +
                         "%) in [lower, upper]";
    return rate >= 0.95 ? pass(detail) : fail(detail);
}

// -------------------------------------------------------------- criterion 4

Outcome criterion_circular_law() {
    const std::size_t n = 256;
    std::vector<double> kaiming_radii, ginit_radii;
    for (const auto& scheme : kAllSchemes) {
        if (scheme.kind == InitKind::XavierUniform ||
            scheme.kind == InitKind::KaimingUniform)
            continue;  // circular law is checked for the Normal schemes
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            RngStream rng(seed, 60 + static_cast<std::uint64_t>(scheme.kind));
            auto rep = circular_law_check(scheme, n, rng);
            if (std::abs(rep.empirical_radius - rep.predicted_radius) >
                0.15 * rep.predicted_radius)
                return fail(scheme.name() + " seed " + std::to_string(seed) +
                            ": radius " + num(rep.empirical_radius) +
                            " vs predicted " + num(rep.predicted_radius));
            if (rep.radial_ks > 0.1)
                return fail(scheme.name() + ": radial KS " + num(rep.radial_ks) +
                            " > 0.1");
            if (scheme.kind == InitKind::KaimingNormal)
                kaiming_radii.push_back(rep.empirical_radius);
            if (scheme.kind == InitKind::GInit)
                ginit_radii.push_back(rep.empirical_radius);
        }
    }
    const double ratio = mean_of(ginit_radii) / mean_of(kaiming_radii);
    if (std::abs(ratio - std::sqrt(2.0)) > 0.1 * std::sqrt(2.0))
        return fail("radius ratio " + num(ratio) + " not within 10% of sqrt(2)");
    return pass("radii within 15%, KS <= 0.1, ratio " + num(ratio));
}

// -------------------------------------------------------------- criterion 5

Outcome criterion_variance_trend() {
    const std::size_t depth = 8, hidden = 16, trials = 20;
    std::vector<double> fwd8_k, fwd8_g, bwd1_k, bwd1_g;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RngStream grng(seed, 0);
        auto sample = sbm_generate(grng, 4, 30, 0.2, 0.02, 16, 0.1);
        auto na = normalize(sample.graph, AdjacencyVariant::Row);
        std::vector<std::uint8_t> all_mask(sample.graph.n, 1);
        for (const auto& scheme :
             {InitScheme{InitKind::KaimingNormal}, InitScheme{InitKind::GInit, 2.0}}) {
            auto cfg = make_gcn_config(16, hidden, hidden, depth, scheme);
            RngStream frng(seed, 4), brng(seed, 5);
            auto fwd = probe_forward_variance(cfg, sample.graph, na,
                                              sample.features, trials, frng);
            auto bwd = probe_backward_variance(cfg, sample.graph, na,
                                               sample.features, sample.labels,
                                               all_mask, trials, brng);
            auto& f = scheme.kind == InitKind::GInit ? fwd8_g : fwd8_k;
            auto& b = scheme.kind == InitKind::GInit ? bwd1_g : bwd1_k;
            f.push_back(fwd[depth - 1].forward_var);
            b.push_back(bwd[0].backward_var);
        }
    }
    const double f_ratio = mean_of(fwd8_g) / mean_of(fwd8_k);
    const double b_ratio = mean_of(bwd1_g) / mean_of(bwd1_k);
    if (f_ratio <= 1.5)
        return fail("layer-8 forward variance ratio " + num(f_ratio) + " <= 1.5");
    if (b_ratio <= 1.5)
        return fail("layer-1 backward variance ratio " + num(b_ratio) + " <= 1.5");
    return pass("forward ratio " + num(f_ratio) + ", backward ratio " +
                num(b_ratio));
}

// -------------------------------------------------------------- criterion 6

Outcome criterion_oversmoothing() {
    const std::size_t depth = 32, hidden = 64;
    std::vector<double> decay_k, decay_g, sigma_ratios;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RngStream grng(seed, 0);
        auto sample = sbm_generate(grng, 4, 30, 0.2, 0.02, 16, 0.1);
        auto na = normalize(sample.graph, AdjacencyVariant::Symmetric);

        std::vector<double> sigma_k, sigma_g;
        for (const auto& scheme :
             {InitScheme{InitKind::KaimingNormal}, InitScheme{InitKind::GInit, 2.0}}) {
            auto cfg = make_gcn_config(16, hidden, hidden, depth, scheme);
            for (auto& l : cfg.layers) l.has_bias = false;
            RngStream wrng(seed, 1 + (scheme.kind == InitKind::GInit ? 10 : 0));
            ModelState st = init_model(cfg, wrng);
            forward(st, cfg, na, sample.features);

            std::vector<double> dm(depth + 1);
            for (std::size_t l = 4; l <= 29; ++l)
                dm[l] = oversmoothing_distance(st.activations[l], sample.graph);
            // geometric-mean consecutive ratio over layers 4..28
            const double rate = std::pow(dm[29] / dm[4], 1.0 / 25.0);
            (scheme.kind == InitKind::GInit ? decay_g : decay_k).push_back(rate);

            auto& sig = scheme.kind == InitKind::GInit ? sigma_g : sigma_k;
            for (const auto& rec : weight_spectrum(st, 1.0))
                if (st.weights[rec.layer - 1].rows() == hidden)
                    sig.push_back(rec.sigma_max);
        }
        sigma_ratios.push_back(mean_of(sigma_g) / mean_of(sigma_k));
    }
    const double rate_k = mean_of(decay_k);
    const double rate_g = mean_of(decay_g);
    if (!(rate_g > rate_k))
        return fail("decay rate g-init " + num(rate_g) + " not > kaiming " +
                    num(rate_k));
    const double sratio = mean_of(sigma_ratios);
    if (std::abs(sratio - std::sqrt(2.0)) > 0.1 * std::sqrt(2.0))
        return fail("sigma_max ratio " + num(sratio) + " not within 10% of sqrt(2)");
    return pass("decay rate " + num(rate_g) + " (g-init) vs " + num(rate_k) +
                " (kaiming); sigma ratio " + num(sratio));
}

// ---------------------------------------------------------- criteria 7 and 8

struct SweepResult {
    // mean test accuracy per depth, in the order of kDepths
    std::vector<double> mean_acc;
};

const std::vector<std::size_t> kDepths = {2, 8, 16, 32};

SweepResult depth_sweep(const InitScheme& scheme, bool cold) {
    SweepResult res;
    for (std::size_t depth : kDepths) {
        std::vector<double> accs;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            RngStream grng(seed, 0);
            auto sample = sbm_generate(grng, 4, 60, 0.1, 0.01, 16, 0.1);
            RngStream mrng(seed, 3);
            SplitMasks masks = stratified_masks(sample.labels, 0.1, 0.1, mrng);
            DenseMatrix features = sample.features;
            if (cold) {
                for (std::size_t i = 0; i < features.rows(); ++i)
                    if (!masks.train[i])
                        for (std::size_t j = 0; j < features.cols(); ++j)
                            features(i, j) = 0.0;
            }
            auto cfg = make_gcn_config(16, 128, 4, depth, scheme);
            auto na = normalize(sample.graph, AdjacencyVariant::Symmetric);
            RngStream wrng(seed, 1);
            ModelState st = init_model(cfg, wrng);
            auto report = train(st, cfg, na, features, sample.labels, masks);
            accs.push_back(report.best_val_test_accuracy);
        }
        res.mean_acc.push_back(mean_of(accs));
    }
    return res;
}

Outcome criterion_depth_trend() {
    auto k = depth_sweep({InitKind::KaimingNormal}, false);
    auto g = depth_sweep({InitKind::GInit, 2.0}, false);
    const double deep_gap = g.mean_acc[3] - k.mean_acc[3];
    const double shallow_gap = std::abs(g.mean_acc[0] - k.mean_acc[0]);
    if (deep_gap < 0.05)
        return fail("depth-32 gap " + num(100 * deep_gap) + " points < 5");
    if (shallow_gap > 0.03)
        return fail("depth-2 gap " + num(100 * shallow_gap) + " points > 3");
    return pass("depth-32 gap " + num(100 * deep_gap) + " points, depth-2 gap " +
                num(100 * shallow_gap) + " points");
}

Outcome criterion_cold_start() {
    auto k = depth_sweep({InitKind::KaimingNormal}, true);
    auto g = depth_sweep({InitKind::GInit, 2.0}, true);
    const auto k_best =
        std::max_element(k.mean_acc.begin(), k.mean_acc.end()) - k.mean_acc.begin();
    const auto g_best =
        std::max_element(g.mean_acc.begin(), g.mean_acc.end()) - g.mean_acc.begin();
    if (g.mean_acc[g_best] < k.mean_acc[k_best])
        return fail("best accuracy g-init " + num(g.mean_acc[g_best]) +
                    " < kaiming " + num(k.mean_acc[k_best]));
    if (kDepths[g_best] < kDepths[k_best])
        return fail("argmax depth g-init " + std::to_string(kDepths[g_best]) +
                    " < kaiming " + std::to_string(kDepths[k_best]));
    return pass("best " + num(g.mean_acc[g_best]) + "@depth " +
                std::to_string(kDepths[g_best]) + " (g-init) vs " +
                num(k.mean_acc[k_best]) + "@depth " +
                std::to_string(kDepths[k_best]) + " (kaiming)");
}

// -------------------------------------------------------------- criterion 9

Outcome criterion_graph_classification() {
    // 100 triangles and 100 squares. Nodes carry noisy one-hot
    // cyclic-position features; with pure iid-noise features the two classes
    // are nearly indistinguishable through a mean readout, so the sanity
    // check would measure sampling luck instead of the pipeline.
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    std::vector<std::size_t> graph_ids;
    std::vector<int> labels;
    std::size_t offset = 0;
    RngStream frng(9, 0);
    std::vector<double> feat_values;
    const std::size_t feat_dim = 4;
    for (std::size_t gidx = 0; gidx < 200; ++gidx) {
        const bool square = gidx >= 100;
        const std::size_t sz = square ? 4 : 3;
        for (std::size_t i = 0; i < sz; ++i) {
            edges.emplace_back(offset + i, offset + (i + 1) % sz, 1.0);
            graph_ids.push_back(gidx);
            for (std::size_t j = 0; j < feat_dim; ++j)
                feat_values.push_back((i == j ? 1.0 : 0.0) +
                                      0.1 * frng.next_gaussian());
        }
        labels.push_back(square ? 1 : 0);
        offset += sz;
    }
    Graph batch_graph = build_graph(offset, edges);
    DenseMatrix features(offset, feat_dim, std::move(feat_values));
    auto na = normalize(batch_graph, AdjacencyVariant::Symmetric);

    double best = 0.0, ginit_acc = 0.0;
    std::vector<std::pair<std::string, double>> results;
    for (const auto& scheme : kAllSchemes) {
        std::vector<double> accs;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            RngStream mrng(seed, 3);
            SplitMasks masks = stratified_masks(labels, 0.5, 0.25, mrng);
            auto cfg = make_gcn_config(feat_dim, 16, 2, 3, scheme,
                                       Task::GraphClassification);
            cfg.learning_rate = 1e-2;
            RngStream wrng(seed, 1);
            ModelState st = init_model(cfg, wrng);
            auto report =
                train(st, cfg, na, features, labels, masks, &graph_ids);
            accs.push_back(report.best_val_test_accuracy);
        }
        const double acc = mean_of(accs);
        results.emplace_back(scheme.name(), acc);
        best = std::max(best, acc);
        if (scheme.kind == InitKind::GInit) ginit_acc = acc;
    }
    for (const auto& [name, acc] : results)
        if (acc < 0.95)
            return fail(name + " accuracy " + num(acc) + " < 0.95");
    if (ginit_acc < best - 0.005)
        return fail("g-init accuracy " + num(ginit_acc) +
                    " more than 0.5 points below best " + num(best));
    return pass("all schemes >= 0.95; g-init " + num(ginit_acc) + ", best " +
                num(best));
}

// ------------------------------------------------------------- criterion 10

Outcome criterion_real_data() {
    fs::path dir;
    if (const char* env = std::getenv("GNNLAB_CORA_DIR")) dir = env;
    else if (fs::exists("data/cora/edges.tsv")) dir = "data/cora";
    else if (fs::exists("../data/cora/edges.tsv")) dir = "../data/cora";
    else
        return skip("no Cora-format bundle found (set GNNLAB_CORA_DIR)");

    auto bundle = load_node_bundle(dir);
    int classes = 0;
    for (int l : bundle.labels) classes = std::max(classes, l + 1);
    std::vector<double> accs;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto cfg = make_gcn_config(bundle.features.cols(), 128,
                                   static_cast<std::size_t>(classes), 2,
                                   {InitKind::KaimingNormal});
        auto na = normalize(bundle.graph, AdjacencyVariant::Symmetric);
        RngStream wrng(seed, 1);
        ModelState st = init_model(cfg, wrng);
        auto report =
            train(st, cfg, na, bundle.features, bundle.labels, bundle.masks);
        accs.push_back(report.best_val_test_accuracy);
    }
    const double acc = mean_of(accs);
    return acc >= 0.78 ? pass("test accuracy " + num(acc) + " >= 0.78")
                       : fail("test accuracy " + num(acc) + " < 0.78");
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"initializer exactness", criterion_initializer_exactness},
        {"gradient correctness", criterion_gradcheck},
        {"variance bound validation", criterion_bound_validation},
        {"circular law", criterion_circular_law},
        {"init variance trend", criterion_variance_trend},
        {"oversmoothing mechanism", criterion_oversmoothing},
        {"depth sweep trend", criterion_depth_trend},
        {"cold start", criterion_cold_start},
        {"graph classification", criterion_graph_classification},
        {"real-data baseline", criterion_real_data},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out;
        try {
            out = criteria[i].run();
        } catch (const std::exception& e) {
            out = fail(std::string("exception: ") + e.what());
        }
        const char* tag = out.kind == Outcome::Pass   ? "PASS"
                          : out.kind == Outcome::Fail ? "FAIL"
                                                      : "SKIPPED";
        std::printf("[%s] %zu %s: %s\n", tag, i + 1, criteria[i].name,
                    out.detail.c_str());
        std::fflush(stdout);
        if (out.kind == Outcome::Fail) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
