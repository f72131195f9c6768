// gnnlab command line: experiment pipelines over the core library.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "gnnlab/datasets.hpp"
#include "gnnlab/graph.hpp"
#include "gnnlab/init.hpp"
#include "gnnlab/model.hpp"
#include "gnnlab/probes.hpp"

using json = nlohmann::json;
using namespace gnnlab;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolations = 2;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- run config

struct SbmParams {
    std::size_t communities = 4;
    std::size_t nodes_per_community = 60;
    double p_in = 0.1;
    double p_out = 0.01;
    std::size_t feature_dim = 16;
    double feature_noise = 0.1;
};

struct RunConfig {
    std::optional<std::string> dataset;    // node-bundle directory
    std::optional<std::string> graph_set;  // JSONL graph set
    std::optional<SbmParams> sbm;

    std::size_t hidden = 128;
    std::size_t depth = 2;
    std::string preset = "gcn";  // or "gcnii"
    double lambda_h = 0.5;
    std::string adjacency = "symmetric";

    double learning_rate = 1e-3;
    double l2_penalty = 5e-4;
    std::size_t epochs = 200;
    double train_fraction = 0.1;
    double val_fraction = 0.1;

    std::vector<std::string> scheme_names = {"kaiming-normal", "g-init"};
    double ginit_d = 2.0;
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};

    std::size_t probe_trials = 10;
    std::size_t spectrum_n = 128;

    std::vector<InitScheme> schemes() const {
        std::vector<InitScheme> out;
        for (const auto& name : scheme_names)
            out.push_back(InitScheme::from_name(name, ginit_d));
        return out;
    }
};

void expect_keys(const json& obj, const std::string& where,
                 const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key))
            throw ConfigError("unknown key at " + where + "/" + key);
    }
}

template <typename T>
void read_to(const json& obj, const char* key, T& target) {
    if (obj.contains(key)) target = obj.at(key).get<T>();
}

RunConfig parse_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    expect_keys(doc, "",
                {"dataset", "graph_set", "sbm", "model", "train", "schemes",
                 "ginit_d", "seeds", "probe_trials", "spectrum_n", "adjacency"});

    RunConfig cfg;
    if (doc.contains("dataset")) cfg.dataset = doc.at("dataset").get<std::string>();
    if (doc.contains("graph_set"))
        cfg.graph_set = doc.at("graph_set").get<std::string>();
    if (doc.contains("sbm")) {
        const json& s = doc.at("sbm");
        expect_keys(s, "/sbm",
                    {"communities", "nodes_per_community", "p_in", "p_out",
                     "feature_dim", "feature_noise"});
        SbmParams p;
        read_to(s, "communities", p.communities);
        read_to(s, "nodes_per_community", p.nodes_per_community);
        read_to(s, "p_in", p.p_in);
        read_to(s, "p_out", p.p_out);
        read_to(s, "feature_dim", p.feature_dim);
        read_to(s, "feature_noise", p.feature_noise);
        cfg.sbm = p;
    }
    if (doc.contains("model")) {
        const json& m = doc.at("model");
        expect_keys(m, "/model", {"hidden", "depth", "preset", "lambda_h"});
        read_to(m, "hidden", cfg.hidden);
        read_to(m, "depth", cfg.depth);
        read_to(m, "preset", cfg.preset);
        read_to(m, "lambda_h", cfg.lambda_h);
        if (cfg.preset != "gcn" && cfg.preset != "gcnii")
            throw ConfigError("unknown preset at /model/preset: " + cfg.preset);
    }
    if (doc.contains("train")) {
        const json& t = doc.at("train");
        expect_keys(t, "/train",
                    {"learning_rate", "l2_penalty", "epochs", "train_fraction",
                     "val_fraction"});
        read_to(t, "learning_rate", cfg.learning_rate);
        read_to(t, "l2_penalty", cfg.l2_penalty);
        read_to(t, "epochs", cfg.epochs);
        read_to(t, "train_fraction", cfg.train_fraction);
        read_to(t, "val_fraction", cfg.val_fraction);
    }
    read_to(doc, "schemes", cfg.scheme_names);
    read_to(doc, "ginit_d", cfg.ginit_d);
    read_to(doc, "seeds", cfg.seeds);
    read_to(doc, "probe_trials", cfg.probe_trials);
    read_to(doc, "spectrum_n", cfg.spectrum_n);
    read_to(doc, "adjacency", cfg.adjacency);
    if (cfg.adjacency != "symmetric" && cfg.adjacency != "row")
        throw ConfigError("unknown value at /adjacency: " + cfg.adjacency);
    if (cfg.seeds.empty()) throw ConfigError("empty list at /seeds");
    if (cfg.scheme_names.empty()) throw ConfigError("empty list at /schemes");
    cfg.schemes();  // validates the names eagerly
    return cfg;
}

AdjacencyVariant adjacency_variant(const RunConfig& cfg) {
    return cfg.adjacency == "row" ? AdjacencyVariant::Row
                                  : AdjacencyVariant::Symmetric;
}

// ---------------------------------------------------------------- reporting

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string fmt(std::size_t v) { return std::to_string(v); }

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

void write_report(const Table& table, const std::string& name, bool json_mode,
                  const std::optional<std::string>& out_dir) {
    std::ostringstream body;
    if (json_mode) {
        json arr = json::array();
        for (const auto& row : table.rows) {
            json obj;
            for (std::size_t i = 0; i < table.columns.size(); ++i)
                obj[table.columns[i]] = row[i];
            arr.push_back(obj);
        }
        body << json{{"report", name}, {"rows", arr}}.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            body << (i ? "," : "") << table.columns[i];
        body << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                body << (i ? "," : "") << row[i];
            body << "\n";
        }
    }
    if (out_dir) {
        fs::create_directories(*out_dir);
        fs::path p = fs::path(*out_dir) / (name + (json_mode ? ".json" : ".csv"));
        std::ofstream out(p);
        out << body.str();
        std::cerr << "wrote " << p.string() << "\n";
    } else {
        std::cout << body.str();
    }
}

struct Stats {
    std::size_t n = 0;
    double mean = 0.0;
    double std = 0.0;
};

Stats stats_of(const std::vector<double>& xs) {
    Stats s;
    s.n = xs.size();
    if (xs.empty()) return s;
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(xs.size());
    for (double x : xs) s.std += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(s.std / static_cast<double>(xs.size()));
    return s;
}

// ---------------------------------------------------------------- datasets

// stream ids per seed: 0 graph sample, 1 weights, 3 masks
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

NodeBundle dataset_for_seed(const RunConfig& cfg, std::uint64_t seed) {
    if (cfg.dataset) return load_node_bundle(*cfg.dataset);
    if (!cfg.sbm)
        throw ConfigError("config needs either /dataset or /sbm for this command");
    RngStream grng(seed, 0);
    auto sample = sbm_generate(grng, cfg.sbm->communities,
                               cfg.sbm->nodes_per_community, cfg.sbm->p_in,
                               cfg.sbm->p_out, cfg.sbm->feature_dim,
                               cfg.sbm->feature_noise);
    NodeBundle b;
    b.graph = std::move(sample.graph);
    b.features = std::move(sample.features);
    b.labels = std::move(sample.labels);
    RngStream mrng(seed, 3);
    b.masks = stratified_masks(b.labels, cfg.train_fraction, cfg.val_fraction, mrng);
    return b;
}

std::size_t class_count(const std::vector<int>& labels) {
    int c = 0;
    for (int l : labels) c = std::max(c, l + 1);
    if (c == 0) throw ConfigError("dataset has no labeled nodes");
    return static_cast<std::size_t>(c);
}

ModelConfig model_config(const RunConfig& cfg, std::size_t feature_dim,
                         std::size_t classes, std::size_t depth,
                         const InitScheme& scheme,
                         Task task = Task::NodeClassification) {
    ModelConfig mc = make_gcn_config(feature_dim, cfg.hidden, classes, depth,
                                     scheme, task);
    if (cfg.preset == "gcnii") {
        for (std::size_t l = 0; l + 1 < mc.layers.size(); ++l) {
            const auto spec = LayerSpec::gcnii(cfg.hidden, l + 1, cfg.lambda_h);
            mc.layers[l].alpha = spec.alpha;
            mc.layers[l].beta = spec.beta;
            mc.layers[l].delta = spec.delta;
            mc.layers[l].epsilon = spec.epsilon;
        }
    }
    mc.learning_rate = cfg.learning_rate;
    mc.l2_penalty = cfg.l2_penalty;
    mc.epochs = cfg.epochs;
    return mc;
}

TrainReport run_training(const RunConfig& cfg, const NodeBundle& bundle,
                         const InitScheme& scheme, std::size_t depth,
                         std::uint64_t seed) {
    auto mc = model_config(cfg, bundle.features.cols(),
                           class_count(bundle.labels), depth, scheme);
    auto na = normalize(bundle.graph, adjacency_variant(cfg));
    RngStream wrng(seed, 1);
    ModelState st = init_model(mc, wrng);
    return train(st, mc, na, bundle.features, bundle.labels, bundle.masks);
}

// ---------------------------------------------------------------- commands

struct GlobalArgs {
    std::string config_path;
    std::vector<std::uint64_t> seeds;
    std::optional<std::string> out_dir;
    bool json_mode = false;
};

RunConfig load_config(const GlobalArgs& ga, bool required = true) {
    RunConfig cfg;
    if (!ga.config_path.empty()) {
        cfg = parse_run_config(ga.config_path);
    } else if (required) {
        throw ConfigError("--config is required for this command");
    }
    if (!ga.seeds.empty()) cfg.seeds = ga.seeds;
    return cfg;
}

int cmd_init_stats(const GlobalArgs& ga, const std::string& scheme_name,
                   double ginit_d, std::vector<std::size_t> fans,
                   std::size_t samples, std::uint64_t seed) {
    if (samples < 10000)
        throw CLI::ValidationError("--samples must be at least 10000");
    const auto scheme = InitScheme::from_name(scheme_name, ginit_d);
    Table t;
    t.columns = {"scheme", "fan", "samples", "target_std", "empirical_std",
                 "rel_err", "pass"};
    bool all_pass = true;
    for (std::size_t fan : fans) {
        RngStream rng(seed, fan);
        const std::size_t rows = (samples + fan - 1) / fan;
        auto w = sample_weight(rng, scheme, fan, rows);
        double mean = 0.0;
        for (double v : w.values()) mean += v;
        mean /= w.size();
        double var = 0.0;
        for (double v : w.values()) var += (v - mean) * (v - mean);
        const double emp = std::sqrt(var / w.size());
        const double target = target_std(scheme, fan);
        const double rel = std::abs(emp - target) / target;
        const bool pass = rel <= 0.02;
        all_pass = all_pass && pass;
        t.add({scheme.name(), fmt(fan), fmt(rows * fan), fmt(target), fmt(emp),
               fmt(rel), pass ? "1" : "0"});
    }
    write_report(t, "init-stats", ga.json_mode, ga.out_dir);
    return all_pass ? kExitOk : kExitViolations;
}

int cmd_probe(const GlobalArgs& ga) {
    RunConfig cfg = load_config(ga);
    Table t;
    t.columns = {"layer",       "scheme",     "seed",        "forward_var",
                 "backward_var", "fwd_lower",  "fwd_upper",   "fwd_satisfied",
                 "bwd_lower",    "bwd_upper",  "bwd_satisfied"};
    std::size_t checked = 0, satisfied = 0;

    struct Agg {
        std::vector<double> fwd, bwd;
    };
    std::vector<std::vector<Agg>> agg;  // [scheme][layer]

    const auto schemes = cfg.schemes();
    agg.resize(schemes.size());
    for (std::size_t si = 0; si < schemes.size(); ++si) {
        const auto& scheme = schemes[si];
        agg[si].resize(cfg.depth);
        for (std::uint64_t seed : cfg.seeds) {
            auto bundle = dataset_for_seed(cfg, seed);
            auto mc = model_config(cfg, bundle.features.cols(),
                                   class_count(bundle.labels), cfg.depth, scheme);
            auto na = normalize(bundle.graph, adjacency_variant(cfg));
            RngStream frng(seed, 4), brng(seed, 5);
            auto fwd = probe_forward_variance(mc, bundle.graph, na,
                                              bundle.features, cfg.probe_trials,
                                              frng);
            std::vector<std::uint8_t> all_mask(bundle.graph.n, 1);
            auto bwd = probe_backward_variance(mc, bundle.graph, na,
                                               bundle.features, bundle.labels,
                                               all_mask, cfg.probe_trials, brng);
            const double d_i = fwd[0].mean_degree;
            double var_prev1 = 0.0, var_prev2 = 0.0;
            for (std::size_t l = 0; l < mc.layers.size(); ++l) {
                const double var_w =
                    std::pow(target_std(scheme, mc.layers[l].width_in), 2);
                auto fb = forward_bound(fwd[l], mc.layers[l], var_w, d_i,
                                        mc.layers[l].width_in, var_prev1,
                                        var_prev2);
                var_prev2 = var_prev1;
                var_prev1 = fwd[l].forward_var;
                std::string bl = "", bu = "", bs = "";
                if (l + 1 < mc.layers.size()) {
                    auto bb = backward_bound(bwd[l], bwd[l + 1], mc.layers[l],
                                             var_w, d_i, mc.layers[l].width_out);
                    bl = fmt(bb.lower);
                    bu = fmt(bb.upper);
                    bs = bb.satisfied ? "1" : "0";
                    ++checked;
                    if (bb.satisfied) ++satisfied;
                }
                ++checked;
                if (fb.satisfied) ++satisfied;
                agg[si][l].fwd.push_back(fwd[l].forward_var);
                agg[si][l].bwd.push_back(bwd[l].backward_var);
                t.add({fmt(l + 1), scheme.name(), std::to_string(seed),
                       fmt(fwd[l].forward_var), fmt(bwd[l].backward_var),
                       fmt(fb.lower), fmt(fb.upper), fb.satisfied ? "1" : "0",
                       bl, bu, bs});
            }
        }
    }
    // aggregate rows: mean/std over seeds, flagged by seed="aggregate"
    Table a;
    a.columns = {"layer", "scheme", "n_seeds", "forward_var_mean",
                 "forward_var_std", "backward_var_mean", "backward_var_std"};
    for (std::size_t si = 0; si < schemes.size(); ++si)
        for (std::size_t l = 0; l < cfg.depth; ++l) {
            auto f = stats_of(agg[si][l].fwd);
            auto b = stats_of(agg[si][l].bwd);
            a.add({fmt(l + 1), schemes[si].name(), fmt(f.n), fmt(f.mean),
                   fmt(f.std), fmt(b.mean), fmt(b.std)});
        }
    write_report(t, "probe", ga.json_mode, ga.out_dir);
    write_report(a, "probe-aggregate", ga.json_mode, ga.out_dir);
    const double rate =
        checked ? static_cast<double>(satisfied) / static_cast<double>(checked)
                : 1.0;
    std::cerr << "bound satisfaction: " << satisfied << "/" << checked << "\n";
    return rate >= 0.95 ? kExitOk : kExitViolations;
}

int sweep_core(const GlobalArgs& ga, const std::vector<std::size_t>& depths,
               bool cold) {
    RunConfig cfg = load_config(ga);
    if (depths.empty()) throw CLI::ValidationError("--depths must be nonempty");
    Table t;
    t.columns = {"depth", "scheme", "seed", "test_accuracy", "best_epoch"};
    Table a;
    a.columns = {"depth", "scheme", "n_seeds", "mean_accuracy", "std_accuracy"};
    Table best;
    best.columns = {"scheme", "n_seeds", "best_accuracy_mean",
                    "best_accuracy_std", "best_depth"};
    for (const auto& scheme : cfg.schemes()) {
        double best_mean = -1.0;
        Stats best_stats;
        std::size_t best_depth = 0;
        for (std::size_t depth : depths) {
            std::vector<double> accs;
            for (std::uint64_t seed : cfg.seeds) {
                auto bundle = dataset_for_seed(cfg, seed);
                if (cold) bundle = cold_start(bundle);
                auto report = run_training(cfg, bundle, scheme, depth, seed);
                accs.push_back(report.best_val_test_accuracy);
                t.add({fmt(depth), scheme.name(), std::to_string(seed),
                       fmt(report.best_val_test_accuracy),
                       fmt(report.best_epoch)});
            }
            auto s = stats_of(accs);
            a.add({fmt(depth), scheme.name(), fmt(s.n), fmt(s.mean), fmt(s.std)});
            if (s.mean > best_mean) {
                best_mean = s.mean;
                best_stats = s;
                best_depth = depth;
            }
        }
        best.add({scheme.name(), fmt(best_stats.n), fmt(best_stats.mean),
                  fmt(best_stats.std), fmt(best_depth)});
    }
    const char* name = cold ? "coldstart" : "sweep-depth";
    write_report(t, name, ga.json_mode, ga.out_dir);
    write_report(a, std::string(name) + "-aggregate", ga.json_mode, ga.out_dir);
    if (cold) write_report(best, "coldstart-best", ga.json_mode, ga.out_dir);
    return kExitOk;
}

int cmd_graphcls(const GlobalArgs& ga) {
    RunConfig cfg = load_config(ga);
    if (!cfg.graph_set)
        throw ConfigError("config needs /graph_set for this command");
    auto set = load_graph_set(*cfg.graph_set);
    auto batch = set.batched();
    auto na = normalize(batch.graph, adjacency_variant(cfg));

    // per-graph stratified split over the graph list
    Table t;
    t.columns = {"scheme", "seed", "test_accuracy"};
    Table a;
    a.columns = {"scheme", "n_seeds", "mean_accuracy", "std_accuracy"};
    const std::size_t classes = class_count(batch.labels);
    for (const auto& scheme : cfg.schemes()) {
        std::vector<double> accs;
        for (std::uint64_t seed : cfg.seeds) {
            RngStream mrng(seed, 3);
            auto masks = stratified_masks(batch.labels, cfg.train_fraction,
                                          cfg.val_fraction, mrng);
            auto mc = model_config(cfg, batch.features.cols(), classes,
                                   cfg.depth, scheme, Task::GraphClassification);
            RngStream wrng(seed, 1);
            ModelState st = init_model(mc, wrng);
            auto report = train(st, mc, na, batch.features, batch.labels, masks,
                                &batch.graph_ids);
            accs.push_back(report.best_val_test_accuracy);
            t.add({scheme.name(), std::to_string(seed),
                   fmt(report.best_val_test_accuracy)});
        }
        auto s = stats_of(accs);
        a.add({scheme.name(), fmt(s.n), fmt(s.mean), fmt(s.std)});
    }
    write_report(t, "graphcls", ga.json_mode, ga.out_dir);
    write_report(a, "graphcls-aggregate", ga.json_mode, ga.out_dir);
    return kExitOk;
}

int cmd_spectrum(const GlobalArgs& ga) {
    RunConfig cfg = load_config(ga);
    Table t;
    t.columns = {"scheme", "seed", "layer", "sigma_max", "product_s", "s_lambda"};
    Table c;
    c.columns = {"scheme", "seed", "predicted_radius", "empirical_radius",
                 "radial_ks", "pass"};
    bool all_pass = true;

    // lambda needs a graph; report without it when none is configured
    double lambda = std::numeric_limits<double>::quiet_NaN();
    if (cfg.dataset || cfg.sbm) {
        auto bundle = dataset_for_seed(cfg, cfg.seeds.front());
        try {
            lambda = spectral_gap(normalize(bundle.graph, AdjacencyVariant::Symmetric));
        } catch (const std::domain_error& e) {
            std::cerr << "spectral gap unavailable: " << e.what() << "\n";
        }
    }
    for (const auto& scheme : cfg.schemes()) {
        for (std::uint64_t seed : cfg.seeds) {
            auto mc = model_config(cfg, cfg.hidden, cfg.hidden, cfg.depth, scheme);
            RngStream wrng(seed, 1);
            ModelState st = init_model(mc, wrng);
            for (const auto& rec : weight_spectrum(st, lambda))
                t.add({scheme.name(), std::to_string(seed), fmt(rec.layer),
                       fmt(rec.sigma_max), fmt(rec.product_s),
                       std::isnan(lambda) ? "" : fmt(rec.s_lambda)});

            RngStream crng(seed, 6);
            auto rep = circular_law_check(scheme, cfg.spectrum_n, crng);
            const bool pass =
                std::abs(rep.empirical_radius - rep.predicted_radius) <=
                    0.15 * rep.predicted_radius &&
                rep.radial_ks <= 0.1;
            all_pass = all_pass && pass;
            c.add({scheme.name(), std::to_string(seed), fmt(rep.predicted_radius),
                   fmt(rep.empirical_radius), fmt(rep.radial_ks),
                   pass ? "1" : "0"});
        }
    }
    write_report(t, "spectrum", ga.json_mode, ga.out_dir);
    write_report(c, "circular-law", ga.json_mode, ga.out_dir);
    return all_pass ? kExitOk : kExitViolations;
}

int cmd_gen_sbm(const GlobalArgs& ga, const SbmParams& p, double train_frac,
                double val_frac, std::uint64_t seed, const std::string& out_dir) {
    RngStream grng(seed, 0);
    auto sample = sbm_generate(grng, p.communities, p.nodes_per_community, p.p_in,
                               p.p_out, p.feature_dim, p.feature_noise);
    NodeBundle b;
    b.graph = std::move(sample.graph);
    b.features = std::move(sample.features);
    b.labels = std::move(sample.labels);
    RngStream mrng(seed, 3);
    b.masks = stratified_masks(b.labels, train_frac, val_frac, mrng);
    save_node_bundle(b, out_dir);
    std::cerr << "wrote node bundle to " << out_dir << "\n";
    (void)ga;
    return kExitOk;
}

int cmd_export_embeddings(const GlobalArgs& ga, const std::string& scheme_name,
                          std::size_t layer, bool trained,
                          const std::string& out_file) {
    RunConfig cfg = load_config(ga);
    const auto scheme = InitScheme::from_name(scheme_name, cfg.ginit_d);
    const std::uint64_t seed = cfg.seeds.front();
    auto bundle = dataset_for_seed(cfg, seed);
    auto mc = model_config(cfg, bundle.features.cols(),
                           class_count(bundle.labels), cfg.depth, scheme);
    auto na = normalize(bundle.graph, adjacency_variant(cfg));
    RngStream wrng(seed, 1);
    ModelState st = init_model(mc, wrng);
    if (trained)
        train(st, mc, na, bundle.features, bundle.labels, bundle.masks);
    forward(st, mc, na, bundle.features);
    export_embeddings(st, mc, bundle.labels, layer, out_file);
    std::cerr << "wrote " << out_file << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gnnlab: variance-aware GNN initialization laboratory"};
    app.require_subcommand(1);

    GlobalArgs ga;
    app.add_option("--config", ga.config_path, "JSON run configuration")
        ->expected(1);
    app.add_option("--seed", ga.seeds, "seed list (overrides config)")
        ->delimiter(',');
    std::string out_dir;
    auto* out_opt = app.add_option("--out", out_dir, "output directory");
    app.add_flag("--json", ga.json_mode, "emit JSON instead of CSV");
    app.fallthrough();

    // init-stats
    auto* init_cmd = app.add_subcommand("init-stats",
                                        "empirical vs target initializer std");
    std::string scheme_name = "g-init";
    double ginit_d = 2.0;
    std::vector<std::size_t> fans = {64, 128, 256};
    std::size_t samples = 1000000;
    std::uint64_t init_seed = 0;
    init_cmd->add_option("--scheme", scheme_name, "initializer name");
    init_cmd->add_option("--ginit-d", ginit_d, "G-Init mean-degree parameter");
    init_cmd->add_option("--fan", fans, "fan-in values")->delimiter(',');
    init_cmd->add_option("--samples", samples, "sample count (>= 10000)");
    init_cmd->add_option("--init-seed", init_seed, "rng seed");

    auto* probe_cmd = app.add_subcommand("probe",
                                         "per-layer variance and bound report");

    std::vector<std::size_t> depths = {2, 8, 16, 32};
    auto* sweep_cmd = app.add_subcommand("sweep-depth",
                                         "accuracy vs depth sweep");
    sweep_cmd->add_option("--depths", depths, "depth list")->delimiter(',');

    auto* cold_cmd = app.add_subcommand("coldstart",
                                        "cold-start depth sweep (explicit opt-in)");
    bool cold_flag = false;
    cold_cmd->add_option("--depths", depths, "depth list")->delimiter(',');
    cold_cmd->add_flag("--cold-start", cold_flag,
                       "confirm zeroing features outside the train split");

    auto* graph_cmd = app.add_subcommand("graphcls",
                                         "graph classification with mean readout");

    auto* spec_cmd = app.add_subcommand("spectrum",
                                        "weight spectrum and circular-law check");

    auto* gen_cmd = app.add_subcommand("gen-sbm", "write an SBM node bundle");
    SbmParams gp;
    double gen_train = 0.1, gen_val = 0.1;
    std::uint64_t gen_seed = 0;
    gen_cmd->add_option("--communities", gp.communities);
    gen_cmd->add_option("--nodes-per-community", gp.nodes_per_community);
    gen_cmd->add_option("--p-in", gp.p_in);
    gen_cmd->add_option("--p-out", gp.p_out);
    gen_cmd->add_option("--feature-dim", gp.feature_dim);
    gen_cmd->add_option("--feature-noise", gp.feature_noise);
    gen_cmd->add_option("--train-fraction", gen_train);
    gen_cmd->add_option("--val-fraction", gen_val);
    gen_cmd->add_option("--gen-seed", gen_seed);

    auto* exp_cmd = app.add_subcommand("export-embeddings",
                                       "export H^(layer) as CSV");
    std::string exp_scheme = "g-init";
    std::size_t exp_layer = 0;
    bool exp_trained = false;
    std::string exp_file = "embeddings.csv";
    exp_cmd->add_option("--scheme", exp_scheme);
    exp_cmd->add_option("--layer", exp_layer);
    exp_cmd->add_flag("--trained", exp_trained, "train before exporting");
    exp_cmd->add_option("--file", exp_file, "output CSV path");

    CLI11_PARSE(app, argc, argv);
    if (*out_opt) ga.out_dir = out_dir;

    try {
        if (*init_cmd)
            return cmd_init_stats(ga, scheme_name, ginit_d, fans, samples,
                                  init_seed);
        if (*probe_cmd) return cmd_probe(ga);
        if (*sweep_cmd) return sweep_core(ga, depths, false);
        if (*cold_cmd) {
            if (!cold_flag) {
                std::cerr << "coldstart refuses without --cold-start: it zeroes "
                             "the features of every node outside the train split\n";
                return kExitError;
            }
            return sweep_core(ga, depths, true);
        }
        if (*graph_cmd) return cmd_graphcls(ga);
        if (*spec_cmd) return cmd_spectrum(ga);
        if (*gen_cmd) {
            if (!ga.out_dir) throw ConfigError("gen-sbm requires --out <dir>");
            return cmd_gen_sbm(ga, gp, gen_train, gen_val, gen_seed, *ga.out_dir);
        }
        if (*exp_cmd)
            return cmd_export_embeddings(ga, exp_scheme, exp_layer, exp_trained,
                                         exp_file);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
