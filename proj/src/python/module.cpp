// Python bindings for the main operations: graphs, initializers, training,
// probes, and the spectral checkers.
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gnnlab/datasets.hpp"
#include "gnnlab/graph.hpp"
#include "gnnlab/init.hpp"
#include "gnnlab/model.hpp"
#include "gnnlab/probes.hpp"

namespace py = pybind11;
using namespace gnnlab;

namespace {

DenseMatrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw DimensionError("expected a 2-d float64 array");
    DenseMatrix m(static_cast<std::size_t>(a.shape(0)),
                  static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), m.data());
    return m;
}

py::array_t<double> to_array(const DenseMatrix& m) {
    py::array_t<double> a({m.rows(), m.cols()});
    std::copy(m.data(), m.data() + m.size(), a.mutable_data());
    return a;
}

AdjacencyVariant variant_of(const std::string& name) {
    if (name == "symmetric") return AdjacencyVariant::Symmetric;
    if (name == "row") return AdjacencyVariant::Row;
    throw std::invalid_argument("adjacency must be 'symmetric' or 'row'");
}

std::vector<std::uint8_t> to_mask(const std::vector<int>& v) {
    std::vector<std::uint8_t> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] ? 1 : 0;
    return out;
}

py::dict record_dict(const VarianceRecord& r) {
    py::dict d;
    d["layer"] = r.layer;
    d["forward_var"] = r.forward_var;
    d["backward_var"] = r.backward_var;
    d["x_prime_sq"] = r.x_prime_sq;
    d["k_term"] = r.k_term;
    d["o_term"] = r.o_term;
    d["x0_sq"] = r.x0_sq;
    d["mean_degree"] = r.mean_degree;
    return d;
}

ModelConfig build_config(std::size_t feature_dim, std::size_t hidden,
                         std::size_t classes, std::size_t depth,
                         const InitScheme& scheme, std::size_t epochs, double lr,
                         double l2, bool graph_task) {
    auto cfg = make_gcn_config(feature_dim, hidden, classes, depth, scheme,
                               graph_task ? Task::GraphClassification
                                          : Task::NodeClassification);
    cfg.epochs = epochs;
    cfg.learning_rate = lr;
    cfg.l2_penalty = l2;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "gnnlab core: graph convolution, initialization, and probes";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError",
                                             PyExc_RuntimeError);
    py::register_exception<BundleError>(m, "BundleError", PyExc_RuntimeError);

    py::class_<Graph>(m, "Graph")
        .def_readonly("n", &Graph::n)
        .def_property_readonly("edges",
                               [](const Graph& g) {
                                   py::list out;
                                   for (const auto& e : g.edges)
                                       out.append(py::make_tuple(e.u, e.v, e.w));
                                   return out;
                               })
        .def("augmented_degrees", &Graph::augmented_degrees)
        .def("components", &Graph::components)
        .def("__repr__", [](const Graph& g) {
            return "<Graph n=" + std::to_string(g.n) + " edges=" +
                   std::to_string(g.edges.size()) + ">";
        });

    py::class_<NormalizedAdjacency>(m, "NormalizedAdjacency")
        .def("to_dense",
             [](const NormalizedAdjacency& na) { return to_array(na.matrix.to_dense()); });

    py::class_<InitScheme>(m, "InitScheme")
        .def(py::init([](const std::string& name, double d) {
                 return InitScheme::from_name(name, d);
             }),
             py::arg("name"), py::arg("d") = 2.0)
        .def_property_readonly("name", &InitScheme::name)
        .def_readonly("d", &InitScheme::d)
        .def("__repr__",
             [](const InitScheme& s) { return "<InitScheme " + s.name() + ">"; });

    m.def("build_graph",
          [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
              return build_graph(n, edges);
          },
          py::arg("n"), py::arg("edges"));

    m.def("normalize",
          [](const Graph& g, const std::string& variant) {
              return normalize(g, variant_of(variant));
          },
          py::arg("graph"), py::arg("variant") = "symmetric");

    m.def("spectral_gap", &spectral_gap, py::arg("adjacency"));

    m.def("sbm_generate",
          [](std::uint64_t seed, std::size_t communities, std::size_t nodes_per_community,
             double p_in, double p_out, std::size_t feature_dim, double feature_noise) {
              RngStream rng(seed, 0);
              auto s = sbm_generate(rng, communities, nodes_per_community, p_in,
                                    p_out, feature_dim, feature_noise);
              return py::make_tuple(s.graph, to_array(s.features), s.labels);
          },
          py::arg("seed"), py::arg("communities"), py::arg("nodes_per_community"),
          py::arg("p_in"), py::arg("p_out"), py::arg("feature_dim") = 16,
          py::arg("feature_noise") = 0.1);

    m.def("jacobi_eigh",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
              auto r = jacobi_eigh(to_matrix(a));
              return py::make_tuple(r.eigenvalues, to_array(r.eigenvectors));
          },
          py::arg("matrix"));

    m.def("general_eig",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
              return general_eig(to_matrix(a));
          },
          py::arg("matrix"));

    m.def("top_singular_value",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
              return top_singular_value(to_matrix(a));
          },
          py::arg("matrix"));

    m.def("target_std", &target_std, py::arg("scheme"), py::arg("fan_in"));
    m.def("predicted_disk_radius", &predicted_disk_radius, py::arg("scheme"),
          py::arg("n"));
    m.def("sample_weight",
          [](std::uint64_t seed, const InitScheme& scheme, std::size_t fan_in,
             std::size_t cols) {
              RngStream rng(seed, 0);
              return to_array(sample_weight(rng, scheme, fan_in, cols));
          },
          py::arg("seed"), py::arg("scheme"), py::arg("fan_in"), py::arg("cols"));

    m.def("circular_law_check",
          [](const InitScheme& scheme, std::size_t n, std::uint64_t seed) {
              RngStream rng(seed, 0);
              auto r = circular_law_check(scheme, n, rng);
              py::dict d;
              d["empirical_radius"] = r.empirical_radius;
              d["predicted_radius"] = r.predicted_radius;
              d["radial_ks"] = r.radial_ks;
              return d;
          },
          py::arg("scheme"), py::arg("n"), py::arg("seed") = 0);

    m.def("oversmoothing_distance",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& h,
             const Graph& g) { return oversmoothing_distance(to_matrix(h), g); },
          py::arg("h"), py::arg("graph"));

    m.def("train_gcn",
          [](const Graph& g, const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
             const std::vector<int>& labels, const std::vector<int>& train_mask,
             const std::vector<int>& val_mask, const std::vector<int>& test_mask,
             const InitScheme& scheme, std::size_t hidden, std::size_t depth,
             std::size_t epochs, double lr, double l2, const std::string& adjacency,
             std::uint64_t seed) {
              auto x0 = to_matrix(features);
              int classes = 0;
              for (int l : labels) classes = std::max(classes, l + 1);
              auto cfg = build_config(x0.cols(), hidden,
                                      static_cast<std::size_t>(classes), depth,
                                      scheme, epochs, lr, l2, false);
              auto na = normalize(g, variant_of(adjacency));
              SplitMasks masks{to_mask(train_mask), to_mask(val_mask),
                               to_mask(test_mask)};
              RngStream wrng(seed, 1);
              ModelState st = init_model(cfg, wrng);
              auto report = train(st, cfg, na, x0, labels, masks);
              py::dict d;
              d["final_test_accuracy"] = report.final_test_accuracy;
              d["best_val_test_accuracy"] = report.best_val_test_accuracy;
              d["best_epoch"] = report.best_epoch;
              py::list epochs_out;
              for (const auto& e : report.epochs) {
                  py::dict row;
                  row["epoch"] = e.epoch;
                  row["train_loss"] = e.train_loss;
                  row["val_accuracy"] = e.val_accuracy;
                  row["test_accuracy"] = e.test_accuracy;
                  epochs_out.append(row);
              }
              d["epochs"] = epochs_out;
              return d;
          },
          py::arg("graph"), py::arg("features"), py::arg("labels"),
          py::arg("train_mask"), py::arg("val_mask"), py::arg("test_mask"),
          py::arg("scheme"), py::arg("hidden") = 128, py::arg("depth") = 2,
          py::arg("epochs") = 200, py::arg("learning_rate") = 1e-3,
          py::arg("l2_penalty") = 5e-4, py::arg("adjacency") = "symmetric",
          py::arg("seed") = 0);

    m.def("probe_forward_variance",
          [](const Graph& g, const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
             const InitScheme& scheme, std::size_t hidden, std::size_t depth,
             std::size_t trials, const std::string& adjacency, std::uint64_t seed) {
              auto x0 = to_matrix(features);
              auto cfg = build_config(x0.cols(), hidden, hidden, depth, scheme,
                                      0, 1e-3, 0.0, false);
              auto na = normalize(g, variant_of(adjacency));
              RngStream rng(seed, 4);
              py::list out;
              for (const auto& r :
                   probe_forward_variance(cfg, g, na, x0, trials, rng))
                  out.append(record_dict(r));
              return out;
          },
          py::arg("graph"), py::arg("features"), py::arg("scheme"),
          py::arg("hidden") = 16, py::arg("depth") = 8, py::arg("trials") = 20,
          py::arg("adjacency") = "row", py::arg("seed") = 0);

    m.def("probe_backward_variance",
          [](const Graph& g, const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
             const std::vector<int>& labels, const InitScheme& scheme,
             std::size_t hidden, std::size_t depth, std::size_t trials,
             const std::string& adjacency, std::uint64_t seed) {
              auto x0 = to_matrix(features);
              int classes = 0;
              for (int l : labels) classes = std::max(classes, l + 1);
              auto cfg = build_config(x0.cols(), hidden,
                                      static_cast<std::size_t>(classes), depth,
                                      scheme, 0, 1e-3, 0.0, false);
              auto na = normalize(g, variant_of(adjacency));
              std::vector<std::uint8_t> mask(g.n, 1);
              RngStream rng(seed, 5);
              py::list out;
              for (const auto& r : probe_backward_variance(cfg, g, na, x0, labels,
                                                           mask, trials, rng))
                  out.append(record_dict(r));
              return out;
          },
          py::arg("graph"), py::arg("features"), py::arg("labels"),
          py::arg("scheme"), py::arg("hidden") = 16, py::arg("depth") = 8,
          py::arg("trials") = 20, py::arg("adjacency") = "row",
          py::arg("seed") = 0);

    m.def("load_node_bundle",
          [](const std::string& dir) {
              auto b = load_node_bundle(dir);
              py::dict d;
              d["graph"] = b.graph;
              d["features"] = to_array(b.features);
              d["labels"] = b.labels;
              d["train_mask"] = std::vector<int>(b.masks.train.begin(),
                                                 b.masks.train.end());
              d["val_mask"] = std::vector<int>(b.masks.val.begin(),
                                               b.masks.val.end());
              d["test_mask"] = std::vector<int>(b.masks.test.begin(),
                                                b.masks.test.end());
              return d;
          },
          py::arg("directory"));
}
