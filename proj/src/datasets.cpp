#include "gnnlab/datasets.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace gnnlab {

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw MissingFileError("missing file: " + p.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

double parse_real(const std::string& s, std::size_t line) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw RecordParseError("bad number '" + s + "'", line);
    }
}

std::string format_real(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

NodeBundle load_node_bundle(const std::filesystem::path& dir) {
    const auto feature_lines = read_lines(dir / "features.csv");
    const std::size_t n = feature_lines.size();
    if (n == 0) throw RaggedDataError("features.csv is empty");

    NodeBundle b;
    const std::size_t c = split(feature_lines[0], ',').size();
    b.features = DenseMatrix(n, c);
    for (std::size_t i = 0; i < n; ++i) {
        const auto parts = split(feature_lines[i], ',');
        if (parts.size() != c)
            throw RaggedDataError("features.csv: row " + std::to_string(i + 1) +
                                  " has " + std::to_string(parts.size()) +
                                  " fields, expected " + std::to_string(c));
        for (std::size_t j = 0; j < c; ++j)
            b.features(i, j) = parse_real(parts[j], i + 1);
    }

    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    const auto edge_lines = read_lines(dir / "edges.tsv");
    for (std::size_t i = 0; i < edge_lines.size(); ++i) {
        if (edge_lines[i].empty()) continue;
        const auto parts = split(edge_lines[i], '\t');
        if (parts.size() != 2 && parts.size() != 3)
            throw RecordParseError("edges.tsv: expected u<TAB>v[<TAB>w]", i + 1);
        const long u = std::stol(parts[0]);
        const long v = std::stol(parts[1]);
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n ||
            static_cast<std::size_t>(v) >= n)
            throw IndexRangeError("edges.tsv: node index out of range at line " +
                                  std::to_string(i + 1));
        const double w = parts.size() == 3 ? parse_real(parts[2], i + 1) : 1.0;
        edges.emplace_back(u, v, w);
    }
    b.graph = build_graph(n, edges);

    const auto label_lines = read_lines(dir / "labels.csv");
    if (label_lines.size() != n)
        throw RaggedDataError("labels.csv: row count != node count");
    for (std::size_t i = 0; i < n; ++i)
        b.labels.push_back(static_cast<int>(parse_real(label_lines[i], i + 1)));

    const auto mask_lines = read_lines(dir / "masks.csv");
    if (mask_lines.size() != n)
        throw RaggedDataError("masks.csv: row count != node count");
    b.masks.train.resize(n);
    b.masks.val.resize(n);
    b.masks.test.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto parts = split(mask_lines[i], ',');
        if (parts.size() != 3)
            throw RecordParseError("masks.csv: expected train,val,test flags", i + 1);
        b.masks.train[i] = parts[0] == "1";
        b.masks.val[i] = parts[1] == "1";
        b.masks.test[i] = parts[2] == "1";
        if (b.masks.train[i] + b.masks.val[i] + b.masks.test[i] > 1)
            throw MaskOverlapError("masks.csv: overlapping masks at line " +
                                   std::to_string(i + 1));
        if ((b.masks.train[i] || b.masks.val[i] || b.masks.test[i]) &&
            b.labels[i] < 0)
            throw IndexRangeError("masks.csv: masked node " + std::to_string(i) +
                                  " has no label");
    }
    return b;
}

void save_node_bundle(const NodeBundle& bundle, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "edges.tsv");
        for (const auto& e : bundle.graph.edges)
            out << e.u << '\t' << e.v << '\t' << format_real(e.w) << '\n';
    }
    {
        std::ofstream out(dir / "features.csv");
        for (std::size_t i = 0; i < bundle.features.rows(); ++i) {
            for (std::size_t j = 0; j < bundle.features.cols(); ++j) {
                if (j) out << ',';
                out << format_real(bundle.features(i, j));
            }
            out << '\n';
        }
    }
    {
        std::ofstream out(dir / "labels.csv");
        for (int l : bundle.labels) out << l << '\n';
    }
    {
        std::ofstream out(dir / "masks.csv");
        for (std::size_t i = 0; i < bundle.graph.n; ++i)
            out << int(bundle.masks.train[i]) << ',' << int(bundle.masks.val[i])
                << ',' << int(bundle.masks.test[i]) << '\n';
    }
}

NodeBundle cold_start(const NodeBundle& bundle) {
    NodeBundle out = bundle;
    for (std::size_t i = 0; i < out.graph.n; ++i) {
        if (out.masks.train[i]) continue;
        for (std::size_t j = 0; j < out.features.cols(); ++j)
            out.features(i, j) = 0.0;
    }
    return out;
}

GraphSetBundle load_graph_set(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    GraphSetBundle set;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(lines[i]);
        } catch (const nlohmann::json::exception& e) {
            throw RecordParseError(std::string("invalid JSON: ") + e.what(), i + 1);
        }
        try {
            const std::size_t n = rec.at("num_nodes").get<std::size_t>();
            std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
            for (const auto& e : rec.at("edges")) {
                const long u = e.at(0).get<long>();
                const long v = e.at(1).get<long>();
                if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n ||
                    static_cast<std::size_t>(v) >= n)
                    throw RecordParseError("edge index out of range", i + 1);
                edges.emplace_back(u, v, e.size() > 2 ? e.at(2).get<double>() : 1.0);
            }
            GraphRecord g;
            g.graph = build_graph(n, edges);
            const auto& feats = rec.at("features");
            if (feats.size() != n)
                throw RecordParseError("feature row count != num_nodes", i + 1);
            const std::size_t c = feats.at(0).size();
            g.features = DenseMatrix(n, c);
            for (std::size_t r = 0; r < n; ++r) {
                if (feats.at(r).size() != c)
                    throw RecordParseError("ragged feature rows", i + 1);
                for (std::size_t j = 0; j < c; ++j)
                    g.features(r, j) = feats.at(r).at(j).get<double>();
            }
            g.label = rec.at("label").get<int>();
            set.graphs.push_back(std::move(g));
        } catch (const RecordParseError&) {
            throw;
        } catch (const nlohmann::json::exception& e) {
            throw RecordParseError(std::string("malformed record: ") + e.what(), i + 1);
        }
    }
    if (set.graphs.empty()) throw BundleError("graph set is empty: " + path.string());
    return set;
}

GraphSetBundle::Batch GraphSetBundle::batched() const {
    Batch b;
    std::size_t offset = 0;
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    std::size_t total_nodes = 0;
    const std::size_t c = graphs.at(0).features.cols();
    for (const auto& g : graphs) total_nodes += g.graph.n;
    b.features = DenseMatrix(total_nodes, c);
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        const auto& g = graphs[gi];
        if (g.features.cols() != c)
            throw BundleError("graph set: inconsistent feature widths");
        for (const auto& e : g.graph.edges)
            edges.emplace_back(offset + e.u, offset + e.v, e.w);
        for (std::size_t i = 0; i < g.graph.n; ++i) {
            b.graph_ids.push_back(gi);
            for (std::size_t j = 0; j < c; ++j)
                b.features(offset + i, j) = g.features(i, j);
        }
        b.labels.push_back(g.label);
        offset += g.graph.n;
    }
    b.graph = build_graph(total_nodes, edges);
    return b;
}

void export_embeddings(const ModelState& state, const ModelConfig& config,
                       const std::vector<int>& labels, std::size_t layer,
                       const std::filesystem::path& path) {
    if (!state.forward_cached)
        throw std::logic_error("export_embeddings: no cached forward pass");
    if (layer >= state.activations.size())
        throw std::out_of_range("export_embeddings: layer out of range");
    (void)config;
    const DenseMatrix& h = state.activations[layer];
    std::ofstream out(path);
    if (!out) throw BundleError("cannot write " + path.string());
    out << "node,label";
    for (std::size_t j = 0; j < h.cols(); ++j) out << ",h" << j;
    out << '\n';
    for (std::size_t i = 0; i < h.rows(); ++i) {
        out << i << ',' << labels.at(i);
        for (std::size_t j = 0; j < h.cols(); ++j) out << ',' << format_real(h(i, j));
        out << '\n';
    }
}

}  // namespace gnnlab
