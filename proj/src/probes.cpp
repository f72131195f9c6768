#include "gnnlab/probes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gnnlab {

namespace {

double entry_variance(const DenseMatrix& m) {
    if (m.size() == 0) return 0.0;
    double mean = 0.0;
    for (double v : m.values()) mean += v;
    mean /= static_cast<double>(m.size());
    double var = 0.0;
    for (double v : m.values()) var += (v - mean) * (v - mean);
    return var / static_cast<double>(m.size());
}

double entry_second_moment(const DenseMatrix& m) {
    if (m.size() == 0) return 0.0;
    double s = 0.0;
    for (double v : m.values()) s += v * v;
    return s / static_cast<double>(m.size());
}

// mean over nodes i of sum_{j in N(i)} mean_c (rows[j])^2
double neighbor_square_sum(const DenseMatrix& rows,
                           const std::vector<std::vector<std::size_t>>& nbr) {
    double total = 0.0;
    std::vector<double> row_sq(rows.rows(), 0.0);
    for (std::size_t i = 0; i < rows.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < rows.cols(); ++j) s += rows(i, j) * rows(i, j);
        row_sq[i] = s / static_cast<double>(rows.cols());
    }
    for (std::size_t i = 0; i < rows.rows(); ++i) {
        double k = 0.0;
        for (std::size_t j : nbr[i]) k += row_sq[j];
        total += k;
    }
    return total / static_cast<double>(rows.rows());
}

double mean_degree(const Graph& g) {
    const auto deg = g.augmented_degrees();
    double s = 0.0;
    for (double d : deg) s += d;
    return s / static_cast<double>(deg.size());
}

}  // namespace

std::vector<VarianceRecord> probe_forward_variance(
    const ModelConfig& config, const Graph& g, const NormalizedAdjacency& na,
    const DenseMatrix& x0, std::size_t n_trials, RngStream& rng) {
    if (n_trials == 0) throw std::invalid_argument("probe: n_trials == 0");
    const std::size_t L = config.layers.size();
    const auto nbr = g.neighbor_lists();
    const double dbar = mean_degree(g);
    const double x0_sq = entry_second_moment(x0);

    std::vector<VarianceRecord> out(L);
    for (std::size_t l = 0; l < L; ++l) {
        out[l].layer = l + 1;
        out[l].x0_sq = x0_sq;
        out[l].mean_degree = dbar;
    }
    for (std::size_t t = 0; t < n_trials; ++t) {
        RngStream trial = rng.split(t);
        ModelState st = init_model(config, trial);
        forward(st, config, na, x0);
        for (std::size_t l = 1; l <= L; ++l) {
            out[l - 1].forward_var += entry_variance(st.preactivations[l - 1]);
            out[l - 1].x_prime_sq += entry_second_moment(st.aggregated[l - 1]);
            out[l - 1].k_term += neighbor_square_sum(st.activations[l - 1], nbr);
        }
    }
    for (auto& r : out) {
        r.forward_var /= static_cast<double>(n_trials);
        r.x_prime_sq /= static_cast<double>(n_trials);
        r.k_term /= static_cast<double>(n_trials);
    }
    return out;
}

std::vector<VarianceRecord> probe_backward_variance(
    const ModelConfig& config, const Graph& g, const NormalizedAdjacency& na,
    const DenseMatrix& x0, const std::vector<int>& labels,
    const std::vector<std::uint8_t>& mask, std::size_t n_trials, RngStream& rng) {
    if (n_trials == 0) throw std::invalid_argument("probe: n_trials == 0");
    const std::size_t L = config.layers.size();
    const auto nbr = g.neighbor_lists();
    const double dbar = mean_degree(g);

    std::vector<VarianceRecord> out(L);
    for (std::size_t l = 0; l < L; ++l) {
        out[l].layer = l + 1;
        out[l].mean_degree = dbar;
    }
    for (std::size_t t = 0; t < n_trials; ++t) {
        RngStream trial = rng.split(t);
        ModelState st = init_model(config, trial);
        forward(st, config, na, x0);
        loss_and_grad(st, config, na, x0, labels, mask);
        for (std::size_t l = 1; l <= L; ++l) {
            const DenseMatrix& dx = st.aggregated_adjoints[l - 1];
            out[l - 1].backward_var += entry_variance(dx);
            out[l - 1].o_term += neighbor_square_sum(dx, nbr);
        }
    }
    for (auto& r : out) {
        r.backward_var /= static_cast<double>(n_trials);
        r.o_term /= static_cast<double>(n_trials);
    }
    return out;
}

BoundRecord forward_bound(const VarianceRecord& terms, const LayerSpec& spec,
                          double var_w, double d_i, std::size_t n_l,
                          double var_prev1, double var_prev2) {
    if (var_w < 0) throw std::invalid_argument("forward_bound: var_w < 0");
    if (d_i < 1) throw std::invalid_argument("forward_bound: d_i < 1");
    const double a2 = spec.alpha * spec.alpha;
    const double j_term = a2 * terms.k_term / (d_i * d_i) +
                          spec.beta * spec.beta * terms.x0_sq;
    const double inner = a2 / (2.0 * d_i * d_i) * var_prev1 +
                         spec.gamma * spec.gamma / 2.0 * var_prev2 + j_term;
    const double w_factor = spec.delta * spec.delta * var_w + spec.epsilon * spec.epsilon;
    const double csb_factor = d_i + (spec.beta != 0.0 ? 1.0 : 0.0) +
                              (spec.gamma != 0.0 ? 1.0 : 0.0);
    BoundRecord rec;
    rec.layer = terms.layer;
    rec.lower = static_cast<double>(n_l) * inner * w_factor;
    rec.upper = csb_factor * rec.lower;
    rec.measured = terms.forward_var;
    rec.satisfied = rec.measured >= rec.lower && rec.measured <= rec.upper;
    return rec;
}

BoundRecord backward_bound(const VarianceRecord& terms,
                           const VarianceRecord& next_terms, const LayerSpec& spec,
                           double var_w, double d_i, std::size_t n_l) {
    const double var_next = next_terms.backward_var;
    if (var_w < 0) throw std::invalid_argument("backward_bound: var_w < 0");
    if (d_i < 1) throw std::invalid_argument("backward_bound: d_i < 1");
    const double a2 = spec.alpha * spec.alpha;
    const double g2 = spec.gamma * spec.gamma;
    const double csb_factor = d_i + (spec.gamma != 0.0 ? 1.0 : 0.0);
    const double w_factor = spec.delta * spec.delta * var_w + spec.epsilon * spec.epsilon;
    const double m_w = 0.5 * static_cast<double>(n_l) * csb_factor * w_factor;
    const double m_w_lo = m_w / csb_factor;
    const double q_term = a2 * next_terms.o_term / (d_i * d_i);
    const double driver = a2 / (d_i * d_i) * var_next + q_term;

    auto branch = [&](double m) {
        const double denom = 1.0 - g2 * m;
        if (denom == 0.0)
            throw std::domain_error("backward_bound: gamma^2 * m_w == 1 singularity");
        return m / denom * driver;
    };
    // the CSB direction flips once m_w crosses gamma^{-2}
    double hi = branch(m_w);
    double lo = branch(m_w_lo);
    if (spec.gamma != 0.0 && m_w * g2 >= 1.0) std::swap(hi, lo);

    BoundRecord rec;
    rec.layer = terms.layer;
    rec.lower = std::min(lo, hi);
    rec.upper = std::max(lo, hi);
    rec.measured = terms.backward_var;
    rec.satisfied = rec.measured >= rec.lower && rec.measured <= rec.upper;
    return rec;
}

double oversmoothing_distance(const DenseMatrix& h, const Graph& g) {
    if (h.rows() != g.n)
        throw DimensionError("oversmoothing_distance: row count != node count");
    const auto deg = g.augmented_degrees();
    const auto comp = g.components();
    const std::size_t n_comp =
        g.n == 0 ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;

    // orthonormal basis of M: one D^{1/2}*1 vector per component
    std::vector<std::vector<double>> basis(n_comp, std::vector<double>(g.n, 0.0));
    for (std::size_t i = 0; i < g.n; ++i) basis[comp[i]][i] = std::sqrt(deg[i]);
    for (auto& b : basis) {
        double norm = 0.0;
        for (double v : b) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : b) v /= norm;
    }

    double dist_sq = 0.0;
    for (std::size_t j = 0; j < h.cols(); ++j) {
        std::vector<double> col(g.n);
        for (std::size_t i = 0; i < g.n; ++i) col[i] = h(i, j);
        for (const auto& b : basis) {
            double proj = 0.0;
            for (std::size_t i = 0; i < g.n; ++i) proj += b[i] * col[i];
            for (std::size_t i = 0; i < g.n; ++i) col[i] -= proj * b[i];
        }
        for (double v : col) dist_sq += v * v;
    }
    return std::sqrt(dist_sq);
}

std::vector<SpectrumRecord> weight_spectrum(const ModelState& state, double lambda) {
    std::vector<SpectrumRecord> out;
    double product = 1.0;
    for (std::size_t l = 0; l < state.weights.size(); ++l) {
        SpectrumRecord rec;
        rec.layer = l + 1;
        rec.sigma_max = top_singular_value(state.weights[l]);
        product *= rec.sigma_max;
        rec.product_s = product;
        rec.s_lambda = product * lambda;
        out.push_back(rec);
    }
    return out;
}

CircularLawReport circular_law_check(const InitScheme& scheme, std::size_t n,
                                     RngStream& rng) {
    if (n > kDenseEigCap)
        throw std::invalid_argument("circular_law_check: n above dense-eig cap");
    const DenseMatrix w = sample_weight(rng, scheme, n, n);
    const auto eig = general_eig(w);

    CircularLawReport rep;
    rep.predicted_radius = predicted_disk_radius(scheme, n);
    std::vector<double> radial;
    radial.reserve(eig.size());
    for (const auto& z : eig) {
        const double r = std::abs(z);
        rep.empirical_radius = std::max(rep.empirical_radius, r);
        if (rep.predicted_radius > 0.0) {
            const double u = (r / rep.predicted_radius) * (r / rep.predicted_radius);
            radial.push_back(std::min(u, 1.0));
        }
    }
    // KS statistic against U[0,1]
    std::sort(radial.begin(), radial.end());
    double ks = 0.0;
    const double m = static_cast<double>(radial.size());
    for (std::size_t i = 0; i < radial.size(); ++i) {
        ks = std::max(ks, std::abs(static_cast<double>(i + 1) / m - radial[i]));
        ks = std::max(ks, std::abs(radial[i] - static_cast<double>(i) / m));
    }
    rep.radial_ks = ks;
    return rep;
}

}  // namespace gnnlab
