#pragma once

#include <cstddef>
#include <vector>

#include "gnnlab/graph.hpp"
#include "gnnlab/init.hpp"
#include "gnnlab/model.hpp"

namespace gnnlab {

/// Per-layer variance measurements at initialization, pooled over
/// nodes x channels, plus the data-dependent terms the bound formulas need.
struct VarianceRecord {
    std::size_t layer = 0;       // 1-based
    double forward_var = 0.0;    // Var over entries of Y^(l)
    double backward_var = 0.0;   // Var over entries of the aggregated-input adjoint
    double x_prime_sq = 0.0;     // E[(x')^2] of the aggregated input
    double k_term = 0.0;         // mean_i sum_{j in N(i)} mean_c (H^(l-1)_j)^2
    double o_term = 0.0;         // mean_i sum_{j in N(i)} mean_c (dX^(l)_j)^2
    double x0_sq = 0.0;          // E[(x_0)^2]
    double mean_degree = 1.0;    // mean augmented degree of the probed graph
};

struct BoundRecord {
    std::size_t layer = 0;
    double lower = 0.0;
    double upper = 0.0;
    double measured = 0.0;
    bool satisfied = false;
};

std::vector<VarianceRecord> probe_forward_variance(
    const ModelConfig& config, const Graph& g, const NormalizedAdjacency& na,
    const DenseMatrix& x0, std::size_t n_trials, RngStream& rng);

std::vector<VarianceRecord> probe_backward_variance(
    const ModelConfig& config, const Graph& g, const NormalizedAdjacency& na,
    const DenseMatrix& x0, const std::vector<int>& labels,
    const std::vector<std::uint8_t>& mask, std::size_t n_trials, RngStream& rng);

/// Forward variance sandwich of layer l from measured terms of that layer.
/// var_prev1/var_prev2 are Var[y_{l-1}], Var[y_{l-2}].
BoundRecord forward_bound(const VarianceRecord& terms, const LayerSpec& spec,
                          double var_w, double d_i, std::size_t n_l,
                          double var_prev1, double var_prev2);

/// Backward variance sandwich of layer l. Pass layer l's spec, weight
/// variance and output width; the recurrence is driven by layer l+1's
/// measured gradient variance and its neighbor-gradient term.
BoundRecord backward_bound(const VarianceRecord& terms,
                           const VarianceRecord& next_terms, const LayerSpec& spec,
                           double var_w, double d_i, std::size_t n_l);

/// Frobenius distance of h from the oversmoothing subspace spanned, per
/// connected component, by D_hat^{1/2} * 1.
double oversmoothing_distance(const DenseMatrix& h, const Graph& g);

struct SpectrumRecord {
    std::size_t layer = 0;
    double sigma_max = 0.0;
    double product_s = 0.0;  // running product of sigma_max
    double s_lambda = 0.0;   // product_s * lambda
};

std::vector<SpectrumRecord> weight_spectrum(const ModelState& state, double lambda);

struct CircularLawReport {
    double empirical_radius = 0.0;
    double predicted_radius = 0.0;
    double radial_ks = 0.0;  // KS of (|eig|/radius)^2 against U[0,1]
};

CircularLawReport circular_law_check(const InitScheme& scheme, std::size_t n,
                                     RngStream& rng);

}  // namespace gnnlab
