#include <cmath>

#include "doctest.h"
#include "gnnlab/probes.hpp"

using namespace gnnlab;

namespace {

// ring plus antipodal chords: 3-regular for even n
Graph circulant3(std::size_t n) {
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n, 1.0);
    for (std::size_t i = 0; i < n / 2; ++i) edges.emplace_back(i, i + n / 2, 1.0);
    return build_graph(n, edges);
}

}  // namespace

TEST_CASE("forward_bound hand fixture, plain aggregation") {
    VarianceRecord r;
    r.layer = 3;
    r.forward_var = 0.6;
    r.k_term = 1.5;
    r.x0_sq = 7.0;  // must be ignored when beta == 0
    auto spec = LayerSpec::gcn(4, 4);
    auto rec = forward_bound(r, spec, 0.25, 2.0, 4, 0.8, 0.0);
    // j = 1.5/4, inner = 0.8/8 + 0.375, lower = 4 * 0.475 * 0.25
    CHECK(rec.lower == doctest::Approx(0.475).epsilon(1e-12));
    CHECK(rec.upper == doctest::Approx(0.95).epsilon(1e-12));
    CHECK(rec.measured == 0.6);
    CHECK(rec.satisfied);
    CHECK(rec.layer == 3);

    CHECK_THROWS_AS(forward_bound(r, spec, -1.0, 2.0, 4, 0.8, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(forward_bound(r, spec, 0.25, 0.5, 4, 0.8, 0.0),
                    std::invalid_argument);
}

TEST_CASE("forward_bound hand fixture, all parameters active") {
    VarianceRecord r;
    r.layer = 2;
    r.forward_var = 2.0;
    r.k_term = 0.9;
    r.x0_sq = 4.0;
    LayerSpec spec;
    spec.alpha = 0.5;
    spec.beta = 0.2;
    spec.gamma = 0.3;
    spec.delta = 0.8;
    spec.epsilon = 0.6;
    auto rec = forward_bound(r, spec, 0.5, 3.0, 5, 1.0, 2.0);
    // j = 0.25*0.9/9 + 0.04*4 = 0.185
    // inner = 0.25/18 + 0.09 + 0.185, w = 0.64*0.5 + 0.36 = 0.68
    const double inner = 0.25 / 18.0 + 0.09 + 0.185;
    CHECK(rec.lower == doctest::Approx(5.0 * inner * 0.68).epsilon(1e-12));
    // skip indicators add 2 to the degree factor
    CHECK(rec.upper == doctest::Approx(5.0 * rec.lower).epsilon(1e-12));
    CHECK(rec.satisfied);  // measured 2.0 is inside [0.982.., 4.91..]
    CHECK(rec.lower <= rec.upper);
}

TEST_CASE("backward_bound hand fixture") {
    VarianceRecord cur, nxt;
    cur.layer = 2;
    cur.backward_var = 0.2;
    nxt.backward_var = 0.8;
    nxt.o_term = 0.4;
    auto spec = LayerSpec::gcn(4, 4);
    auto rec = backward_bound(cur, nxt, spec, 0.25, 2.0, 4);
    // m_w = 0.5*4*2*0.25 = 1, driver = (0.8 + 0.4)/4 = 0.3
    CHECK(rec.upper == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(rec.lower == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(rec.measured == 0.2);
    CHECK(rec.satisfied);

    // gamma^2 * m_w == 1 is singular
    LayerSpec g = spec;
    g.gamma = 1.0;
    CHECK_THROWS_AS(backward_bound(cur, nxt, g, 1.0, 1.0, 1), std::domain_error);
}

TEST_CASE("backward_bound gamma recurrence and regime flip") {
    VarianceRecord cur, nxt;
    cur.layer = 1;
    cur.backward_var = 0.1;
    nxt.backward_var = 0.5;
    nxt.o_term = 0.2;
    LayerSpec spec = LayerSpec::gcn(2, 2);
    spec.gamma = 0.5;

    // small m_w regime: m_w = 0.5*2*(2+1)*0.1 = 0.3, gamma^2*m_w = 0.075
    auto rec = backward_bound(cur, nxt, spec, 0.1, 2.0, 2);
    const double driver = (0.5 + 0.2) / 4.0;
    const double hi = 0.3 / (1.0 - 0.25 * 0.3) * driver;
    const double lo = 0.1 / (1.0 - 0.25 * 0.1) * driver;
    CHECK(rec.upper == doctest::Approx(hi).epsilon(1e-12));
    CHECK(rec.lower == doctest::Approx(lo).epsilon(1e-12));

    // large m_w regime: the inequality direction flips
    auto rec2 = backward_bound(cur, nxt, spec, 10.0, 2.0, 2);
    CHECK(rec2.lower <= rec2.upper);
}

TEST_CASE("bounds are ordered for random parameters") {
    RngStream rng(41, 0);
    for (int i = 0; i < 200; ++i) {
        VarianceRecord cur, nxt;
        cur.backward_var = rng.next_uniform();
        cur.forward_var = rng.next_uniform();
        cur.k_term = rng.next_uniform();
        cur.x0_sq = rng.next_uniform();
        nxt.backward_var = rng.next_uniform();
        nxt.o_term = rng.next_uniform();
        LayerSpec spec;
        spec.alpha = rng.next_uniform();
        spec.beta = rng.next_uniform() < 0.5 ? 0.0 : rng.next_uniform();
        spec.gamma = 0.3 * rng.next_uniform();
        spec.delta = rng.next_uniform();
        spec.epsilon = rng.next_uniform();
        const double var_w = 0.5 * rng.next_uniform();
        const double d_i = 1.0 + 5.0 * rng.next_uniform();
        auto f = forward_bound(cur, spec, var_w, d_i, 8, rng.next_uniform(),
                               rng.next_uniform());
        CHECK(f.lower <= f.upper);
        auto b = backward_bound(cur, nxt, spec, var_w, d_i, 8);
        CHECK(b.lower <= b.upper);
    }
}

TEST_CASE("measured forward variance sits inside the sandwich") {
    RngStream rng(42, 0);
    auto g = circulant3(20);  // augmented degree exactly 4 everywhere
    auto na = normalize(g, AdjacencyVariant::Row);
    auto cfg = make_gcn_config(8, 16, 16, 4, {InitKind::GInit, 2.0});
    for (auto& l : cfg.layers) l.has_bias = false;
    auto x0 = sample_gaussian(rng, 20, 8, 0.0, 1.0);

    RngStream prng(43, 0);
    auto recs = probe_forward_variance(cfg, g, na, x0, 60, prng);
    REQUIRE(recs.size() == 4);
    const double d_i = 4.0;
    double var_prev1 = 0.0, var_prev2 = 0.0;
    for (std::size_t l = 0; l < recs.size(); ++l) {
        const double var_w =
            std::pow(target_std(cfg.init, cfg.layers[l].width_in), 2);
        auto rec = forward_bound(recs[l], cfg.layers[l], var_w, d_i,
                                 cfg.layers[l].width_in, var_prev1, var_prev2);
        CHECK(rec.measured >= rec.lower * 0.95);
        CHECK(rec.measured <= rec.upper * 1.05);
        var_prev2 = var_prev1;
        var_prev1 = recs[l].forward_var;
    }
}

TEST_CASE("measured backward variance sits inside the sandwich") {
    RngStream rng(44, 0);
    auto g = circulant3(20);
    auto na = normalize(g, AdjacencyVariant::Row);
    auto cfg = make_gcn_config(8, 16, 4, 4, {InitKind::GInit, 2.0});
    for (auto& l : cfg.layers) l.has_bias = false;
    auto x0 = sample_gaussian(rng, 20, 8, 0.0, 1.0);
    std::vector<int> labels(20);
    for (std::size_t i = 0; i < 20; ++i) labels[i] = static_cast<int>(i % 4);
    std::vector<std::uint8_t> mask(20, 1);

    RngStream prng(45, 0);
    auto recs = probe_backward_variance(cfg, g, na, x0, labels, mask, 60, prng);
    REQUIRE(recs.size() == 4);
    const double d_i = 4.0;
    for (std::size_t l = 0; l + 1 < recs.size(); ++l) {
        // the weight factor belongs to layer l; layer l+1 drives the recurrence
        const double var_w =
            std::pow(target_std(cfg.init, cfg.layers[l].width_in), 2);
        auto rec = backward_bound(recs[l], recs[l + 1], cfg.layers[l], var_w,
                                  d_i, cfg.layers[l].width_out);
        CHECK(rec.measured >= rec.lower * 0.95);
        CHECK(rec.measured <= rec.upper * 1.05);
    }
}

TEST_CASE("probe bookkeeping") {
    RngStream rng(46, 0);
    auto g = circulant3(8);
    auto na = normalize(g, AdjacencyVariant::Row);
    auto cfg = make_gcn_config(4, 4, 2, 2, {InitKind::KaimingNormal});
    auto x0 = sample_gaussian(rng, 8, 4, 0.0, 1.0);
    RngStream prng(47, 0);
    auto recs = probe_forward_variance(cfg, g, na, x0, 3, prng);
    CHECK(recs[0].layer == 1);
    CHECK(recs[1].layer == 2);
    CHECK(recs[0].mean_degree == doctest::Approx(4.0));
    double x0_sq = 0.0;
    for (double v : x0.values()) x0_sq += v * v;
    CHECK(recs[0].x0_sq == doctest::Approx(x0_sq / x0.size()));
    CHECK_THROWS_AS(probe_forward_variance(cfg, g, na, x0, 0, prng),
                    std::invalid_argument);

    // deterministic in the probe stream
    RngStream a(48, 0), b(48, 0);
    auto r1 = probe_forward_variance(cfg, g, na, x0, 2, a);
    auto r2 = probe_forward_variance(cfg, g, na, x0, 2, b);
    CHECK(r1[1].forward_var == r2[1].forward_var);
}

TEST_CASE("oversmoothing distance on known subspaces") {
    auto path2 = build_graph(2, {{0, 1, 1.0}});
    // degrees are (2, 2); D^{1/2} 1 is a constant direction
    DenseMatrix inside(2, 1, {3.0, 3.0});
    CHECK(oversmoothing_distance(inside, path2) == doctest::Approx(0.0).epsilon(1e-12));
    DenseMatrix ortho(2, 1, {1.0, -1.0});
    CHECK(oversmoothing_distance(ortho, path2) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    // asymmetric degrees: the subspace direction is sqrt(deg)
    auto path3 = build_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    auto deg = path3.augmented_degrees();
    DenseMatrix aligned(3, 1);
    for (std::size_t i = 0; i < 3; ++i) aligned(i, 0) = 0.7 * std::sqrt(deg[i]);
    CHECK(oversmoothing_distance(aligned, path3) == doctest::Approx(0.0).epsilon(1e-12));

    // per-component: different constants per component still lie in M
    auto two = build_graph(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    DenseMatrix h(4, 1, {5.0, 5.0, -2.0, -2.0});
    CHECK(oversmoothing_distance(h, two) == doctest::Approx(0.0).epsilon(1e-12));

    // non-expansive and Pythagorean split
    RngStream rng(49, 0);
    auto g = circulant3(10);
    auto hh = sample_gaussian(rng, 10, 5, 0.0, 1.0);
    const double d = oversmoothing_distance(hh, g);
    CHECK(d <= hh.frobenius_norm() + 1e-12);
    CHECK(d >= 0.0);

    DenseMatrix bad(3, 1);
    CHECK_THROWS_AS(oversmoothing_distance(bad, g), DimensionError);
}

TEST_CASE("weight_spectrum on identity weights") {
    ModelState st;
    st.weights.push_back(DenseMatrix::identity(3));
    st.weights.push_back(DenseMatrix::identity(3));
    auto spec = weight_spectrum(st, 0.25);
    REQUIRE(spec.size() == 2);
    CHECK(spec[0].sigma_max == doctest::Approx(1.0));
    CHECK(spec[1].product_s == doctest::Approx(1.0));
    CHECK(spec[1].s_lambda == doctest::Approx(0.25));
    CHECK(spec[0].layer == 1);
}

TEST_CASE("square weight sigma_max lands near twice the disk radius") {
    // n x n iid entries of std sigma: sigma_max ~ 2 sigma sqrt(n)
    const std::size_t n = 128;
    ModelState st;
    RngStream rng(50, 0);
    st.weights.push_back(sample_weight(rng, {InitKind::GInit, 2.0}, n, n));
    auto spec = weight_spectrum(st, 1.0);
    CHECK(spec[0].sigma_max == doctest::Approx(4.0).epsilon(0.10));

    ModelState st2;
    RngStream rng2(50, 1);
    st2.weights.push_back(sample_weight(rng2, {InitKind::KaimingNormal}, n, n));
    auto spec2 = weight_spectrum(st2, 1.0);
    CHECK(spec[0].sigma_max / spec2[0].sigma_max ==
          doctest::Approx(std::sqrt(2.0)).epsilon(0.10));
}

TEST_CASE("circular law radius and radial distribution") {
    const std::size_t n = 128;
    RngStream rng(51, 0);
    auto kaiming = circular_law_check({InitKind::KaimingNormal}, n, rng);
    CHECK(kaiming.predicted_radius == doctest::Approx(std::sqrt(2.0)));
    CHECK(kaiming.empirical_radius ==
          doctest::Approx(kaiming.predicted_radius).epsilon(0.15));
    CHECK(kaiming.radial_ks <= 0.1);

    RngStream rng2(51, 1);
    auto ginit = circular_law_check({InitKind::GInit, 2.0}, n, rng2);
    CHECK(ginit.predicted_radius == doctest::Approx(2.0));
    CHECK(ginit.empirical_radius / kaiming.empirical_radius ==
          doctest::Approx(std::sqrt(2.0)).epsilon(0.10));
    CHECK(ginit.radial_ks <= 0.1);

    CHECK_THROWS_AS(circular_law_check({InitKind::KaimingNormal}, 4096, rng),
                    std::invalid_argument);
}
