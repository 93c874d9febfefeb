#include <doctest.h>

#include "hyperflow/core.hpp"
#include "oracles.hpp"

using namespace hyperflow;

namespace {

// n=4, arcs ({0},{1,2}) and ({1,2},{3}); the toy instance used throughout.
OrientedHypergraph toy() {
    return build_hypergraph(4, {Hyperarc{{0}, {1, 2}}, Hyperarc{{1, 2}, {3}}});
}

}  // namespace

TEST_CASE("build_hypergraph computes degrees") {
    const auto h = toy();
    CHECK(h.degree == std::vector<std::uint32_t>{1, 2, 2, 1});
    CHECK(h.n_hyperarcs() == 2);
    CHECK(h.w_I == std::vector<double>(4, 1.0));
}

TEST_CASE("build_hypergraph rejects invalid input") {
    CHECK_THROWS_AS(build_hypergraph(3, {Hyperarc{{0}, {0, 1}}}), OverlappingSidesError);
    CHECK_THROWS_AS(build_hypergraph(3, {Hyperarc{{0}, {1}}, Hyperarc{{0}, {1}}}),
                    DuplicateHyperarcError);
    CHECK_THROWS_AS(build_hypergraph(3, {Hyperarc{{}, {1}}}), EmptySideError);
    CHECK_THROWS_AS(build_hypergraph(3, {Hyperarc{{0}, {5}}}), VertexOutOfRangeError);
    HypergraphWeights w;
    w.vertex_inner = {1.0, 0.0, 1.0};
    CHECK_THROWS_AS(build_hypergraph(3, {Hyperarc{{0}, {1}}}, w), NonpositiveWeightError);
}

TEST_CASE("vertex sides are stored as sorted sets") {
    const auto h = build_hypergraph(4, {Hyperarc{{2, 0}, {3, 1, 3}}});
    CHECK(h.hyperarcs[0].out == std::vector<VertexId>{0, 2});
    CHECK(h.hyperarcs[0].in == std::vector<VertexId>{1, 3});
}

TEST_CASE("vertex inner product") {
    const auto h = toy();
    CHECK(inner_product_vertex(h, {1, 1, 1, 1}, {1, 1, 1, 1}, {0.0, 0.0}) == doctest::Approx(4.0));

    HypergraphWeights w;
    w.vertex_inner = {2, 2, 2, 2};
    const auto h2 = build_hypergraph(4, {Hyperarc{{0}, {1, 2}}, Hyperarc{{1, 2}, {3}}}, w);
    CHECK(inner_product_vertex(h2, {1, 2, 3, 4}, {1, 1, 1, 1}, {1.0, 0.0}) ==
          doctest::Approx(20.0));

    CHECK(inner_product_vertex(h, {3, -1, 7, 2}, {0, 0, 0, 0}) == 0.0);
    CHECK_THROWS_AS(inner_product_vertex(h, {1, 2}, {1, 1, 1, 1}), LengthMismatchError);
}

TEST_CASE("hyperarc inner product") {
    const auto h = toy();
    CHECK(inner_product_hyperarc(h, {1, 1}, {1, 1}, {0.0, 0.0}) == doctest::Approx(2.0));

    HypergraphWeights w;
    w.hyperarc_inner = {3, 1};
    const auto h2 = build_hypergraph(4, {Hyperarc{{0}, {1, 2}}, Hyperarc{{1, 2}, {3}}}, w);
    CHECK(inner_product_hyperarc(h2, {1, 2}, {2, 1}, {0.0, 1.0}) == doctest::Approx(8.0));
    // 1^beta = 1, so beta is irrelevant under unit weights.
    CHECK(inner_product_hyperarc(h, {1, 2}, {2, 1}, {0.0, 0.0}) ==
          inner_product_hyperarc(h, {1, 2}, {2, 1}, {0.0, 1.0}));
}

TEST_CASE("inner products are symmetric, bilinear, positive definite") {
    std::mt19937_64 rng(42);
    oracle::InstanceOptions o;
    for (int t = 0; t < 20; ++t) {
        const auto [h, prm] = oracle::random_instance(rng, o);
        const auto f = oracle::random_state(rng, h.n_vertices);
        const auto g = oracle::random_state(rng, h.n_vertices);
        const auto e = oracle::random_state(rng, h.n_vertices);
        const InnerProductParams ip{1.3, 0.0};
        const double fg = inner_product_vertex(h, f, g, ip);
        CHECK(inner_product_vertex(h, g, f, ip) == doctest::Approx(fg));
        VertexState fe(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) fe[i] = 2.0 * f[i] + 3.0 * e[i];
        CHECK(inner_product_vertex(h, fe, g, ip) ==
              doctest::Approx(2.0 * fg + 3.0 * inner_product_vertex(h, e, g, ip)));
        bool nonzero = false;
        for (double x : f) nonzero |= x != 0.0;
        if (nonzero) CHECK(inner_product_vertex(h, f, f, ip) > 0.0);
    }
}

TEST_CASE("check_symmetric_hyperarc_weights") {
    HypergraphWeights w;
    w.hyperarc_grad = {2, 2};
    auto h = build_hypergraph(2, {Hyperarc{{0}, {1}}, Hyperarc{{1}, {0}}}, w);
    CHECK(check_symmetric_hyperarc_weights(h).symmetric);

    w.hyperarc_grad = {2, 3};
    h = build_hypergraph(2, {Hyperarc{{0}, {1}}, Hyperarc{{1}, {0}}}, w);
    const auto report = check_symmetric_hyperarc_weights(h);
    CHECK_FALSE(report.symmetric);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].weight == "W_G");

    // No reversed hyperarc stored: vacuously symmetric.
    const auto h3 = build_hypergraph(3, {Hyperarc{{0}, {1, 2}}});
    CHECK(check_symmetric_hyperarc_weights(h3).symmetric);
}

TEST_CASE("check_weight_condition") {
    OperatorParams prm;
    CHECK(check_weight_condition(toy(), prm));

    HypergraphWeights w;
    w.vertex_inner = {1.7, 0.6, 2.4};
    w.vertex_grad = {0.9, 1.1, 3.0};
    const auto h = build_hypergraph(3, {Hyperarc{{0}, {1, 2}}}, w);
    prm.alpha = prm.epsilon = prm.eta = 0.0;
    CHECK(check_weight_condition(h, prm));  // all factors are 1

    HypergraphWeights w2;
    w2.vertex_inner = {1, 2};
    const auto h2 = build_hypergraph(2, {Hyperarc{{0}, {1}}}, w2);
    OperatorParams prm2;
    prm2.alpha = 1.0;
    CHECK_FALSE(check_weight_condition(h2, prm2));  // 2 != 1
}

TEST_CASE("degree matches a brute-force recount on random instances") {
    std::mt19937_64 rng(7);
    oracle::InstanceOptions o;
    o.max_vertices = 20;
    for (int t = 0; t < 25; ++t) {
        const auto [h, prm] = oracle::random_instance(rng, o);
        for (VertexId v = 0; v < h.n_vertices; ++v) {
            std::uint32_t count = 0;
            for (const auto& a : h.hyperarcs) {
                count += oracle::contains(a.out, v) || oracle::contains(a.in, v) ? 1 : 0;
            }
            CHECK(h.degree[v] == count);
        }
    }
}

TEST_CASE("simplified params forbid nonzero exponents") {
    OperatorParams p = OperatorParams::simplified();
    CHECK_NOTHROW(p.validate());
    p.gamma = 0.5;
    CHECK_THROWS_AS(p.validate(), Error);
}
