#include <catch2/catch_amalgamated.hpp>
#include <numbers>

#include "gridsym/experiments.hpp"
#include "gridsym/graph.hpp"
#include "gridsym/operators.hpp"

using namespace gridsym;

namespace {
double adjacency_weight(const GridGraph& g, std::int64_t a, std::int64_t b) {
    double w = 0.0;
    for (const auto& e : g.edges) {
        if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) w += e.w;
    }
    return w;
}
}  // namespace

TEST_CASE("Toeplitz graph weights depend on |i-j| only") {
    auto path = build_toeplitz_graph(4, {{1, 1.0}});
    REQUIRE(path.num_nodes() == 4);
    for (std::int64_t i = 0; i + 1 < 4; ++i) CHECK(adjacency_weight(path, i, i + 1) == 1.0);
    CHECK(adjacency_weight(path, 0, 2) == 0.0);

    auto banded = build_toeplitz_graph(5, {{1, 30.0 / 240.0}, {2, 48.0 / 240.0}, {3, 2.0 / 240.0}});
    CHECK(adjacency_weight(banded, 0, 1) == 30.0 / 240.0);
    CHECK(adjacency_weight(banded, 1, 3) == 48.0 / 240.0);
    CHECK(adjacency_weight(banded, 0, 3) == 2.0 / 240.0);
    CHECK(adjacency_weight(banded, 0, 4) == 0.0);

    auto single = build_toeplitz_graph(3, {{2, 5.0}});
    CHECK(single.edges.size() == 1);
    CHECK(adjacency_weight(single, 0, 2) == 5.0);

    CHECK_THROWS_AS(build_toeplitz_graph(3, {{3, 1.0}}), std::invalid_argument);
}

TEST_CASE("d-level Toeplitz graph obeys the direction-class weight rule") {
    // 2x2 grid with nearest-neighbor couplings is the 4-cycle
    Stencil nn;
    nn.terms = {{{0, 1}, {1.0}}, {{1, 0}, {1.0}}};
    auto square = build_dlevel_toeplitz_graph({2, 2}, nn);
    CHECK(square.num_nodes() == 4);
    CHECK(square.edges.size() == 4);

    // diagonal vs antidiagonal classes carry distinct weights
    Stencil diag;
    diag.terms = {{{1, 1}, {2.5, -1.5}}};  // class (1,1) then (1,-1)
    auto g = build_dlevel_toeplitz_graph({3, 3}, diag);
    IndexRange box({3, 3});
    std::int64_t diag_edges = 0, anti_edges = 0;
    for (const auto& e : g.edges) {
        const auto di = g.node_index[static_cast<std::size_t>(e.a)] - g.node_index[static_cast<std::size_t>(e.b)];
        const auto ad = abs(di);
        REQUIRE(ad == MultiIndex{1, 1});
        if (di[0] == di[1]) {
            CHECK(e.w == 2.5);
            ++diag_edges;
        } else {
            CHECK(e.w == -1.5);
            ++anti_edges;
        }
    }
    CHECK(diag_edges == 4);
    CHECK(anti_edges == 4);

    // adjacency of the 5-point stencil equals the 2-level Toeplitz matrix of
    // 2cos(t1) + 2cos(t2) on 9 nodes
    auto fd = build_dlevel_toeplitz_graph({3, 3}, nn);
    MatrixSymbol s(2, 1);
    s.set_scalar_coefficient({1, 0}, 1.0);
    s.set_scalar_coefficient({0, 1}, 1.0);
    auto t = toeplitz_from_symbol({3, 3}, s);
    std::vector<Triplet> trips;
    for (const auto& e : fd.edges) {
        trips.push_back({e.a, e.b, e.w});
        trips.push_back({e.b, e.a, e.w});
    }
    CsrMatrix w(9, 9, std::move(trips));
    CHECK(w.max_abs_diff(t.sparse) == 0.0);

    Stencil bad;
    bad.terms = {{{1, 1}, {1.0}}};  // two classes, one weight
    CHECK_THROWS_AS(build_dlevel_toeplitz_graph({3, 3}, bad), std::invalid_argument);
}

TEST_CASE("diamond graph matches the published 12-node example") {
    auto g = build_diamond_graph({3}, diamond_mold(), {{{1}, {1.0}}}, {{diamond_link()}});
    REQUIRE(g.num_nodes() == 12);
    // intra-diamond weights 1,2,3 from the hub
    CHECK(adjacency_weight(g, g.node_id({2}, 1), g.node_id({2}, 2)) == 1.0);
    CHECK(adjacency_weight(g, g.node_id({2}, 1), g.node_id({2}, 3)) == 2.0);
    CHECK(adjacency_weight(g, g.node_id({2}, 1), g.node_id({2}, 4)) == 3.0);
    // cross-diamond hub-hub weight 10, and (k+1,4)-(k,2) weight 1
    CHECK(adjacency_weight(g, g.node_id({2}, 1), g.node_id({1}, 1)) == 10.0);
    CHECK(adjacency_weight(g, g.node_id({2}, 1), g.node_id({3}, 1)) == 10.0);
    CHECK(adjacency_weight(g, g.node_id({2}, 4), g.node_id({1}, 2)) == 1.0);
    CHECK(adjacency_weight(g, g.node_id({3}, 4), g.node_id({2}, 2)) == 1.0);
    // nothing else couples hub-adjacent slots across diamonds
    CHECK(adjacency_weight(g, g.node_id({2}, 2), g.node_id({1}, 2)) == 0.0);

    LinkingOperator zero;
    zero.l = {{0, 0}, {0, 0}};
    MoldGraph m2;
    m2.nu = 2;
    m2.w = {{0, 1}, {1, 0}};
    CHECK_THROWS_AS(build_diamond_graph({2}, m2, {{{1}, {1.0}}}, {{zero}}), std::invalid_argument);
}

TEST_CASE("two-node mold chain couples through the linking operator rows") {
    MoldGraph m;
    m.nu = 2;
    m.w = {{0, 2}, {2, 0}};
    LinkingOperator L;
    L.l = {{0, 0}, {2, 2}};
    auto g = build_diamond_graph({2}, m, {{{1}, {1.0}}}, {{L}});
    REQUIRE(g.num_nodes() == 4);
    CHECK(adjacency_weight(g, g.node_id({1}, 1), g.node_id({1}, 2)) == 2.0);
    CHECK(adjacency_weight(g, g.node_id({2}, 1), g.node_id({2}, 2)) == 2.0);
    // w(v_(2,r), v_(1,s)) = L(r,s): slot 2 of the higher diamond reaches both
    CHECK(adjacency_weight(g, g.node_id({2}, 2), g.node_id({1}, 1)) == 2.0);
    CHECK(adjacency_weight(g, g.node_id({2}, 2), g.node_id({1}, 2)) == 2.0);
    CHECK(adjacency_weight(g, g.node_id({2}, 1), g.node_id({1}, 1)) == 0.0);
    CHECK(adjacency_weight(g, g.node_id({2}, 1), g.node_id({1}, 2)) == 0.0);
}

TEST_CASE("immersion restricts nodes and modulates weights at midpoints") {
    Stencil nn;
    nn.terms = {{{0, 1}, {1.0}}, {{1, 0}, {1.0}}};
    auto host = build_dlevel_toeplitz_graph({6, 6}, nn);

    // identity immersion on the unit square
    auto square = immerse(host, DomainPredicate::unit_square());
    CHECK(square.num_nodes() == host.num_nodes());
    CHECK(square.edges.size() == host.edges.size());

    // disk: surviving edge weights are the coefficient at the edge midpoint
    const std::function<double(const std::vector<double>&)> p = [](const std::vector<double>& x) {
        return 1.0 + (x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.5) * (x[1] - 0.5);
    };
    auto disk = immerse(host, DomainPredicate::half_disk_ball(), &p);
    for (const auto& e : disk.edges) {
        const auto& xa = disk.coords[static_cast<std::size_t>(e.a)];
        const auto& xb = disk.coords[static_cast<std::size_t>(e.b)];
        const double expect = p({0.5 * (xa[0] + xb[0]), 0.5 * (xa[1] + xb[1])});
        CHECK(e.w == Catch::Approx(expect).epsilon(1e-15));
    }

    // triangle at n = 8 keeps 30 nodes
    auto host8 = build_dlevel_toeplitz_graph({8, 8}, nn);
    auto tri = immerse(host8, DomainPredicate::equilateral_triangle());
    CHECK(tri.num_nodes() == 30);

    // monotonicity: triangle nodes are a subset of the square's
    CHECK(tri.num_nodes() <= square.num_nodes());
    DomainPredicate never{"empty", [](const std::vector<double>&) { return false; }};
    CHECK_THROWS_AS(immerse(host8, never), std::invalid_argument);
}

TEST_CASE("Dirichlet potential equals the host edge deficiency") {
    const std::int64_t n = 8;
    const auto w = fourier_axis_weights(n);
    Stencil s = Stencil::axis_weights(2, w);
    const auto domain = DomainPredicate::equilateral_triangle();
    auto g = build_dlevel_toeplitz_graph({n, n}, s, &domain);
    auto gn = attach_potential(g, PotentialKind::Neumann);
    for (double k : gn.kappa) CHECK(k == 0.0);

    auto gd = attach_potential(g, PotentialKind::Dirichlet);
    // deg + kappa equals the host row sum (the partial series sum) everywhere
    double partial = 0.0;
    for (double wk : w) partial += wk;
    auto deg = gd.degrees();
    for (std::int64_t i = 0; i < gd.num_nodes(); ++i)
        CHECK(deg[static_cast<std::size_t>(i)] + gd.kappa[static_cast<std::size_t>(i)] ==
              Catch::Approx(4.0 * partial).margin(1e-12));
    // and the partial sum is within the series tail bound of 2 pi^2 / 3
    CHECK(std::abs(4.0 * partial - 2.0 * std::numbers::pi * std::numbers::pi / 3.0) <= 8.0 / static_cast<double>(n));
}

TEST_CASE("experiment triangle graph carries the exact host row sum") {
    auto g = triangle_graph(8, true);
    auto deg = g.degrees();
    const double target = 2.0 * std::numbers::pi * std::numbers::pi / 3.0;
    for (std::int64_t i = 0; i < g.num_nodes(); ++i)
        CHECK(deg[static_cast<std::size_t>(i)] + g.kappa[static_cast<std::size_t>(i)] ==
              Catch::Approx(target).margin(1e-12));
}

TEST_CASE("full-square Dirichlet diagonal is constant (no deficiency inside)") {
    // a node with all stencil neighbors inside has kappa = 0
    Stencil nn;
    nn.terms = {{{0, 1}, {1.0}}, {{1, 0}, {1.0}}};
    const auto domain = DomainPredicate::equilateral_triangle();
    auto g = build_dlevel_toeplitz_graph({8, 8}, nn, &domain);
    g = attach_potential(std::move(g), PotentialKind::Dirichlet);
    IndexRange box({8, 8});
    for (std::int64_t i = 0; i < g.num_nodes(); ++i) {
        const auto& k = g.node_index[static_cast<std::size_t>(i)];
        bool interior = true;
        for (const auto& d : {MultiIndex{1, 0}, MultiIndex{-1, 0}, MultiIndex{0, 1}, MultiIndex{0, -1}}) {
            const auto j = k + d;
            if (!box.contains(j) || g.kept_lookup[static_cast<std::size_t>(box.flatten(j))] < 0) interior = false;
        }
        if (interior) CHECK(g.kappa[static_cast<std::size_t>(i)] == 0.0);
    }
}

TEST_CASE("disk potential counts outside neighbors") {
    auto prob = build_disk(8);
    const double h = 1.0 / 9.0;
    IndexRange box({8, 8});
    for (std::int64_t i = 0; i < prob.graph.num_nodes(); ++i) {
        const auto& k = prob.graph.node_index[static_cast<std::size_t>(i)];
        const auto& x = prob.graph.coords[static_cast<std::size_t>(i)];
        int outside = 0;
        for (const auto& d : {MultiIndex{1, 0}, MultiIndex{-1, 0}, MultiIndex{0, 1}, MultiIndex{0, -1}}) {
            const auto j = k + d;
            if (!box.contains(j) || prob.graph.kept_lookup[static_cast<std::size_t>(box.flatten(j))] < 0) ++outside;
        }
        const double expect = h * h * std::exp(x[0] * x[1]) + 2.5 * outside;
        CHECK(prob.graph.kappa[static_cast<std::size_t>(i)] == Catch::Approx(expect).margin(1e-15));
    }
}

TEST_CASE("stored adjacency is symmetric and Toeplitz for un-immersed graphs") {
    auto g = build_toeplitz_graph(12, {{1, 0.5}, {3, -0.25}});
    auto a = assemble_laplacian(g);
    CHECK(a.sparse.is_symmetric());
    // w(i,j) depends only on i-j
    for (std::int64_t i = 0; i < 12; ++i)
        for (std::int64_t j = 0; j < 12; ++j) {
            const auto d = std::abs(i - j);
            const double expect = d == 1 ? -0.5 : (d == 3 ? 0.25 : (d == 0 ? 0.0 : 0.0));
            if (i != j) CHECK(a.sparse.entry(i, j) == expect);
        }
}
