#include <catch2/catch_amalgamated.hpp>
#include <numbers>

#include "gridsym/circulant.hpp"
#include "gridsym/experiments.hpp"
#include "gridsym/operators.hpp"

using namespace gridsym;

TEST_CASE("Laplacian of the two-node path") {
    auto g = build_toeplitz_graph(2, {{1, 1.0}});
    auto a = assemble_laplacian(g);
    CHECK(a.sparse.entry(0, 0) == 1.0);
    CHECK(a.sparse.entry(0, 1) == -1.0);
    CHECK(a.sparse.entry(1, 0) == -1.0);
    CHECK(a.sparse.entry(1, 1) == 1.0);
}

TEST_CASE("full-square Fourier-weight Laplacian equals the squared-angle Toeplitz matrix") {
    const std::int64_t n = 7, order = 5;
    Stencil s = Stencil::axis_weights(2, fourier_axis_weights(order));
    auto g = build_dlevel_toeplitz_graph({n, n}, s);
    g = attach_potential(std::move(g), PotentialKind::Dirichlet);
    // complete the deficiency with the series tail: the host has every offset
    double partial = 0.0;
    for (double w : fourier_axis_weights(order)) partial += w;
    const double tail = 2.0 * std::numbers::pi * std::numbers::pi / 3.0 - 4.0 * partial;
    for (auto& k : g.kappa) k += tail;

    auto lap = assemble_laplacian(g);
    auto toep = toeplitz_from_symbol({n, n}, triangle_symbol(order));
    CHECK(lap.sparse.max_abs_diff(toep.sparse) < 1e-13);
}

TEST_CASE("diamond Laplacian diagonal carries the full hub degree") {
    auto g = build_diamond_graph({3}, diamond_mold(), {{{1}, {1.0}}}, {{diamond_link()}});
    auto a = assemble_laplacian(g);
    // interior hub: 1+2+3 intra plus 10+10 across = 26
    CHECK(a.sparse.entry(g.node_id({2}, 1), g.node_id({2}, 1)) == 26.0);
}

TEST_CASE("toeplitz_from_symbol reproduces banded stencils") {
    auto t1 = toeplitz_from_symbol({3}, one_d_laplacian_symbol());
    CHECK(t1.sparse.entry(0, 0) == 2.0);
    CHECK(t1.sparse.entry(0, 1) == -1.0);
    CHECK(t1.sparse.entry(0, 2) == 0.0);
    CHECK(t1.sparse.entry(1, 2) == -1.0);

    auto t2 = toeplitz_from_symbol({2, 2}, five_point_symbol());
    CHECK(t2.sparse.entry(0, 0) == 4.0);
    CHECK(t2.sparse.entry(0, 1) == -1.0);
    CHECK(t2.sparse.entry(0, 2) == -1.0);
    CHECK(t2.sparse.entry(0, 3) == 0.0);

    auto t3 = toeplitz_from_symbol({4}, smooth_spline_symbol());
    CHECK(t3.sparse.entry(0, 0) == Catch::Approx(160.0 / 240.0));
    CHECK(t3.sparse.entry(0, 1) == Catch::Approx(-30.0 / 240.0));
    CHECK(t3.sparse.entry(0, 2) == Catch::Approx(-48.0 / 240.0));
    CHECK(t3.sparse.entry(0, 3) == Catch::Approx(-2.0 / 240.0));

    MatrixSymbol wide(1, 1);
    wide.set_scalar_coefficient({4}, 1.0);
    CHECK_THROWS_AS(toeplitz_from_symbol({4}, wide), std::invalid_argument);
}

TEST_CASE("Strang circulant wraps the central band") {
    auto t = ToeplitzCoefficients::from_symbol({4}, one_d_laplacian_symbol());
    auto c = strang_circulant(t);
    auto col = c->first_column();
    CHECK(col == std::vector<double>{2.0, -1.0, 0.0, -1.0});

    // identity stays the identity
    MatrixSymbol id(1, 1);
    id.set_scalar_coefficient({0}, 1.0);
    auto ci = strang_circulant(ToeplitzCoefficients::from_symbol({6}, id));
    CHECK(ci->first_column() == std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.0, 0.0});

    MatrixSymbol wide(1, 1);
    wide.set_scalar_coefficient({3}, 1.0);
    CHECK_THROWS_AS(strang_circulant(ToeplitzCoefficients::from_symbol({4}, wide)), std::invalid_argument);
}

TEST_CASE("block circulant solve matches a dense factorization") {
    const std::int64_t nd = 8;
    auto coeffs = ToeplitzCoefficients::from_symbol({nd}, quadratic_spline_block_symbol());
    const double alpha = 1.0 / (2.0 * static_cast<double>(nd));
    auto circ = strang_circulant(coeffs, alpha);

    // dense reference: wrap blocks onto the cycle plus alpha * ones
    const auto dim = 2 * nd;
    DenseMatrix dense(dim, dim);
    auto wrapped = strang_wrap(coeffs);
    for (std::int64_t i = 0; i < nd; ++i)
        for (std::int64_t j = 0; j < nd; ++j) {
            const std::int64_t l = ((i - j) % nd + nd) % nd;
            auto it = wrapped.find({l});
            if (it == wrapped.end()) continue;
            for (std::int64_t r = 0; r < 2; ++r)
                for (std::int64_t c = 0; c < 2; ++c)
                    dense(2 * i + r, 2 * j + c) += it->second[static_cast<std::size_t>(r * 2 + c)];
        }
    for (std::int64_t i = 0; i < dim; ++i)
        for (std::int64_t j = 0; j < dim; ++j) dense(i, j) += alpha;

    DeterministicRng rng(99);
    auto b = rng.uniform_vector(static_cast<std::size_t>(dim));
    auto x = circ->solve(b);
    CholeskySolver chol(dense);
    auto xref = chol.solve(b);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == Catch::Approx(xref[i]).margin(1e-10));

    // multiply is the inverse of solve
    auto bx = circ->multiply(x);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(bx[i] == Catch::Approx(b[i]).margin(1e-10));
}

TEST_CASE("cutting matrix selects every g-th index") {
    auto k42 = cutting_matrix(4, 2);
    REQUIRE(k42.rows() == 4);
    REQUIRE(k42.cols() == 2);
    CHECK(k42.entry(0, 0) == 1.0);
    CHECK(k42.entry(2, 1) == 1.0);
    CHECK(k42.nnz() == 2);

    auto k84 = cutting_matrix(8, 4);
    CHECK(k84.entry(0, 0) == 1.0);
    CHECK(k84.entry(4, 1) == 1.0);
    CHECK(k84.nnz() == 2);

    auto kt = cutting_matrix_tensor({4, 4}, 2);
    REQUIRE(kt.rows() == 16);
    REQUIRE(kt.cols() == 4);
    CHECK(kt.entry(0, 0) == 1.0);
    CHECK(kt.entry(2, 1) == 1.0);
    CHECK(kt.entry(8, 2) == 1.0);
    CHECK(kt.entry(10, 3) == 1.0);

    // odd size falls back to the interior alignment i = 2j + 1
    auto k72 = cutting_matrix(7, 2);
    REQUIRE(k72.cols() == 3);
    CHECK(k72.entry(1, 0) == 1.0);
    CHECK(k72.entry(3, 1) == 1.0);
    CHECK(k72.entry(5, 2) == 1.0);
}

TEST_CASE("projector with unit polynomial and full masks is the cutting matrix") {
    const std::int64_t n = 8;
    std::vector<std::int64_t> fine(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < fine.size(); ++i) fine[i] = static_cast<std::int64_t>(i);
    std::vector<std::int64_t> coarse(4);
    for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] = static_cast<std::int64_t>(i);
    auto p = build_projector({n}, 2, {{1.0}}, fine, coarse);
    auto k = cutting_matrix(n, 2, 1);  // same alignment offset as the projector default
    CHECK(p.p.max_abs_diff(k) == 0.0);
}

TEST_CASE("projector has full column rank and bilinear stencil columns") {
    const std::int64_t n = 8;
    IndexRange box({n, n});
    std::vector<std::int64_t> fine(static_cast<std::size_t>(box.size()));
    for (std::size_t i = 0; i < fine.size(); ++i) fine[i] = static_cast<std::int64_t>(i);
    std::vector<std::int64_t> coarse(16);
    for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] = static_cast<std::int64_t>(i);
    auto proj = build_projector({n, n}, 2, {{2.0, 2.0}, {2.0, 2.0}}, fine, coarse);
    REQUIRE(proj.p.cols() == 16);

    auto ptp = galerkin(proj.p, CsrMatrix::identity(box.size()));
    auto eig = sym_eigenvalues(StructuredMatrix(ptp));
    CHECK(eig.front() > 1e-8);  // full column rank

    // column values are products of the axis weights {1, 2, 1}
    const auto pt = proj.p.transpose();
    for (auto v : pt.values()) CHECK((v == 1.0 || v == 2.0 || v == 4.0));
}

TEST_CASE("dense eigenvalues of small Laplacians") {
    auto p2 = assemble_laplacian(build_toeplitz_graph(2, {{1, 1.0}}));
    auto e2 = sym_eigenvalues(p2);
    CHECK(e2[0] == Catch::Approx(0.0).margin(1e-14));
    CHECK(e2[1] == Catch::Approx(2.0).margin(1e-14));

    auto t3 = toeplitz_from_symbol({3}, one_d_laplacian_symbol());
    auto e3 = sym_eigenvalues(t3);
    CHECK(e3[0] == Catch::Approx(2.0 - std::numbers::sqrt2).margin(1e-13));
    CHECK(e3[1] == Catch::Approx(2.0).margin(1e-13));
    CHECK(e3[2] == Catch::Approx(2.0 + std::numbers::sqrt2).margin(1e-13));

    CHECK_THROWS_AS(sym_eigenvalues(t3, 2), std::invalid_argument);

    StructuredMatrix asym(CsrMatrix(2, 2, {{0, 1, 1.0}}));
    CHECK_THROWS_AS(sym_eigenvalues(asym), std::invalid_argument);
}

TEST_CASE("low-rank terms apply without densification") {
    auto eye = StructuredMatrix(CsrMatrix::identity(3));
    auto a = add_low_rank(eye, std::vector<double>(3, 1.0), std::vector<double>(3, 1.0), 1.0 / 3.0);
    std::vector<double> e(3, 1.0);
    auto y = a.apply(e);
    for (double v : y) CHECK(v == Catch::Approx(2.0));

    // Neumann Laplacian plus the rank-one shift maps ones to ones
    auto g = triangle_graph(8, false);
    auto lap = assemble_laplacian(g);
    const auto d = lap.rows();
    auto shifted = add_low_rank(lap, std::vector<double>(static_cast<std::size_t>(d), 1.0),
                                std::vector<double>(static_cast<std::size_t>(d), 1.0), 1.0 / static_cast<double>(d));
    std::vector<double> ones(static_cast<std::size_t>(d), 1.0);
    auto z = shifted.apply(ones);
    for (double v : z) CHECK(v == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("sparse matvec agrees with the dense product") {
    DeterministicRng rng(7);
    std::vector<Triplet> trips;
    for (std::int64_t i = 0; i < 10; ++i)
        for (std::int64_t j = 0; j <= i; ++j) {
            const double v = rng.uniform() - 0.5;
            trips.push_back({i, j, v});
            if (i != j) trips.push_back({j, i, v});
        }
    StructuredMatrix a(CsrMatrix(10, 10, std::move(trips)));
    auto dense = DenseMatrix::from_sparse(a);
    auto x = rng.uniform_vector(10);
    auto y = a.apply(x);
    for (std::int64_t i = 0; i < 10; ++i) {
        double ref = 0.0;
        for (std::int64_t j = 0; j < 10; ++j) ref += dense(i, j) * x[static_cast<std::size_t>(j)];
        CHECK(y[static_cast<std::size_t>(i)] == Catch::Approx(ref).margin(1e-13));
    }
}

TEST_CASE("positive semidefiniteness of the assembled systems") {
    // nonnegative weights: spline block, spline scalar, disk, diamond
    for (auto* prob : {new ProblemInstance(build_spline_block(8)), new ProblemInstance(build_spline_scalar(12)),
                       new ProblemInstance(build_disk(8)), new ProblemInstance(build_diamond_interior(8))}) {
        auto eig = sym_eigenvalues(prob->a);
        CHECK(eig.front() >= -1e-10);
        delete prob;
    }
    // mixed-sign Fourier weights: the Dirichlet triangle is still PSD
    for (std::int64_t n : {8, 16, 32}) {
        auto prob = build_triangle_dirichlet(n);
        auto eig = sym_eigenvalues(prob.a);
        CHECK(eig.front() >= -1e-10);
    }
    // Neumann null vector is exact
    auto gn = triangle_graph(8, false);
    auto lap = assemble_laplacian(gn);
    std::vector<double> ones(static_cast<std::size_t>(lap.rows()), 1.0);
    auto z = lap.apply(ones);
    for (double v : z) CHECK(std::abs(v) <= 1e-13);
}

TEST_CASE("Galerkin coarse matrices stay symmetric") {
    auto prob = build_triangle_dirichlet(16);
    MgHierarchy h = immersed_hierarchy(prob.a, 16, DomainPredicate::equilateral_triangle(), 2, kLinearPoly, false);
    for (const auto& level : h.a) {
        auto at = level.sparse.transpose();
        CHECK(level.sparse.max_abs_diff(at) < 1e-14 * 256.0);
    }
}

TEST_CASE("structure equality: graph plus potential equals symbol Toeplitz for the 5-point stencil") {
    Stencil nn;
    nn.terms = {{{0, 1}, {1.0}}, {{1, 0}, {1.0}}};
    auto g = build_dlevel_toeplitz_graph({4, 4}, nn);
    g = attach_potential(std::move(g), PotentialKind::Dirichlet);
    auto lap = assemble_laplacian(g);
    auto toep = toeplitz_from_symbol({4, 4}, five_point_symbol());
    CHECK(lap.sparse.max_abs_diff(toep.sparse) == 0.0);
}
