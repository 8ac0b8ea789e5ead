#include <catch2/catch_amalgamated.hpp>
#include <numbers>

#include "gridsym/experiments.hpp"
#include "gridsym/symbol.hpp"

using namespace gridsym;

TEST_CASE("eval_symbol at reference angles") {
    auto f = one_d_laplacian_symbol();
    CHECK(f.eval_scalar(std::numbers::pi) == Catch::Approx(4.0).margin(1e-14));

    auto disk = disk_symbol();
    std::vector<double> x{0.5, 0.5};
    auto v = disk.eval({std::numbers::pi, std::numbers::pi}, &x);
    CHECK(v(0, 0).real() == Catch::Approx(8.0).margin(1e-12));

    auto dia = diamond_symbol();
    CHECK(dia.determinant({std::numbers::pi}).real() == Catch::Approx(584.0).margin(1e-9));
    CHECK_THROWS_AS(f.eval({std::numeric_limits<double>::infinity()}), std::invalid_argument);
}

TEST_CASE("diamond determinant matches 292 - 292 cos on a 256-point grid") {
    auto dia = diamond_symbol();
    for (int i = 0; i < 256; ++i) {
        const double th = -std::numbers::pi + 2.0 * std::numbers::pi * (i + 0.5) / 256.0;
        const auto det = dia.determinant({th});
        CHECK(std::abs(det.real() - (292.0 - 292.0 * std::cos(th))) < 1e-9);
        CHECK(std::abs(det.imag()) < 1e-9);
    }
}

TEST_CASE("Hermitianity and periodicity of eval_symbol") {
    DeterministicRng rng(3);
    for (auto* f : {new MatrixSymbol(diamond_symbol()), new MatrixSymbol(quadratic_spline_block_symbol())}) {
        for (int rep = 0; rep < 25; ++rep) {
            const double th = (rng.uniform() * 2.0 - 1.0) * std::numbers::pi;
            auto b = f->eval({th});
            auto bh = b.adjoint();
            for (std::size_t i = 0; i < b.a.size(); ++i) CHECK(std::abs(b.a[i] - bh.a[i]) <= 1e-14);
            auto shifted = f->eval({th + 2.0 * std::numbers::pi});
            for (std::size_t i = 0; i < b.a.size(); ++i) CHECK(std::abs(b.a[i] - shifted.a[i]) <= 1e-13);
        }
        delete f;
    }
}

TEST_CASE("eigencurves of the experiment symbols") {
    // truncated squared-angle symbol: minimum within the series tail bound
    const std::int64_t K = 64;
    auto tri = triangle_symbol(K);
    auto s = symbol_eigencurves(tri, 64);
    CHECK(s.curve_min[0] >= -1e-10);
    CHECK(s.curve_min[0] <= 8.0 / static_cast<double>(K));

    // spline block symbol: curves real, nonnegative, lambda_1(0) = 0
    auto fem = quadratic_spline_block_symbol();
    auto ev0 = fem.eigenvalues({0.0});
    CHECK(ev0[0] == Catch::Approx(0.0).margin(1e-14));
    auto sf = symbol_eigencurves(fem, 1024);
    CHECK(sf.curve_min[0] >= -1e-12);
    CHECK(sf.curve_min[1] >= 0.0);

    // diamond symbol: strictly interlaced eigenvalue curves on a 1024 grid
    auto dia = diamond_symbol();
    for (int i = 0; i < 1024; ++i) {
        const double th = -std::numbers::pi + 2.0 * std::numbers::pi * (i + 0.5) / 1024.0;
        auto ev = dia.eigenvalues({th});
        CHECK(ev[0] >= -1e-12);
        CHECK(ev[0] < ev[1]);
        CHECK(ev[1] < ev[2]);
        CHECK(ev[2] < ev[3]);
    }
}

TEST_CASE("corner and mirror points") {
    auto cm1 = corner_mirror_points({0.0}, 2, 1);
    REQUIRE(cm1.corner.size() == 2);
    REQUIRE(cm1.mirror.size() == 1);
    CHECK(cm1.mirror[0][0] == Catch::Approx(std::numbers::pi));

    auto cm2 = corner_mirror_points({0.0}, 4, 1);
    REQUIRE(cm2.corner.size() == 4);
    REQUIRE(cm2.mirror.size() == 3);
    std::vector<double> got;
    for (const auto& v : cm2.corner) got.push_back(v[0]);
    std::sort(got.begin(), got.end());
    CHECK(got[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(got[1] == Catch::Approx(std::numbers::pi / 2));
    CHECK(got[2] == Catch::Approx(std::numbers::pi));
    CHECK(got[3] == Catch::Approx(3 * std::numbers::pi / 2));

    auto cm3 = corner_mirror_points({0.0, 0.0}, 2, 2);
    CHECK(cm3.corner.size() == 4);
    CHECK(cm3.mirror.size() == 3);
}

TEST_CASE("projector conditions for the classical pairs") {
    auto f = one_d_laplacian_symbol();
    auto p = cosine_polynomial({2.0, 2.0});
    auto rep = check_projector_conditions(f, p, {0.0}, 2);
    CHECK(rep.bounded_ratio);
    CHECK(rep.positive_sum);

    auto iga = smooth_spline_symbol();
    auto rep2 = check_projector_conditions(iga, p, {0.0}, 2);
    CHECK(rep2.pass());

    MatrixSymbol zero(1, 1);
    zero.set_scalar_coefficient({0}, 0.0);
    auto rep3 = check_projector_conditions(f, zero, {0.0}, 2);
    CHECK_FALSE(rep3.positive_sum);
}

TEST_CASE("spline symbol to second-difference ratio is monotone with the documented limits") {
    auto iga = smooth_spline_symbol();
    auto lap = one_d_laplacian_symbol();
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 512; ++i) {
        const double th = std::numbers::pi * i / 512.0;
        const double ratio = iga.eval_scalar(th) / lap.eval_scalar(th);
        CHECK(ratio <= prev + 1e-12);
        prev = ratio;
    }
    const double at0 = iga.eval_scalar(1e-4) / lap.eval_scalar(1e-4);
    CHECK(at0 == Catch::Approx(1.0).margin(1e-4));
    const double atpi = iga.eval_scalar(std::numbers::pi) / lap.eval_scalar(std::numbers::pi);
    CHECK(atpi == Catch::Approx(2.0 / 15.0).margin(1e-12));
}

TEST_CASE("weyl distance of Toeplitz matrices against their symbols") {
    auto id = StructuredMatrix(CsrMatrix::identity(32));
    MatrixSymbol one(1, 1);
    one.set_scalar_coefficient({0}, 1.0);
    CHECK(weyl_distance(id, one) == Catch::Approx(0.0).margin(1e-12));

    auto f = one_d_laplacian_symbol();
    auto t64 = toeplitz_from_symbol({64}, f);
    const double d64 = weyl_distance(t64, f);
    CHECK(d64 <= 0.05);

    auto t128 = toeplitz_from_symbol({128}, f);
    const double d128 = weyl_distance(t128, f);
    CHECK(d128 <= d64);

    // triangle Laplacian against the truncated squared-angle symbol
    auto p16 = build_triangle_dirichlet(16);
    auto p32 = build_triangle_dirichlet(32);
    const double w16 = weyl_distance(p16.a, triangle_symbol(16));
    const double w32 = weyl_distance(p32.a, triangle_symbol(32));
    CHECK(w32 < w16);
}

TEST_CASE("weyl distance handles the variable-coefficient disk symbol") {
    const auto domain = DomainPredicate::half_disk_ball();
    const std::function<bool(const std::vector<double>&)> inside = domain.inside;
    auto f = disk_symbol();
    auto d16 = weyl_distance(build_disk(16).a, f, 0, 5000, &inside);
    auto d32 = weyl_distance(build_disk(32).a, f, 0, 5000, &inside);
    CHECK(d16 < 0.5);
    CHECK(d32 < d16);
}
