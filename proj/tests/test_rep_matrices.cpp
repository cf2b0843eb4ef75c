#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "gyron/rep_matrices.hpp"
#include "gyron/structure.hpp"

using namespace gyron;
using Catch::Approx;

TEST_CASE("structure polynomials") {
    const auto pr = validate_params(1, 1, 1.0);
    const StructureData s(pr);
    // rho = (A1 + hbar) A2 for the 1:1 case
    CHECK(s.rho(2.0, 3.0) == Approx(9.0));
    CHECK(s.rho_plus(2.0) == Approx(3.0));
    CHECK(s.rho_minus(3.0) == Approx(3.0));
    // the step map preserves kappa
    const auto [b1, b2] = s.step(2.0, 3.0);
    CHECK(s.kappa(b1, b2) == Approx(s.kappa(2.0, 3.0)));
    // commutator right-hand side reduces to hbar (A1 - A2) for 1:1
    CHECK(s.rho(b1, b2) - s.rho(2.0, 3.0) == Approx(pr.hbar * (2.0 - 3.0)));
}

TEST_CASE("spin-type block entries") {
    const auto pr = validate_params(1, 1, 1.0);
    const auto g = build_matrices(pr, make_label(pr, 1, 0, 0));
    CHECK(g.a1_diag(0) == Approx(1.0));
    CHECK(g.a1_diag(1) == Approx(0.0));
    CHECK(g.a2_diag(0) == Approx(0.0));
    CHECK(g.a2_diag(1) == Approx(1.0));
    REQUIRE(g.a_plus_subdiag.size() == 1);
    CHECK(g.a_plus_subdiag(0) == Approx(1.0));
    CHECK(g.a_minus()(0, 1) == Approx(1.0));

    const auto g2 = build_matrices(pr, make_label(pr, 2, 0, 0));
    CHECK(g2.a_plus_subdiag(0) == Approx(std::sqrt(2.0)));
    CHECK(g2.a_plus_subdiag(1) == Approx(std::sqrt(2.0)));
}

TEST_CASE("1:2 block entry") {
    const auto pr = validate_params(1, 2, 1.0);
    const auto g = build_matrices(pr, make_label(pr, 1, 0, 0));
    CHECK(g.a_plus_subdiag(0) == Approx(std::sqrt(2.0)));
}

TEST_CASE("entry overflow is reported") {
    const auto pr = validate_params(3, 4, 1e100);
    CHECK_THROWS_AS(build_matrices(pr, make_label(pr, 2, 1, 1)), OverflowError);
}

TEST_CASE("commutation relations hold across a sweep") {
    for (auto [l, m] : {std::pair{1, 1}, {1, 2}, {2, 3}, {3, 4}}) {
        for (double hbar : {1.0, 0.1}) {
            const auto pr = validate_params(l, m, hbar);
            const StructureData s(pr);
            for (int r : {0, 1, 2, 5, 8}) {
                for (int q = 0; q < l; ++q) {
                    for (int p = 0; p < m; ++p) {
                        const auto lb = make_label(pr, r, q, p);
                        const auto g = build_matrices(pr, lb);
                        const auto rel = check_relations(g, s);
                        INFO("l=" << l << " m=" << m << " hbar=" << hbar << " r=" << r
                                  << " q=" << q << " p=" << p);
                        CHECK(rel.max_relative() <= 1e-12);
                        CHECK(rel.comm_a1_a2 == 0.0);  // both diagonal
                    }
                }
            }
        }
    }
}

TEST_CASE("casimir identities") {
    SECTION("spin case is exactly zero") {
        const auto pr = validate_params(1, 1, 1.0);
        const StructureData s(pr);
        const auto lb = make_label(pr, 1, 0, 0);
        const auto cas = casimir_values(build_matrices(pr, lb), s, lb);
        CHECK(cas.kappa_value == Approx(1.0));
        CHECK(cas.casimir_residual <= 1e-15);
    }
    SECTION("2:3 block energy") {
        const auto pr = validate_params(2, 3, 1.0);
        const StructureData s(pr);
        const auto lb = make_label(pr, 1, 1, 2);
        const auto cas = casimir_values(build_matrices(pr, lb), s, lb);
        CHECK(cas.kappa_value == Approx(13.0));
        CHECK(cas.kappa_residual <= 1e-13);
        CHECK(cas.casimir_residual <= 1e-13);
    }
    SECTION("one-dimensional blocks") {
        for (auto [l, m] : {std::pair{1, 2}, {2, 3}}) {
            const auto pr = validate_params(l, m, 0.7);
            const StructureData s(pr);
            for (int q = 0; q < l; ++q)
                for (int p = 0; p < m; ++p) {
                    const auto lb = make_label(pr, 0, q, p);
                    const auto cas = casimir_values(build_matrices(pr, lb), s, lb);
                    CHECK(cas.casimir_residual <= 1e-14);
                }
        }
    }
}

TEST_CASE("hermiticity and dimensions") {
    const auto pr = validate_params(2, 3, 0.3);
    const auto lb = make_label(pr, 6, 1, 2);
    const auto g = build_matrices(pr, lb);
    CHECK(g.dim() == 7);
    CHECK((g.a_minus() - g.a_plus().transpose()).norm() == 0.0);
    CHECK(g.a1_diag.minCoeff() >= 0.0);
    CHECK(g.a2_diag.minCoeff() >= 0.0);
}

TEST_CASE("differential-operator construction matches the matrix one") {
    for (auto [l, m] : {std::pair{1, 1}, {1, 2}, {2, 3}, {3, 4}}) {
        for (double hbar : {1.0, 0.1}) {
            const auto pr = validate_params(l, m, hbar);
            for (int r : {0, 1, 3, 7}) {
                for (int q = 0; q < l; ++q)
                    for (int p = 0; p < m; ++p) {
                        const auto lb = make_label(pr, r, q, p);
                        const auto g1 = build_matrices(pr, lb);
                        const auto g2 = build_diffop_matrices(pr, lb);
                        INFO("l=" << l << " m=" << m << " r=" << r << " q=" << q << " p=" << p);
                        CHECK((g1.a1_diag - g2.a1_diag).cwiseAbs().maxCoeff() <= 1e-12);
                        CHECK((g1.a2_diag - g2.a2_diag).cwiseAbs().maxCoeff() <= 1e-12);
                        for (int i = 0; i < r; ++i)
                            CHECK(std::abs(g1.a_plus_subdiag(i) - g2.a_plus_subdiag(i)) <=
                                  1e-12 * std::abs(g1.a_plus_subdiag(i)));
                    }
            }
        }
    }
}

TEST_CASE("lowering annihilates the lowest basis vector") {
    // the first column of the lowering matrix vanishes by construction
    const auto pr = validate_params(2, 3, 0.5);
    const auto g = build_diffop_matrices(pr, make_label(pr, 4, 1, 2));
    CHECK(g.a_minus().col(0).norm() == 0.0);
}

TEST_CASE("large blocks stay finite") {
    const auto pr = validate_params(1, 2, 0.01);
    const auto lb = make_label(pr, 500, 0, 1);
    const auto g = build_matrices(pr, lb);
    CHECK(std::isfinite(g.a_plus_subdiag.maxCoeff()));
    const auto g2 = build_diffop_matrices(pr, lb);
    double dev = 0.0;
    for (int i = 0; i < lb.r; ++i)
        dev = std::max(dev, std::abs(g.a_plus_subdiag(i) - g2.a_plus_subdiag(i)) /
                                g.a_plus_subdiag(i));
    CHECK(dev <= 5e-12);  // lgamma rounding accumulates mildly at this size
}
