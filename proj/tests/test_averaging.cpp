#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <random>

#include "gyron/averaging.hpp"
#include "gyron/fock.hpp"

using namespace gyron;
using Catch::Approx;
using cplx = std::complex<double>;

TEST_CASE("resonant projection worked examples") {
    SECTION("1:1 exchange coupling survives whole") {
        const auto pr = validate_params(1, 1, 1.0);
        const auto b = BosonicPolynomial::monomial(1, 0, 0, 1) + BosonicPolynomial::monomial(0, 1, 1, 0);
        const auto f1 = project_resonant(b, pr);
        CHECK(f1.size() == 2);
        CHECK(f1.terms() == b.terms());
    }
    SECTION("number operator is always resonant") {
        for (auto [l, m] : {std::pair{1, 1}, {1, 2}, {2, 3}, {3, 4}}) {
            const auto pr = validate_params(l, m, 1.0);
            const auto b = BosonicPolynomial::monomial(1, 0, 1, 0);
            const auto f1 = project_resonant(b, pr);
            CHECK(f1.terms() == b.terms());
        }
    }
    SECTION("linear displacement averages to zero for 2:3") {
        const auto pr = validate_params(2, 3, 1.0);
        const auto b = BosonicPolynomial::monomial(0, 0, 1, 0) + BosonicPolynomial::monomial(1, 0, 0, 0);
        CHECK(project_resonant(b, pr).empty());
    }
}

TEST_CASE("resonant projection is linear, idempotent, hermiticity-preserving") {
    const auto pr = validate_params(2, 3, 1.0);
    std::mt19937 rng(53);
    std::uniform_int_distribution<int> e(0, 3);
    std::normal_distribution<double> gauss;
    BosonicPolynomial b;
    for (int it = 0; it < 12; ++it)
        b.add({e(rng), e(rng), e(rng), e(rng)}, cplx(gauss(rng), gauss(rng)));
    b = b + b.dagger();
    REQUIRE(b.is_hermitian(1e-15));
    const auto f1 = project_resonant(b, pr);
    CHECK(f1.is_hermitian(1e-15));
    CHECK(project_resonant(f1, pr).terms() == f1.terms());
    const auto scaled = project_resonant(b * cplx(0.0, 2.0), pr);
    for (const auto& [k, c] : scaled.terms())
        CHECK(std::abs(c - cplx(0.0, 2.0) * f1.terms().at(k)) <= 1e-15);
}

TEST_CASE("normal ordering rewriter") {
    const double hbar = 0.7;
    SECTION("single exchange") {
        // b1 b1* = b1* b1 + hbar
        const auto p = normal_order({{1, false}, {1, true}}, hbar);
        REQUIRE(p.size() == 2);
        CHECK(p.terms().at({1, 0, 1, 0}).real() == Approx(1.0));
        CHECK(p.terms().at({0, 0, 0, 0}).real() == Approx(hbar));
    }
    SECTION("modes commute") {
        const auto p = normal_order({{1, false}, {2, true}}, hbar);
        REQUIRE(p.size() == 1);
        CHECK(p.terms().at({0, 1, 1, 0}).real() == Approx(1.0));
    }
    SECTION("matches matrix ordering on a fock basis") {
        const auto pr = validate_params(1, 1, hbar);
        FockBasis basis(6);
        const auto lad = build_ladder(pr, basis);
        // word: b1 b1* b1 b1*   ->  normal order, then compare matrices
        const auto word = std::vector<LadderFactor>{{1, false}, {1, true}, {1, false}, {1, true}};
        const auto p = normal_order(word, hbar);
        FockOperator direct = FockOperator::identity(basis.dim());
        for (const auto& factor : word)
            direct = direct.compose(factor.dagger ? lad.b1d : lad.b1);
        Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
        for (const auto& [k, c] : p.terms()) {
            FockOperator term = FockOperator::identity(basis.dim());
            for (int i = 0; i < k[2]; ++i) term = lad.b1.compose(term);
            for (int i = 0; i < k[3]; ++i) term = lad.b2.compose(term);
            for (int i = 0; i < k[1]; ++i) term = lad.b2d.compose(term);
            for (int i = 0; i < k[0]; ++i) term = lad.b1d.compose(term);
            rebuilt += c.real() * term.dense();
        }
        // compare on the safe core only
        const Eigen::MatrixXd d = direct.dense();
        for (int j = 0; j < basis.dim(); ++j) {
            const auto [n1, n2] = basis.states[j];
            if (n1 + n2 + 2 > basis.cutoff) continue;
            for (int i = 0; i < basis.dim(); ++i)
                CHECK(std::abs(d(i, j) - rebuilt(i, j)) <= 1e-13);
        }
    }
    SECTION("factor limit enforced") {
        std::vector<LadderFactor> word(9, LadderFactor{1, false});
        CHECK_THROWS_AS(normal_order(word, hbar), Error);
    }
}

TEST_CASE("realization on a block") {
    SECTION("1:1 exchange coupling equals the ladder sum") {
        const auto pr = validate_params(1, 1, 1.0);
        const auto lb = make_label(pr, 2, 0, 0);
        const auto f1 = BosonicPolynomial::monomial(0, 1, 1, 0) + BosonicPolynomial::monomial(1, 0, 0, 1);
        const auto mat = realize_in_rep(f1, pr, lb);
        const auto g = build_matrices(pr, lb);
        const Eigen::MatrixXcd expected = (g.a_plus() + g.a_minus()).cast<cplx>();
        CHECK((mat - expected).cwiseAbs().maxCoeff() <= 1e-13);
        CHECK(mat(1, 0).real() == Approx(std::sqrt(2.0)));
        CHECK(mat(2, 1).real() == Approx(std::sqrt(2.0)));
    }
    SECTION("number operator realizes the diagonal generator") {
        const auto pr = validate_params(2, 3, 0.4);
        const auto lb = make_label(pr, 5, 1, 2);
        const auto mat = realize_in_rep(BosonicPolynomial::monomial(1, 0, 1, 0), pr, lb);
        const auto g = build_matrices(pr, lb);
        CHECK((mat - g.a1().cast<cplx>()).cwiseAbs().maxCoeff() <= 1e-13);
    }
    SECTION("nonresonant input is rejected") {
        const auto pr = validate_params(1, 2, 1.0);
        CHECK_THROWS_AS(realize_in_rep(BosonicPolynomial::monomial(1, 0, 0, 0), pr,
                                       make_label(pr, 2, 0, 0)),
                        Error);
    }
}

namespace {

BosonicPolynomial random_resonant(const ResonanceParams& pr, std::mt19937& rng, int n_terms) {
    std::uniform_int_distribution<int> base(0, 2), step(-1, 1);
    std::normal_distribution<double> gauss;
    BosonicPolynomial b;
    for (int i = 0; i < n_terms; ++i) {
        const int t = step(rng);
        const int u1 = base(rng) + std::max(0, t) * pr.m;
        const int v1 = u1 - t * pr.m;
        const int u2 = base(rng) + std::max(0, -t) * pr.l;
        const int v2 = u2 + t * pr.l;
        b.add({v1, v2, u1, u2}, cplx(gauss(rng), gauss(rng)));
    }
    return b + b.dagger();
}

}  // namespace

TEST_CASE("realized resonant polynomials commute with the energy") {
    std::mt19937 rng(59);
    for (auto [l, m] : {std::pair{1, 2}, {2, 3}}) {
        const auto pr = validate_params(l, m, 0.6);
        const auto lb = make_label(pr, 4, l - 1, 0);
        for (int it = 0; it < 10; ++it) {
            const auto f1 = random_resonant(pr, rng, 6);
            const auto mat = realize_in_rep(f1, pr, lb);
            CHECK((mat - mat.adjoint()).cwiseAbs().maxCoeff() <=
                  1e-13 * std::max(1.0, mat.cwiseAbs().maxCoeff()));
            // the block energy is scalar, so commutation is exact by shape;
            // verify against the full fock realization instead
            FockBasis basis(required_cutoff(pr, lb));
            const auto lad = build_ladder(pr, basis);
            Eigen::MatrixXcd fock_mat = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
            for (const auto& [k, c] : f1.terms()) {
                FockOperator term = FockOperator::identity(basis.dim());
                for (int i = 0; i < k[3]; ++i) term = lad.b2.compose(term);
                for (int i = 0; i < k[2]; ++i) term = lad.b1.compose(term);
                for (int i = 0; i < k[1]; ++i) term = lad.b2d.compose(term);
                for (int i = 0; i < k[0]; ++i) term = lad.b1d.compose(term);
                fock_mat += c * term.dense().cast<cplx>();
            }
            const auto sub = invariant_subspace(pr, lb, basis);
            Eigen::MatrixXcd compressed(lb.dim(), lb.dim());
            for (int a = 0; a < lb.dim(); ++a)
                for (int b2 = 0; b2 < lb.dim(); ++b2) compressed(a, b2) = fock_mat(sub[a], sub[b2]);
            CHECK((compressed - mat).cwiseAbs().maxCoeff() <=
                  1e-11 * std::max(1.0, mat.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("generator expression of resonant polynomials") {
    SECTION("number operator") {
        const auto pr = validate_params(2, 3, 1.0);
        const auto res = express_in_generators(BosonicPolynomial::monomial(1, 0, 1, 0), pr);
        REQUIRE(res.expressed);
        REQUIRE(res.poly.terms.size() == 1);
        CHECK(res.poly.terms.begin()->first == OrderedPoly::Key{0, 1, 0, 0});
    }
    SECTION("raising monomial for 1:2") {
        const auto pr = validate_params(1, 2, 1.0);
        const auto res = express_in_generators(BosonicPolynomial::monomial(0, 1, 2, 0), pr);
        REQUIRE(res.expressed);
        REQUIRE(res.poly.terms.size() == 1);
        CHECK(res.poly.terms.begin()->first == OrderedPoly::Key{1, 0, 0, 0});
    }
    SECTION("orientation for 1:1") {
        const auto pr = validate_params(1, 1, 1.0);
        const auto res = express_in_generators(BosonicPolynomial::monomial(1, 0, 0, 1), pr);
        REQUIRE(res.expressed);
        REQUIRE(res.poly.terms.size() == 1);
        CHECK(res.poly.terms.begin()->first == OrderedPoly::Key{0, 0, 0, 1});
    }
    SECTION("nonresonant terms are flagged, not silently dropped") {
        const auto pr = validate_params(1, 2, 1.0);
        const auto res = express_in_generators(BosonicPolynomial::monomial(1, 0, 0, 0), pr);
        CHECK_FALSE(res.expressed);
        REQUIRE(res.rejected.size() == 1);
    }
    SECTION("expressed form realizes identically") {
        std::mt19937 rng(61);
        for (auto [l, m] : {std::pair{1, 1}, {1, 2}, {2, 3}}) {
            const auto pr = validate_params(l, m, 0.8);
            const auto lb = make_label(pr, 4, 0, m - 1);
            const auto g = build_matrices(pr, lb);
            for (int it = 0; it < 8; ++it) {
                const auto f1 = random_resonant(pr, rng, 5);
                const auto res = express_in_generators(f1, pr);
                REQUIRE(res.expressed);
                const Eigen::MatrixXcd via_generators = res.poly.realize(g);
                const Eigen::MatrixXcd direct = realize_in_rep(f1, pr, lb);
                const double scale = std::max(1.0, direct.cwiseAbs().maxCoeff());
                CHECK((via_generators - direct).cwiseAbs().maxCoeff() <= 1e-10 * scale);
            }
        }
    }
}
