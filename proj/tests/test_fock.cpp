#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <random>

#include "gyron/fock.hpp"
#include "gyron/kernel.hpp"
#include "gyron/quantum_geometry.hpp"

using namespace gyron;
using Catch::Approx;
using cplx = std::complex<double>;

TEST_CASE("basis ordering and indexing") {
    FockBasis basis(3);
    CHECK(basis.dim() == 10);
    CHECK(basis.states[0] == std::pair{0, 0});
    CHECK(basis.states[1] == std::pair{0, 1});
    CHECK(basis.states[2] == std::pair{1, 0});
    for (int i = 0; i < basis.dim(); ++i) {
        const auto [n1, n2] = basis.states[i];
        CHECK(basis.index(n1, n2) == i);
    }
}

TEST_CASE("ladder operators") {
    const auto pr = validate_params(1, 2, 0.7);
    FockBasis basis(8);
    const auto lad = build_ladder(pr, basis);

    SECTION("vacuum expectation of b1 b1*") {
        Eigen::VectorXd vac = Eigen::VectorXd::Zero(basis.dim());
        vac(basis.index(0, 0)) = 1.0;
        const auto v = lad.b1.apply(lad.b1d.apply(vac));
        CHECK(v(basis.index(0, 0)) == Approx(pr.hbar));
    }
    SECTION("b1 annihilates mode-1 vacuum states") {
        for (int k = 0; k <= 4; ++k) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.dim());
            v(basis.index(0, k)) = 1.0;
            CHECK(lad.b1.apply(v).norm() == 0.0);
        }
    }
    SECTION("cross-mode commutator vanishes exactly on the safe core") {
        const auto c = lad.b1.compose(lad.b2d).dense() - lad.b2d.compose(lad.b1).dense();
        for (int j = 0; j < basis.dim(); ++j) {
            const auto [n1, n2] = basis.states[j];
            if (n1 + n2 + 1 > basis.cutoff) continue;
            CHECK(c.col(j).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    SECTION("canonical commutator on the safe core") {
        const auto comm = lad.b1.compose(lad.b1d).dense() - lad.b1d.compose(lad.b1).dense();
        for (int j = 0; j < basis.dim(); ++j) {
            const auto [n1, n2] = basis.states[j];
            if (n1 + n2 + 1 > basis.cutoff) continue;  // touches the truncation edge
            CHECK(comm(j, j) == Approx(pr.hbar));
        }
    }
}

TEST_CASE("commutant generators in fock space") {
    const auto pr = validate_params(1, 2, 1.0);
    FockBasis basis(10);
    const auto ops = build_A_ops(pr, basis);

    SECTION("single matrix element") {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.dim());
        v(basis.index(2, 0)) = 1.0;
        const auto w = ops.a_plus.apply(v);
        CHECK(w(basis.index(0, 1)) == Approx(std::sqrt(2.0)));  // hbar^{3/2} sqrt(2)
    }
    SECTION("a1 and a2 commute exactly") {
        const auto c = ops.a1.compose(ops.a2).dense() - ops.a2.compose(ops.a1).dense();
        CHECK(c.cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("generators preserve the oscillator energy on the safe core") {
        const auto c = ops.a_plus.compose(ops.energy).dense() -
                       ops.energy.compose(ops.a_plus).dense();
        for (int j = 0; j < basis.dim(); ++j) {
            const auto [n1, n2] = basis.states[j];
            if (n1 + n2 + pr.l + pr.m > basis.cutoff) continue;
            for (int i = 0; i < basis.dim(); ++i) CHECK(std::abs(c(i, j)) <= 1e-13);
        }
    }
    SECTION("lowering annihilates the lowest block vector") {
        const auto lb = make_label(pr, 2, 0, 1);
        FockBasis big(required_cutoff(pr, lb));
        const auto big_ops = build_A_ops(pr, big);
        Eigen::VectorXd v = Eigen::VectorXd::Zero(big.dim());
        v(big.index(lb.p + lb.r * pr.m, lb.q)) = 1.0;
        CHECK(big_ops.a_minus.apply(v).norm() == 0.0);
    }
}

TEST_CASE("invariant subspaces") {
    SECTION("1:2 two-dimensional block") {
        const auto pr = validate_params(1, 2, 1.0);
        const auto lb = make_label(pr, 1, 0, 0);
        FockBasis basis(required_cutoff(pr, lb));
        const auto sub = invariant_subspace(pr, lb, basis);
        REQUIRE(sub.size() == 2);
        CHECK(basis.states[sub[0]] == std::pair{2, 0});
        CHECK(basis.states[sub[1]] == std::pair{0, 1});
    }
    SECTION("point block") {
        const auto pr = validate_params(2, 3, 1.0);
        const auto lb = make_label(pr, 0, 1, 2);
        FockBasis basis(required_cutoff(pr, lb));
        const auto sub = invariant_subspace(pr, lb, basis);
        REQUIRE(sub.size() == 1);
        CHECK(basis.states[sub[0]] == std::pair{2, 1});
    }
    SECTION("2:3 block occupations share one energy") {
        const auto pr = validate_params(2, 3, 1.0);
        const auto lb = make_label(pr, 2, 1, 2);
        FockBasis basis(required_cutoff(pr, lb));
        const auto sub = invariant_subspace(pr, lb, basis);
        REQUIRE(sub.size() == 3);
        CHECK(basis.states[sub[0]] == std::pair{8, 1});
        CHECK(basis.states[sub[1]] == std::pair{5, 3});
        CHECK(basis.states[sub[2]] == std::pair{2, 5});
        for (int idx : sub) {
            const auto [n1, n2] = basis.states[idx];
            CHECK(pr.l * n1 + pr.m * n2 == 19);
        }
    }
    SECTION("cutoff guard") {
        const auto pr = validate_params(2, 3, 1.0);
        const auto lb = make_label(pr, 4, 1, 2);
        FockBasis small(8);
        CHECK_THROWS_AS(invariant_subspace(pr, lb, small), CutoffTooSmallError);
    }
}

TEST_CASE("projection reproduces the block matrices") {
    for (auto [l, m] : {std::pair{1, 1}, {1, 2}, {2, 3}}) {
        const auto pr = validate_params(l, m, 0.5);
        for (int r : {0, 1, 3, 6}) {
            for (int q = 0; q < l; ++q)
                for (int p = 0; p < m; ++p) {
                    const auto lb = make_label(pr, r, q, p);
                    const auto proj = project_generators(pr, lb);
                    const auto direct = build_matrices(pr, lb);
                    INFO("l=" << l << " m=" << m << " r=" << r << " q=" << q << " p=" << p);
                    const double scale = std::max(1.0, direct.a_plus().cwiseAbs().maxCoeff());
                    CHECK((proj.a1_diag - direct.a1_diag).cwiseAbs().maxCoeff() <= 1e-10 * scale);
                    CHECK((proj.a2_diag - direct.a2_diag).cwiseAbs().maxCoeff() <= 1e-10 * scale);
                    if (r > 0)
                        CHECK((proj.a_plus_subdiag - direct.a_plus_subdiag).cwiseAbs().maxCoeff() <=
                              1e-10 * scale);
                }
        }
    }
}

TEST_CASE("projected block satisfies the spin algebra") {
    const auto pr = validate_params(1, 1, 1.0);
    const auto lb = make_label(pr, 2, 0, 0);
    const auto proj = project_generators(pr, lb);
    const StructureData s(pr);
    CHECK(check_relations(proj, s).max_relative() <= 1e-13);
    // projected oscillator energy is the scalar E on the block
    Eigen::VectorXd en = pr.l * proj.a1_diag + pr.m * proj.a2_diag;
    CHECK((en.array() - rep_energy(pr, lb)).abs().maxCoeff() <= 1e-13);
}

TEST_CASE("direct-sum completeness inside a safe shell") {
    const auto pr = validate_params(1, 2, 1.0);
    const double e_max = 12.0;
    const auto labels = enumerate_reps(pr, e_max);
    std::int64_t total = 0;
    for (const auto& lb : labels) total += lb.dim();
    std::int64_t count = 0;
    for (int n1 = 0; n1 <= int(e_max); ++n1)
        for (int n2 = 0; pr.l * n1 + pr.m * n2 <= int(e_max); ++n2) ++count;
    CHECK(total == count);
}

TEST_CASE("coherent states") {
    const auto pr = validate_params(1, 1, 1.0);
    const auto lb = make_label(pr, 2, 0, 0);
    FockBasis basis(required_cutoff(pr, lb));
    const auto ops = build_A_ops(pr, basis);
    const auto fam = make_coherent_family(pr, lb, basis, ops.a_plus);

    SECTION("z=0 gives the unit lowest vector") {
        const auto v = coherent_state(fam, 0.0);
        CHECK(std::abs(v.norm() - 1.0) <= 1e-15);
    }
    SECTION("norm at |z|^2 = 1 is the binomial value 4") {
        const auto v = coherent_state(fam, cplx(1.0, 0.0));
        CHECK(v.squaredNorm() == Approx(4.0));
        CHECK(fam.norm2(1.0) == Approx(4.0));
    }
    SECTION("norm equals the kernel polynomial on random points") {
        const auto kf = kernel(pr, lb);
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> radial(-2.0, 2.0), angle(0.0, 2 * M_PI);
        for (int it = 0; it < 100; ++it) {
            const cplx z = std::polar(std::pow(10.0, radial(rng) / 2.0), angle(rng));
            const auto v = coherent_state(fam, z);
            const double kx = kf.eval(std::norm(z));
            CHECK(std::abs(v.squaredNorm() - kx) <= 1e-10 * kx);
        }
    }
    SECTION("hermitian symmetry of overlaps") {
        const cplx z(0.4, -0.3), w(-0.2, 0.8);
        const auto vz = coherent_state(fam, z);
        const auto vw = coherent_state(fam, w);
        const cplx zw = vz.dot(vw);  // conjugate-linear in the first argument
        const cplx wz = vw.dot(vz);
        CHECK(std::abs(zw - std::conj(wz)) <= 1e-14);
    }
}

TEST_CASE("coherent norms across labels") {
    for (auto [l, m] : {std::pair{1, 2}, {2, 3}}) {
        const auto pr = validate_params(l, m, 0.6);
        const auto lb = make_label(pr, 3, l - 1, m - 1);
        FockBasis basis(required_cutoff(pr, lb));
        const auto ops = build_A_ops(pr, basis);
        const auto fam = make_coherent_family(pr, lb, basis, ops.a_plus);
        const auto kf = kernel(pr, lb);
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> radial(-1.5, 1.5), angle(0.0, 2 * M_PI);
        for (int it = 0; it < 100; ++it) {
            const cplx z = std::polar(std::pow(10.0, radial(rng) / 2.0), angle(rng));
            const double n2 = coherent_state(fam, z).squaredNorm();
            const double kx = kf.eval(std::norm(z));
            CHECK(std::abs(n2 - kx) <= 1e-10 * kx);
        }
    }
}

TEST_CASE("coherent transform") {
    const auto pr = validate_params(1, 1, 1.0);
    const auto lb = make_label(pr, 1, 0, 0);
    FockBasis basis(required_cutoff(pr, lb));
    const auto ops = build_A_ops(pr, basis);
    const auto fam = make_coherent_family(pr, lb, basis, ops.a_plus);

    SECTION("transform of the lowest vector is the constant 1") {
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.dim());
        psi(fam.sub[0]) = 1.0;
        const auto c = coherent_transform_coeffs(psi, fam);
        CHECK(std::abs(c(0) - 1.0) <= 1e-15);
        CHECK(std::abs(c(1)) <= 1e-15);
    }
    SECTION("transform of the raised vector is linear in zbar") {
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.dim());
        psi(fam.sub[0]) = 1.0;
        psi = ops.a_plus.apply(psi);
        const auto c = coherent_transform_coeffs(psi, fam);
        CHECK(std::abs(c(0)) <= 1e-15);
        CHECK(std::abs(c(1)) > 0.1);
    }
}

TEST_CASE("coherent transform round trip and intertwining") {
    const auto pr = validate_params(1, 2, 1.0);
    const auto lb = make_label(pr, 2, 0, 1);
    FockBasis basis(required_cutoff(pr, lb));
    const auto ops = build_A_ops(pr, basis);
    const auto fam = make_coherent_family(pr, lb, basis, ops.a_plus);
    const MeasureDensity meas(pr, lb);

    std::mt19937 rng(3);
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.dim());
    for (int n = 0; n <= lb.r; ++n) psi(fam.sub[n]) = cplx(gauss(rng), gauss(rng));
    psi /= psi.norm();

    const auto coeffs = coherent_transform_coeffs(psi, fam);
    auto fn = [&](cplx zbar) { return eval_antiholo(coeffs, std::conj(zbar)); };
    const auto back = coherent_transform_inverse(fn, fam, [&](double x) { return meas(x); });
    CHECK((back - psi).norm() <= 1e-6);

    // intertwining: transform of (A_+ psi) equals the block matrix acting on
    // the transform of psi, in the orthonormal coefficient basis
    const auto g = build_matrices(pr, lb);
    const auto kf = kernel(pr, lb);
    Eigen::VectorXcd lhs = coherent_transform_coeffs(ops.a_plus.apply(psi), fam);
    Eigen::VectorXcd rhs_in(lb.dim()), lhs_o(lb.dim());
    for (int n = 0; n <= lb.r; ++n) {
        const double nn = std::exp(0.5 * kf.log_coeff[n]);
        lhs_o(n) = lhs(n) / nn;
        rhs_in(n) = coeffs(n) / nn;
    }
    Eigen::VectorXcd rhs = g.a_plus().cast<cplx>() * rhs_in;
    CHECK((lhs_o - rhs).cwiseAbs().maxCoeff() <= 1e-8 * rhs.cwiseAbs().maxCoeff());
}

TEST_CASE("resolution of unity on the block") {
    const auto pr = validate_params(1, 2, 1.0);
    const auto lb = make_label(pr, 2, 0, 0);
    FockBasis basis(required_cutoff(pr, lb));
    const auto ops = build_A_ops(pr, basis);
    const auto fam = make_coherent_family(pr, lb, basis, ops.a_plus);
    const auto kf = kernel(pr, lb);
    const MeasureDensity meas(pr, lb);

    // (1/2 pi hbar) int P_z P_z^dag / K  dm  ==  identity on the block
    const int d = lb.dim();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    const int n_phi = 4 * d + 8;
    for (const auto& node : radial_nodes(32, 1e-20, 32)) {
        const double w = node.w * meas(node.x);
        for (int j = 0; j < n_phi; ++j) {
            const cplx z = std::polar(std::sqrt(node.x), 2.0 * M_PI * j / n_phi);
            const auto v = fam.subspace_coeffs(z);
            acc += (w * 2.0 * M_PI / n_phi) * (v * v.adjoint());
        }
    }
    acc /= 2.0 * M_PI * pr.hbar;
    const double resid = (acc - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
    CHECK(resid <= 1e-4);
}
