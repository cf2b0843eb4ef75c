#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "gyron/params.hpp"
#include "gyron/structure.hpp"

namespace gyron {

/// Generator matrices of one irreducible block in its orthonormal basis.
/// a1, a2 are diagonal; the raising generator has a single nonzero
/// subdiagonal, and the lowering one is its transpose, so banded storage
/// is canonical.
struct GeneratorMatrices {
    ResonanceParams params;
    RepLabel label;
    Eigen::VectorXd a1_diag;         // size r+1
    Eigen::VectorXd a2_diag;         // size r+1
    Eigen::VectorXd a_plus_subdiag;  // size r, entry n-1 sits at (n, n-1)

    int dim() const { return label.dim(); }

    Eigen::MatrixXd a1() const { return a1_diag.asDiagonal(); }
    Eigen::MatrixXd a2() const { return a2_diag.asDiagonal(); }

    Eigen::MatrixXd a_plus() const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim(), dim());
        for (int n = 1; n < dim(); ++n) m(n, n - 1) = a_plus_subdiag(n - 1);
        return m;
    }

    Eigen::MatrixXd a_minus() const { return a_plus().transpose(); }
};

/// Matrix elements of the block labelled (r,q,p). Factorial ratios go through
/// lgamma so entries stay finite up to r of several hundred.
inline GeneratorMatrices build_matrices(const ResonanceParams& pr, const RepLabel& lb) {
    const int r = lb.r, q = lb.q, p = lb.p, l = pr.l, m = pr.m;
    const double lh = std::log(pr.hbar);
    GeneratorMatrices g{pr, lb, Eigen::VectorXd(r + 1), Eigen::VectorXd(r + 1), Eigen::VectorXd(r)};
    for (int n = 0; n <= r; ++n) {
        g.a1_diag(n) = pr.hbar * (p + double(r - n) * m);
        g.a2_diag(n) = pr.hbar * (q + double(n) * l);
    }
    for (int n = 1; n <= r; ++n) {
        const double lg = 0.5 * ((l + m) * lh + std::lgamma(q + double(n) * l + 1) -
                                 std::lgamma(q + double(n - 1) * l + 1) +
                                 std::lgamma(p + double(r - n + 1) * m + 1) -
                                 std::lgamma(p + double(r - n) * m + 1));
        const double v = std::exp(lg);
        if (!std::isfinite(v)) {
            throw OverflowError("raising entry overflow at (" + std::to_string(n) + "," +
                                std::to_string(n - 1) + ")");
        }
        g.a_plus_subdiag(n - 1) = v;
    }
    return g;
}

/// The same block realized as differential operators acting on monomials,
/// then conjugated into the orthonormal basis. Independent construction used
/// as a consistency check on build_matrices.
inline GeneratorMatrices build_diffop_matrices(const ResonanceParams& pr, const RepLabel& lb) {
    const int r = lb.r, q = lb.q, p = lb.p, l = pr.l, m = pr.m;
    GeneratorMatrices g{pr, lb, Eigen::VectorXd(r + 1), Eigen::VectorXd(r + 1), Eigen::VectorXd(r)};

    // Euler-operator eigenvalues on the monomial of degree n.
    for (int n = 0; n <= r; ++n) {
        g.a1_diag(n) = pr.hbar * (double(r) * m + p) - pr.hbar * m * double(n);
        g.a2_diag(n) = pr.hbar * q + pr.hbar * l * double(n);
    }

    // Raising factor on degree n (integer product form) and basis norms.
    auto f_plus = [&](int n) {
        double v = std::pow(pr.hbar, m);
        for (int j = 1; j <= m; ++j) v *= p + double(r - n) * m + j;
        return v;
    };
    auto log_norm = [&](int k) {
        return 0.5 * ((m - l) * double(k) * std::log(pr.hbar) + std::lgamma(q + 1.0) +
                      std::lgamma(p + double(r) * m + 1) - std::lgamma(q + double(k) * l + 1) -
                      std::lgamma(p + double(r - k) * m + 1));
    };
    for (int n = 1; n <= r; ++n) {
        g.a_plus_subdiag(n - 1) = f_plus(n) * std::exp(log_norm(n - 1) - log_norm(n));
    }
    return g;
}

/// Residuals of the five commutation relations as matrix identities,
/// normalized by max(1, ||rho(a1,a2)||_inf).
struct RelationReport {
    double comm_a1_a2 = 0;
    double comm_a1_aplus = 0;
    double comm_a1_aminus = 0;
    double comm_a2_aplus = 0;
    double comm_a2_aminus = 0;
    double comm_aminus_aplus = 0;
    double scale = 1;

    double max_residual() const {
        return std::max({comm_a1_a2, comm_a1_aplus, comm_a1_aminus, comm_a2_aplus, comm_a2_aminus,
                         comm_aminus_aplus});
    }
    double max_relative() const { return max_residual() / scale; }
};

inline RelationReport check_relations(const GeneratorMatrices& g, const StructureData& s) {
    const auto& pr = g.params;
    const Eigen::MatrixXd A1 = g.a1(), A2 = g.a2(), Ap = g.a_plus(), Am = g.a_minus();
    const int n = g.dim();

    Eigen::VectorXd rho_diag(n), rho_step_diag(n);
    for (int i = 0; i < n; ++i) {
        rho_diag(i) = s.rho(g.a1_diag(i), g.a2_diag(i));
        const auto [b1, b2] = s.step(g.a1_diag(i), g.a2_diag(i));
        rho_step_diag(i) = s.rho(b1, b2);
    }

    RelationReport rep;
    auto inf_norm = [](const Eigen::MatrixXd& m2) { return m2.cwiseAbs().maxCoeff(); };
    rep.scale = std::max(1.0, rho_diag.cwiseAbs().maxCoeff());
    rep.comm_a1_a2 = inf_norm(A1 * A2 - A2 * A1);
    rep.comm_a1_aplus = inf_norm(A1 * Ap - Ap * A1 + pr.hbar * pr.m * Ap);
    rep.comm_a1_aminus = inf_norm(A1 * Am - Am * A1 - pr.hbar * pr.m * Am);
    rep.comm_a2_aplus = inf_norm(A2 * Ap - Ap * A2 - pr.hbar * pr.l * Ap);
    rep.comm_a2_aminus = inf_norm(A2 * Am - Am * A2 + pr.hbar * pr.l * Am);
    Eigen::MatrixXd rhs = (rho_step_diag - rho_diag).asDiagonal();
    rep.comm_aminus_aplus = inf_norm(Am * Ap - Ap * Am - rhs);
    return rep;
}

/// Values and residuals of the two central elements on one block: the linear
/// form equals the block energy, and the quadratic element vanishes.
struct CasimirReport {
    double kappa_value = 0;        // mean diagonal of l*a1 + m*a2
    double kappa_residual = 0;     // relative deviation from E * I
    double casimir_residual = 0;   // relative deviation of a+ a- - rho(a) from 0
};

inline CasimirReport casimir_values(const GeneratorMatrices& g, const StructureData& s,
                                    const RepLabel& lb) {
    const auto& pr = g.params;
    const int n = g.dim();
    const double energy = rep_energy(pr, lb);

    CasimirReport rep;
    Eigen::VectorXd kap = pr.l * g.a1_diag + pr.m * g.a2_diag;
    rep.kappa_value = kap.mean();
    rep.kappa_residual =
        (kap.array() - energy).abs().maxCoeff() / std::max(1.0, std::abs(energy));

    Eigen::MatrixXd C = g.a_plus() * g.a_minus();
    for (int i = 0; i < n; ++i) C(i, i) -= s.rho(g.a1_diag(i), g.a2_diag(i));
    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(s.rho(g.a1_diag(i), g.a2_diag(i))));
    rep.casimir_residual = C.cwiseAbs().maxCoeff() / scale;
    return rep;
}

}  // namespace gyron
