#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "gyron/params.hpp"
#include "gyron/quadrature.hpp"
#include "gyron/rep_matrices.hpp"

namespace gyron {

/// Two-mode occupation basis truncated at total occupation <= cutoff,
/// ordered by grade then by n1 (graded lexicographic).
struct FockBasis {
    int cutoff = 0;
    std::vector<std::pair<int, int>> states;

    explicit FockBasis(int cut) : cutoff(cut) {
        if (cut < 1) throw NonPositiveError("fock cutoff must be >= 1");
        for (int t = 0; t <= cut; ++t)
            for (int n1 = 0; n1 <= t; ++n1) states.emplace_back(n1, t - n1);
    }

    int dim() const { return int(states.size()); }

    bool contains(int n1, int n2) const {
        return n1 >= 0 && n2 >= 0 && n1 + n2 <= cutoff;
    }

    int index(int n1, int n2) const {
        const int t = n1 + n2;
        return t * (t + 1) / 2 + n1;
    }
};

/// Sparse real operator on a FockBasis, stored by columns.
class FockOperator {
public:
    FockOperator() = default;
    explicit FockOperator(int dim) : cols_(dim) {}

    int dim() const { return int(cols_.size()); }

    void insert(int row, int col, double value) {
        if (value != 0.0) cols_[col].emplace_back(row, value);
    }

    const std::vector<std::pair<int, double>>& col(int j) const { return cols_[j]; }

    static FockOperator identity(int dim) {
        FockOperator id(dim);
        for (int j = 0; j < dim; ++j) id.insert(j, j, 1.0);
        return id;
    }

    FockOperator transpose() const {
        FockOperator out(dim());
        for (int j = 0; j < dim(); ++j)
            for (const auto& [i, v] : cols_[j]) out.insert(j, i, v);
        return out;
    }

    /// this * other (apply other first).
    FockOperator compose(const FockOperator& other) const {
        FockOperator out(dim());
        std::vector<double> acc(dim(), 0.0);
        std::vector<int> touched;
        for (int j = 0; j < dim(); ++j) {
            touched.clear();
            for (const auto& [k, v] : other.cols_[j]) {
                for (const auto& [i, w] : cols_[k]) {
                    if (acc[i] == 0.0) touched.push_back(i);
                    acc[i] += w * v;
                }
            }
            for (int i : touched) {
                out.insert(i, j, acc[i]);
                acc[i] = 0.0;
            }
        }
        return out;
    }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim());
        for (int j = 0; j < dim(); ++j) {
            if (v(j) == std::complex<double>(0.0)) continue;
            for (const auto& [i, w] : cols_[j]) out(i) += w * v(j);
        }
        return out;
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
        for (int j = 0; j < dim(); ++j) {
            if (v(j) == 0.0) continue;
            for (const auto& [i, w] : cols_[j]) out(i) += w * v(j);
        }
        return out;
    }

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim(), dim());
        for (int j = 0; j < dim(); ++j)
            for (const auto& [i, v] : cols_[j]) out(i, j) += v;
        return out;
    }

private:
    std::vector<std::vector<std::pair<int, double>>> cols_;
};

struct LadderOps {
    FockOperator b1, b2, b1d, b2d;
};

/// Annihilation/creation pairs with [b_i, b_i^*] = hbar on the safe core.
inline LadderOps build_ladder(const ResonanceParams& pr, const FockBasis& basis) {
    const int d = basis.dim();
    LadderOps ops{FockOperator(d), FockOperator(d), FockOperator(d), FockOperator(d)};
    for (int j = 0; j < d; ++j) {
        const auto [n1, n2] = basis.states[j];
        if (n1 > 0) ops.b1.insert(basis.index(n1 - 1, n2), j, std::sqrt(pr.hbar * n1));
        if (n2 > 0) ops.b2.insert(basis.index(n1, n2 - 1), j, std::sqrt(pr.hbar * n2));
        if (basis.contains(n1 + 1, n2))
            ops.b1d.insert(basis.index(n1 + 1, n2), j, std::sqrt(pr.hbar * (n1 + 1)));
        if (basis.contains(n1, n2 + 1))
            ops.b2d.insert(basis.index(n1, n2 + 1), j, std::sqrt(pr.hbar * (n2 + 1)));
    }
    return ops;
}

struct AOps {
    FockOperator a1, a2, a_plus, a_minus, energy;
};

/// Commutant generators assembled as honest products of ladder operators.
inline AOps build_A_ops(const ResonanceParams& pr, const FockBasis& basis) {
    const auto lad = build_ladder(pr, basis);
    AOps out;
    out.a1 = lad.b1d.compose(lad.b1);
    out.a2 = lad.b2d.compose(lad.b2);
    FockOperator acc = FockOperator::identity(basis.dim());
    for (int i = 0; i < pr.m; ++i) acc = lad.b1.compose(acc);
    for (int i = 0; i < pr.l; ++i) acc = lad.b2d.compose(acc);
    out.a_plus = acc;
    out.a_minus = acc.transpose();
    FockOperator en(basis.dim());
    for (int j = 0; j < basis.dim(); ++j) {
        const auto [n1, n2] = basis.states[j];
        en.insert(j, j, pr.hbar * (pr.l * double(n1) + pr.m * double(n2)));
    }
    out.energy = en;
    return out;
}

/// Truncation large enough to host the block exactly, with a margin so the
/// generator products never clip inside the block.
inline int required_cutoff(const ResonanceParams& pr, const RepLabel& lb) {
    return (lb.p + lb.r * pr.m) + (lb.q + lb.r * pr.l) + std::max(pr.l, pr.m);
}

/// Indices of the invariant-subspace states (p+(r-n)m, q+nl), n = 0..r.
inline std::vector<int> invariant_subspace(const ResonanceParams& pr, const RepLabel& lb,
                                           const FockBasis& basis) {
    if (basis.cutoff < required_cutoff(pr, lb)) {
        throw CutoffTooSmallError("cutoff " + std::to_string(basis.cutoff) + " < required " +
                                  std::to_string(required_cutoff(pr, lb)));
    }
    std::vector<int> idx(lb.r + 1);
    for (int n = 0; n <= lb.r; ++n)
        idx[n] = basis.index(lb.p + (lb.r - n) * pr.m, lb.q + n * pr.l);
    return idx;
}

/// Compress a Fock operator onto the subspace index set.
inline Eigen::MatrixXd compress(const FockOperator& op, const std::vector<int>& sub) {
    const int d = int(sub.size());
    std::vector<int> pos(op.dim(), -1);
    for (int i = 0; i < d; ++i) pos[sub[i]] = i;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < d; ++j)
        for (const auto& [row, v] : op.col(sub[j]))
            if (pos[row] >= 0) out(pos[row], j) += v;
    return out;
}

/// Oracle route to the block matrices: project the Fock-space generators onto
/// the invariant subspace. Leakage outside the band structure is an error.
inline GeneratorMatrices project_generators(const ResonanceParams& pr, const RepLabel& lb,
                                            const FockBasis& basis, const AOps& ops) {
    const auto sub = invariant_subspace(pr, lb, basis);
    const Eigen::MatrixXd a1 = compress(ops.a1, sub);
    const Eigen::MatrixXd a2 = compress(ops.a2, sub);
    const Eigen::MatrixXd ap = compress(ops.a_plus, sub);
    const int d = lb.dim();

    GeneratorMatrices g{pr, lb, a1.diagonal(), a2.diagonal(), Eigen::VectorXd(lb.r)};
    for (int n = 1; n < d; ++n) g.a_plus_subdiag(n - 1) = ap(n, n - 1);

    const double scale = std::max({1.0, a1.cwiseAbs().maxCoeff(), ap.cwiseAbs().maxCoeff()});
    double leak = (a1 - Eigen::MatrixXd(a1.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
    leak = std::max(leak, (a2 - Eigen::MatrixXd(a2.diagonal().asDiagonal())).cwiseAbs().maxCoeff());
    Eigen::MatrixXd band = Eigen::MatrixXd::Zero(d, d);
    for (int n = 1; n < d; ++n) band(n, n - 1) = ap(n, n - 1);
    leak = std::max(leak, (ap - band).cwiseAbs().maxCoeff());
    if (leak > 1e-12 * scale)
        throw Error("projection left the invariant band, leak=" + std::to_string(leak));
    return g;
}

inline GeneratorMatrices project_generators(const ResonanceParams& pr, const RepLabel& lb) {
    FockBasis basis(required_cutoff(pr, lb));
    return project_generators(pr, lb, basis, build_A_ops(pr, basis));
}

/// Holomorphic family of coherent vectors of one block. The radial amplitudes
/// t_n are produced by actually iterating the raising operator on the lowest
/// vector, so norms test the kernel polynomial independently.
struct CoherentFamily {
    ResonanceParams params;
    RepLabel label;
    std::vector<int> sub;        // Fock indices of the block
    Eigen::VectorXd amplitudes;  // t_n: coherent vector = sum_n t_n z^n e_{sub[n]}
    int fock_dim = 0;

    Eigen::VectorXcd subspace_coeffs(std::complex<double> z) const {
        const int d = label.dim();
        Eigen::VectorXcd v(d);
        std::complex<double> zp = 1.0;
        for (int n = 0; n < d; ++n) {
            v(n) = amplitudes(n) * zp;
            zp *= z;
        }
        return v;
    }

    Eigen::VectorXcd embed(std::complex<double> z) const {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(fock_dim);
        const auto c = subspace_coeffs(z);
        for (int n = 0; n < label.dim(); ++n) v(sub[n]) = c(n);
        return v;
    }

    double norm2(double x) const {
        double s = 0.0, xp = 1.0;
        for (int n = 0; n < label.dim(); ++n) {
            s += amplitudes(n) * amplitudes(n) * xp;
            xp *= x;
        }
        return s;
    }
};

inline CoherentFamily make_coherent_family(const ResonanceParams& pr, const RepLabel& lb,
                                           const FockBasis& basis, const FockOperator& a_plus) {
    const auto sub = invariant_subspace(pr, lb, basis);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.dim());
    v(sub[0]) = 1.0;
    Eigen::VectorXd amp(lb.dim());
    amp(0) = 1.0;
    // u_n = (1/hbar^l) * 1/prod_{j=1..l}(q+(n-1)l+j) * A_+ u_{n-1}; t_n = u_n at sub[n]
    for (int n = 1; n <= lb.r; ++n) {
        v = a_plus.apply(v);
        double denom = std::pow(pr.hbar, pr.l);
        for (int j = 1; j <= pr.l; ++j) denom *= lb.q + double(n - 1) * pr.l + j;
        v /= denom;
        amp(n) = v(sub[n]);
    }
    return CoherentFamily{pr, lb, sub, amp, basis.dim()};
}

/// Coherent vector per its defining series (z-power expansion of the family).
inline Eigen::VectorXcd coherent_state(const CoherentFamily& fam, std::complex<double> z) {
    return fam.embed(z);
}

/// Coherent transform of a Fock vector: nu(psi)(zbar) = (psi, P_z),
/// an antiholomorphic polynomial returned by its coefficient vector.
inline Eigen::VectorXcd coherent_transform_coeffs(const Eigen::VectorXcd& psi,
                                                  const CoherentFamily& fam) {
    Eigen::VectorXcd c(fam.label.dim());
    for (int n = 0; n < fam.label.dim(); ++n) c(n) = psi(fam.sub[n]) * fam.amplitudes(n);
    return c;
}

inline std::complex<double> eval_antiholo(const Eigen::VectorXcd& coeffs,
                                          std::complex<double> z) {
    const std::complex<double> zb = std::conj(z);
    std::complex<double> s = 0.0, zp = 1.0;
    for (int n = 0; n < coeffs.size(); ++n) {
        s += coeffs(n) * zp;
        zp *= zb;
    }
    return s;
}

/// Inverse coherent transform by quadrature against the reproducing measure:
/// psi = (1/2 pi hbar) int P_z f(zbar) L(x) dx dphi.
inline Eigen::VectorXcd coherent_transform_inverse(
    const std::function<std::complex<double>(std::complex<double>)>& f, const CoherentFamily& fam,
    const std::function<double(double)>& measure_density, int per_side_panels = 16,
    int gl_order = 32, int n_phi = -1) {
    const int d = fam.label.dim();
    if (n_phi < 0) n_phi = 4 * d + 8;
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(d);
    for (const auto& node : radial_nodes(per_side_panels * 2, 1e-20, gl_order)) {
        const double wr = node.w * measure_density(node.x);
        const double rad = std::sqrt(node.x);
        for (int j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * M_PI * j / n_phi;
            const std::complex<double> z = std::polar(rad, phi);
            acc += (wr * (2.0 * M_PI / n_phi)) * f(std::conj(z)) * fam.subspace_coeffs(z);
        }
    }
    acc /= 2.0 * M_PI * fam.params.hbar;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(fam.fock_dim);
    for (int n = 0; n < d; ++n) out(fam.sub[n]) = acc(n);
    return out;
}

}  // namespace gyron
