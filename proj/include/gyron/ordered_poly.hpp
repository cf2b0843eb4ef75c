#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <map>

#include "gyron/rep_matrices.hpp"

namespace gyron {

/// Polynomial in the generators with the fixed operator ordering
/// A_+^a  A_1^b  A_2^c  A_-^d   (raising leftmost, lowering rightmost).
/// Term key: {a, b, c, d}.
struct OrderedPoly {
    using Key = std::array<int, 4>;
    std::map<Key, std::complex<double>> terms;

    OrderedPoly& add(const Key& k, std::complex<double> c) {
        auto& v = terms[k];
        v += c;
        if (std::abs(v) == 0.0) terms.erase(k);
        return *this;
    }

    static OrderedPoly monomial(const Key& k, std::complex<double> c = 1.0) {
        OrderedPoly p;
        p.add(k, c);
        return p;
    }

    /// Substitute the block matrices in the declared order.
    Eigen::MatrixXcd realize(const GeneratorMatrices& g) const {
        const int d = g.dim();
        const Eigen::MatrixXd ap = g.a_plus(), am = g.a_minus();
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
        for (const auto& [key, coeff] : terms) {
            Eigen::MatrixXd t = Eigen::MatrixXd::Identity(d, d);
            for (int i = 0; i < key[0]; ++i) t = ap * t;
            Eigen::VectorXd diag = Eigen::VectorXd::Ones(d);
            for (int i = 0; i < key[1]; ++i) diag = diag.cwiseProduct(g.a1_diag);
            for (int i = 0; i < key[2]; ++i) diag = diag.cwiseProduct(g.a2_diag);
            t = t * diag.asDiagonal();
            for (int i = 0; i < key[3]; ++i) t = t * am;
            out += coeff * t;
        }
        return out;
    }

    Eigen::MatrixXcd realize(const ResonanceParams& pr, const RepLabel& lb) const {
        return realize(build_matrices(pr, lb));
    }

    /// Evaluate as a commutative polynomial (classical substitution).
    std::complex<double> eval_classical(const std::array<std::complex<double>, 4>& a) const {
        std::complex<double> s = 0.0;
        for (const auto& [key, coeff] : terms) {
            std::complex<double> t = coeff;
            for (int v = 0; v < 4; ++v)
                for (int i = 0; i < key[v]; ++i) t *= a[v];
            s += t;
        }
        return s;
    }

    /// Commutative partial derivative with respect to variable v in {0..3}.
    OrderedPoly partial(int v) const {
        OrderedPoly out;
        for (const auto& [key, coeff] : terms) {
            if (key[v] == 0) continue;
            Key k = key;
            k[v] -= 1;
            out.add(k, coeff * double(key[v]));
        }
        return out;
    }
};

}  // namespace gyron
