#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "gyron/ordered_poly.hpp"
#include "gyron/params.hpp"

namespace gyron {

/// Normal-ordered two-mode polynomial  sum beta  b1*^v1 b2*^v2 b1^u1 b2^u2.
/// Term key: {v1, v2, u1, u2} (creation exponents first).
class BosonicPolynomial {
public:
    using Key = std::array<int, 4>;

    BosonicPolynomial& add(const Key& k, std::complex<double> c) {
        auto& v = terms_[k];
        v += c;
        if (std::abs(v) == 0.0) terms_.erase(k);
        return *this;
    }

    static BosonicPolynomial monomial(int v1, int v2, int u1, int u2,
                                      std::complex<double> c = 1.0) {
        BosonicPolynomial p;
        p.add({v1, v2, u1, u2}, c);
        return p;
    }

    const std::map<Key, std::complex<double>>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    BosonicPolynomial dagger() const {
        BosonicPolynomial out;
        for (const auto& [k, c] : terms_) out.add({k[2], k[3], k[0], k[1]}, std::conj(c));
        return out;
    }

    bool is_hermitian(double tol = 0.0) const {
        for (const auto& [k, c] : terms_) {
            const Key kd{k[2], k[3], k[0], k[1]};
            auto it = terms_.find(kd);
            const std::complex<double> cd = it == terms_.end() ? 0.0 : it->second;
            if (std::abs(c - std::conj(cd)) > tol) return false;
        }
        return true;
    }

    BosonicPolynomial operator+(const BosonicPolynomial& o) const {
        BosonicPolynomial out = *this;
        for (const auto& [k, c] : o.terms_) out.add(k, c);
        return out;
    }

    BosonicPolynomial operator*(std::complex<double> s) const {
        BosonicPolynomial out;
        for (const auto& [k, c] : terms_) out.add(k, c * s);
        return out;
    }

private:
    std::map<Key, std::complex<double>> terms_;
};

struct LadderFactor {
    int mode = 1;        // 1 or 2
    bool dagger = false;
};

/// Rewrite a product of ladder factors into normal order with [b, b*] = hbar.
/// Modes commute, so each mode's subword is reduced independently.
inline BosonicPolynomial normal_order(const std::vector<LadderFactor>& word, double hbar) {
    if (word.size() > 8) throw Error("normal_order supports products of at most 8 factors");
    // per-mode polynomial in (v, u): map (v,u) -> coeff
    using Mode = std::map<std::array<int, 2>, double>;
    Mode m1{{{0, 0}, 1.0}}, m2{{{0, 0}, 1.0}};
    auto mul = [&](Mode& m, bool dagger) {
        Mode out;
        for (const auto& [k, c] : m) {
            if (!dagger) {
                out[{k[0], k[1] + 1}] += c;
            } else {
                // (b*^v b^u) b* = b*^{v+1} b^u + hbar * u * b*^v b^{u-1}
                out[{k[0] + 1, k[1]}] += c;
                if (k[1] > 0) out[{k[0], k[1] - 1}] += c * hbar * k[1];
            }
        }
        m = std::move(out);
    };
    for (const auto& f : word) mul(f.mode == 1 ? m1 : m2, f.dagger);
    BosonicPolynomial out;
    for (const auto& [k1, c1] : m1)
        for (const auto& [k2, c2] : m2) out.add({k1[0], k2[0], k1[1], k2[1]}, c1 * c2);
    return out;
}

/// First-order averaging: keep exactly the terms with l v1 + m v2 = l u1 + m u2.
inline BosonicPolynomial project_resonant(const BosonicPolynomial& b, const ResonanceParams& pr) {
    BosonicPolynomial out;
    for (const auto& [k, c] : b.terms()) {
        if (std::int64_t(pr.l) * k[0] + std::int64_t(pr.m) * k[1] ==
            std::int64_t(pr.l) * k[2] + std::int64_t(pr.m) * k[3])
            out.add(k, c);
    }
    return out;
}

/// Matrix of a resonant polynomial on the invariant subspace of one block,
/// by ladder action on the occupation pairs (p+(r-n)m, q+nl).
inline Eigen::MatrixXcd realize_in_rep(const BosonicPolynomial& f1, const ResonanceParams& pr,
                                       const RepLabel& lb) {
    const int r = lb.r;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(r + 1, r + 1);
    for (const auto& [k, c] : f1.terms()) {
        const auto [v1, v2, u1, u2] = k;
        if (std::int64_t(pr.l) * v1 + std::int64_t(pr.m) * v2 !=
            std::int64_t(pr.l) * u1 + std::int64_t(pr.m) * u2)
            throw Error("realize_in_rep requires a resonant polynomial");
        // target shift along the subspace ladder
        const int step_num = v2 - u2;
        if (step_num % pr.l != 0) continue;
        const int t = step_num / pr.l;
        for (int n = 0; n <= r; ++n) {
            const int n1 = lb.p + (r - n) * pr.m;
            const int n2 = lb.q + n * pr.l;
            if (u1 > n1 || u2 > n2) continue;
            const int np = n + t;
            if (np < 0 || np > r) continue;
            const double lg = 0.5 * ((v1 + v2 + u1 + u2) * std::log(pr.hbar) +
                                     std::lgamma(n1 + 1.0) - std::lgamma(n1 - u1 + 1.0) +
                                     std::lgamma(n1 - u1 + v1 + 1.0) - std::lgamma(n1 - u1 + 1.0) +
                                     std::lgamma(n2 + 1.0) - std::lgamma(n2 - u2 + 1.0) +
                                     std::lgamma(n2 - u2 + v2 + 1.0) - std::lgamma(n2 - u2 + 1.0));
            out(np, n) += c * std::exp(lg);
        }
    }
    return out;
}

/// Result of rewriting a resonant polynomial in ordered generator form.
struct ExpressResult {
    bool expressed = true;
    OrderedPoly poly;
    std::vector<BosonicPolynomial::Key> rejected;  // terms that are not resonant
};

/// Every resonant normal-ordered monomial factors through the generators:
///   t >= 0:  b1*^{v1} b2*^{v2} b1^{u1} b2^{u2} = A_+^t  G(A_1, A_2)
///   t <  0:  ...                               = G(A_1, A_2)  A_-^{|t|}
/// with G a product of falling-factorial polynomials; t = (v2-u2)/l.
inline ExpressResult express_in_generators(const BosonicPolynomial& f1,
                                           const ResonanceParams& pr) {
    ExpressResult res;
    const double hb = pr.hbar;
    auto falling = [&](int count, double shift) {
        // prod_{i=0}^{count-1} (u - shift - i hbar) as coefficient vector in u
        std::vector<double> poly{1.0};
        for (int i = 0; i < count; ++i) {
            std::vector<double> next(poly.size() + 1, 0.0);
            const double c0 = -(shift + i * hb);
            for (std::size_t j = 0; j < poly.size(); ++j) {
                next[j] += poly[j] * c0;
                next[j + 1] += poly[j];
            }
            poly = std::move(next);
        }
        return poly;
    };
    for (const auto& [k, c] : f1.terms()) {
        const auto [v1, v2, u1, u2] = k;
        const bool resonant = std::int64_t(pr.l) * v1 + std::int64_t(pr.m) * v2 ==
                              std::int64_t(pr.l) * u1 + std::int64_t(pr.m) * u2;
        if (!resonant || (v2 - u2) % pr.l != 0) {
            res.expressed = false;
            res.rejected.push_back(k);
            continue;
        }
        const int t = (v2 - u2) / pr.l;
        if (t >= 0) {
            const auto g1 = falling(v1, double(pr.m) * t * hb);
            const auto g2 = falling(u2, 0.0);
            for (std::size_t i = 0; i < g1.size(); ++i)
                for (std::size_t j = 0; j < g2.size(); ++j)
                    if (g1[i] * g2[j] != 0.0)
                        res.poly.add({t, int(i), int(j), 0}, c * g1[i] * g2[j]);
        } else {
            const int tau = -t;
            const auto g1 = falling(u1, double(pr.m) * tau * hb);
            const auto g2 = falling(v2, 0.0);
            for (std::size_t i = 0; i < g1.size(); ++i)
                for (std::size_t j = 0; j < g2.size(); ++j)
                    if (g1[i] * g2[j] != 0.0)
                        res.poly.add({0, int(i), int(j), tau}, c * g1[i] * g2[j]);
        }
    }
    return res;
}

}  // namespace gyron
