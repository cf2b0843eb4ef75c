#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "gyron/classical_leaf.hpp"
#include "gyron/kernel.hpp"
#include "gyron/ordered_poly.hpp"
#include "gyron/rep_matrices.hpp"

namespace gyron {

/// Radial density L(x) of the reproducing measure dm = L K dx dphi.
/// Evaluated as a one-dimensional integral over the oscillator energy in the
/// scaled variables A_i = hbar*u_i, where it reproduces the block's Gram
/// matrix exactly:  (1/hbar) int x^n L dx = 1/c_n.
class MeasureDensity {
public:
    MeasureDensity(const ResonanceParams& pr, const RepLabel& lb) : pr_(pr), lb_(lb) {}

    const ResonanceParams& params() const { return pr_; }
    const RepLabel& label() const { return lb_; }

    double operator()(double x) const {
        auto it = cache_.find(x);
        if (it != cache_.end()) return it->second;
        const double v = evaluate(x);
        cache_.emplace(x, v);
        return v;
    }

    /// (1/(2 pi hbar)) * integral of dm over the sphere -> r + 1. The measure
    /// has integrable pole singularities, so the grading reaches 1e-30.
    double dm_integral(const KernelFunction& k, int per_side_panels = 60, int gl_order = 32) const {
        return integrate_radial([&](double x) { return (*this)(x)*k.eval(x); }, per_side_panels,
                                1e-30, gl_order) /
               pr_.hbar;
    }

private:
    double evaluate(double x) const {
        const int l = pr_.l, m = pr_.m, r = lb_.r, q = lb_.q, p = lb_.p;
        // scaled leaf variables: u2^l u1^{-m} = x * hbar^{m-l}
        const double lx_scaled = std::log(x) + (m - l) * std::log(pr_.hbar);
        const double log_pref = -std::lgamma(p + double(r) * m + 1) - std::lgamma(q + 1.0);

        auto integrand = [&](double u) {
            if (u <= 0.0) return 0.0;
            const auto pt = leaf_point_log(u, pr_, lx_scaled);
            if (pt.a1 <= 0.0 || pt.a2 <= 0.0) return 0.0;
            const double lg = (double(r) * m + p) * std::log(pt.a1) + q * std::log(pt.a2) -
                              std::log(double(l) * l / pt.a2 + double(m) * m / pt.a1) -
                              (pt.a1 + pt.a2) + log_pref;
            return std::exp(lg);
        };

        // Panels of fixed width until the integrand is negligible relative to
        // its running peak.
        const double width = double(r) * m + p + q + 20.0;
        double total = 0.0, peak = 0.0;
        const int max_panels = 400;
        int panel = 0;
        for (; panel < max_panels; ++panel) {
            const double a = panel * width, b = a + width;
            const auto& rule = gauss_legendre(200);
            const double c = 0.5 * (a + b), h = 0.5 * (b - a);
            double s = 0.0, pmax = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double v = integrand(c + h * rule.nodes[i]);
                s += rule.weights[i] * v;
                pmax = std::max(pmax, v);
            }
            total += s * h;
            peak = std::max(peak, pmax);
            if (panel >= 1 && pmax < 1e-16 * peak) break;
        }
        if (panel == max_panels)
            throw QuadratureNotConvergedError("measure density integrand did not decay");
        return total * pr_.hbar / x;
    }

    ResonanceParams pr_;
    RepLabel lb_;
    mutable std::map<double, double> cache_;
};

/// Wick symbol of a block operator, stored by diagonals ("bands") of the
/// matrix:  f(zbar, z) = sum_{d>=0} zbar^d T_d(x) + sum_{e>0} z^e T_{-e}(x),
/// T_d = S_d(x)/k(x) with S_d a polynomial whose coefficients are matrix
/// entries times basis norms. All radial evaluation shares the kernel's
/// log-space shift, so symbols are finite on the whole sphere.
class SymbolField {
public:
    struct Band {
        int d = 0;                               // n - s of the stored diagonal
        std::vector<double> logmag;              // log |b|
        std::vector<std::complex<double>> phase;  // b/|b| (0 if b == 0)
    };

    struct Radial {
        std::complex<double> t, tp, tpp;  // T, T', T''
    };

    struct Jet {
        std::complex<double> f, dz, dzbar;
    };

    SymbolField() = default;

    SymbolField(const Eigen::MatrixXcd& op, KernelFunction k) : k_(std::move(k)) {
        const int dim = k_.degree() + 1;
        for (int d = -k_.degree(); d <= k_.degree(); ++d) {
            Band band;
            band.d = d;
            const int len = dim - std::abs(d);
            band.logmag.resize(len);
            band.phase.resize(len);
            bool any = false;
            for (int s = 0; s < len; ++s) {
                // entry F_{n, col}: for d >= 0 power x^col with col = s; for
                // d < 0 power x^row with row = s.
                const int row = d >= 0 ? s + d : s;
                const int col = d >= 0 ? s : s - d;
                const std::complex<double> b =
                    op(row, col) * std::exp(0.5 * (k_.log_coeff[row] + k_.log_coeff[col]));
                const double ab = std::abs(b);
                band.logmag[s] = ab > 0.0 ? std::log(ab) : -1e300;
                band.phase[s] = ab > 0.0 ? b / ab : 0.0;
                any = any || ab > 0.0;
            }
            if (any) bands_.push_back(std::move(band));
        }
    }

    const KernelFunction& kernel_function() const { return k_; }
    const std::vector<Band>& bands() const { return bands_; }

    bool axisymmetric() const {
        for (const auto& b : bands_)
            if (b.d != 0) return false;
        return true;
    }

    /// True when the only bands are d in {-1, 0, +1} (single-cosine symbols).
    bool single_band() const {
        for (const auto& b : bands_)
            if (std::abs(b.d) > 1) return false;
        return true;
    }

    /// T_d and its first two radial derivatives at x (> 0).
    Radial band_radial(const Band& band, double x) const {
        const auto mo = kernel_moments(k_, x);
        const double lx = std::log(x);
        std::complex<double> s0 = 0, s1 = 0, s2 = 0;
        for (std::size_t i = 0; i < band.logmag.size(); ++i) {
            const std::complex<double> w = band.phase[i] * std::exp(band.logmag[i] + double(i) * lx - mo.shift);
            s0 += w;
            s1 += w * double(i);
            s2 += w * double(i) * double(i);
        }
        const double kk = mo.ksum;
        const double k1 = mo.mu * kk;
        const double k2 = (mo.m2 + mo.mu * mo.mu) * kk;
        Radial rad;
        rad.t = s0 / kk;
        rad.tp = (s1 * kk - s0 * k1) / (x * kk * kk);
        rad.tpp = (s2 * kk - s0 * k2 - (s1 * kk - s0 * k1) * (1.0 + 2.0 * k1 / kk)) / (x * x * kk * kk);
        return rad;
    }

    std::complex<double> value(double x, double phi) const {
        std::complex<double> s = 0.0;
        const double rad = std::sqrt(x);
        for (const auto& band : bands_) {
            const auto tr = band_radial(band, x);
            const int e = std::abs(band.d);
            // zbar^d for d>=0, z^{|d|} for d<0
            const std::complex<double> angular =
                std::polar(std::pow(rad, e), band.d >= 0 ? -band.d * phi : e * phi);
            s += angular * tr.t;
        }
        return s;
    }

    /// Value and holomorphic/antiholomorphic derivatives at the point.
    Jet jet(double x, double phi) const {
        Jet out{0.0, 0.0, 0.0};
        const double rad = std::sqrt(x);
        const std::complex<double> z = std::polar(rad, phi);
        const std::complex<double> zb = std::conj(z);
        for (const auto& band : bands_) {
            const auto tr = band_radial(band, x);
            if (band.d >= 0) {
                const int d = band.d;
                const std::complex<double> zbd = std::pow(zb, d);
                out.f += zbd * tr.t;
                out.dz += zbd * zb * tr.tp;
                out.dzbar += d > 0 ? std::pow(zb, d - 1) * (double(d) * tr.t + x * tr.tp)
                                   : z * tr.tp;
            } else {
                const int e = -band.d;
                const std::complex<double> ze = std::pow(z, e);
                out.f += ze * tr.t;
                out.dzbar += ze * z * tr.tp;
                out.dz += std::pow(z, e - 1) * (double(e) * tr.t + x * tr.tp);
            }
        }
        return out;
    }

private:
    KernelFunction k_;
    std::vector<Band> bands_;
};

inline SymbolField wick_symbol(const Eigen::MatrixXcd& op, const ResonanceParams& pr,
                               const RepLabel& lb) {
    return SymbolField(op, kernel(pr, lb));
}

/// Wick symbols of the four generators (the quantum coordinate functions).
struct QuantumCoords {
    SymbolField a1, a2, a_plus, a_minus;
};

inline QuantumCoords quantum_coords(const ResonanceParams& pr, const RepLabel& lb) {
    const auto g = build_matrices(pr, lb);
    const auto k = kernel(pr, lb);
    return QuantumCoords{SymbolField(g.a1().cast<std::complex<double>>(), k),
                         SymbolField(g.a2().cast<std::complex<double>>(), k),
                         SymbolField(g.a_plus().cast<std::complex<double>>(), k),
                         SymbolField(g.a_minus().cast<std::complex<double>>(), k)};
}

/// Star product through operator composition: symbol of F * G.
inline SymbolField star_product(const Eigen::MatrixXcd& f_op, const Eigen::MatrixXcd& g_op,
                                const ResonanceParams& pr, const RepLabel& lb) {
    return wick_symbol(f_op * g_op, pr, lb);
}

/// Analytic continuation f#(a|b) of a Wick symbol: antiholomorphic in the
/// left slot, holomorphic in the right slot.
inline std::complex<double> symbol_continuation(const Eigen::MatrixXcd& op,
                                                const KernelFunction& k, std::complex<double> a,
                                                std::complex<double> b) {
    const int dim = k.degree() + 1;
    const std::complex<double> ab = std::conj(a);
    const double la = std::abs(ab) > 0 ? std::log(std::abs(ab)) : -1e300;
    const double lb = std::abs(b) > 0 ? std::log(std::abs(b)) : -1e300;
    double shift = k.log_coeff[0];
    for (int n = 1; n < dim; ++n) shift = std::max(shift, k.log_coeff[n] + n * (la + lb));
    std::complex<double> num = 0.0, den = 0.0;
    const std::complex<double> ua = std::abs(ab) > 0 ? ab / std::abs(ab) : 0.0;
    const std::complex<double> ub = std::abs(b) > 0 ? b / std::abs(b) : 0.0;
    for (int n = 0; n < dim; ++n) {
        for (int s = 0; s < dim; ++s) {
            if (op(n, s) == std::complex<double>(0.0)) continue;
            const double lm = 0.5 * (k.log_coeff[n] + k.log_coeff[s]) + n * la + s * lb - shift;
            if (lm < -700.0) continue;
            num += op(n, s) * std::pow(ua, n) * std::pow(ub, s) * std::exp(lm);
        }
        const double lk = k.log_coeff[n] + n * (la + lb) - shift;
        if (lk > -700.0) den += std::pow(ua * ub, n) * std::exp(lk);
    }
    return num / den;
}

/// Reproducing-kernel continuation K#(a|b) normalized to the probability
/// function p_a(b) = |K#(a|b)|^2 / (K(a) K(b)).
inline double probability_function(const KernelFunction& k, std::complex<double> a,
                                   std::complex<double> b) {
    const int dim = k.degree() + 1;
    const double la = std::abs(a) > 0 ? std::log(std::abs(a)) : -1e300;
    const double lb = std::abs(b) > 0 ? std::log(std::abs(b)) : -1e300;
    // log K(a), log K(b), and K#(a|b) with a common shift
    auto log_k = [&](double lx2) {  // lx2 = log|z|^2... here pass 2*log|z|
        double shift = k.log_coeff[0];
        for (int n = 1; n < dim; ++n) shift = std::max(shift, k.log_coeff[n] + n * lx2);
        double s = 0.0;
        for (int n = 0; n < dim; ++n) s += std::exp(k.log_coeff[n] + n * lx2 - shift);
        return shift + std::log(s);
    };
    const double lab = la + lb;
    double shift = k.log_coeff[0];
    for (int n = 1; n < dim; ++n) shift = std::max(shift, k.log_coeff[n] + n * lab);
    std::complex<double> cross = 0.0;
    const std::complex<double> u = (std::abs(a) > 0 && std::abs(b) > 0)
                                       ? std::conj(a) * b / (std::abs(a) * std::abs(b))
                                       : 0.0;
    for (int n = 0; n < dim; ++n) {
        const double lm = k.log_coeff[n] + n * lab - shift;
        if (lm > -700.0) cross += std::pow(u, n) * std::exp(lm);
    }
    const double log_p = 2.0 * (shift + std::log(std::abs(cross))) - log_k(2.0 * la) - log_k(2.0 * lb);
    return std::exp(log_p);
}

/// Direct quadrature of the convolution product of two symbols at the point a
/// (small-r cross check of the operator-composition route).
inline std::complex<double> star_product_quadrature(const Eigen::MatrixXcd& f_op,
                                                    const Eigen::MatrixXcd& g_op,
                                                    const ResonanceParams& pr, const RepLabel& lb,
                                                    const MeasureDensity& meas,
                                                    std::complex<double> a, int per_side_panels = 12,
                                                    int gl_order = 24, int n_phi = -1) {
    const auto k = kernel(pr, lb);
    if (n_phi < 0) n_phi = 8 * (lb.r + 2);
    std::complex<double> acc = 0.0;
    for (const auto& node : radial_nodes(per_side_panels * 2, 1e-14, gl_order)) {
        const double wr = node.w * meas(node.x) * k.eval(node.x);
        for (int j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * M_PI * j / n_phi;
            const std::complex<double> b = std::polar(std::sqrt(node.x), phi);
            acc += wr * (2.0 * M_PI / n_phi) * symbol_continuation(f_op, k, a, b) *
                   symbol_continuation(g_op, k, b, a) * probability_function(k, a, b);
        }
    }
    return acc / (2.0 * M_PI * pr.hbar);
}

/// Quantum restriction of an ordered generator polynomial: substitute the
/// block matrices in the declared order and take the Wick symbol. The
/// homomorphism property holds exactly at the matrix level.
inline SymbolField quantum_restriction(const OrderedPoly& f, const ResonanceParams& pr,
                                       const RepLabel& lb) {
    return wick_symbol(f.realize(pr, lb), pr, lb);
}

/// Correction tensor R_{jl} = Re(g^{-1} da_j dbar a_l) over the quantum
/// coordinates a = (a_+, a_1, a_2, a_-), and the first-order term
/// e1(F) = 1/2 sum R_{jl} d^2F/da_j da_l of the quantum-restriction expansion.
inline Eigen::Matrix4d correction_tensor(const QuantumCoords& qc, const QuantumMetric& metric,
                                         double x, double phi) {
    const SymbolField* fields[4] = {&qc.a_plus, &qc.a1, &qc.a2, &qc.a_minus};
    SymbolField::Jet jets[4];
    for (int j = 0; j < 4; ++j) jets[j] = fields[j]->jet(x, phi);
    const double g = metric.g(x);
    Eigen::Matrix4d out;
    for (int j = 0; j < 4; ++j)
        for (int l2 = 0; l2 < 4; ++l2) out(j, l2) = (jets[j].dz * jets[l2].dzbar / g).real();
    return out;
}

inline std::complex<double> e1_correction(const OrderedPoly& f, const QuantumCoords& qc,
                                          const QuantumMetric& metric, double x, double phi) {
    const std::array<std::complex<double>, 4> a = {qc.a_plus.value(x, phi), qc.a1.value(x, phi),
                                                   qc.a2.value(x, phi), qc.a_minus.value(x, phi)};
    const Eigen::Matrix4d R = correction_tensor(qc, metric, x, phi);
    std::complex<double> s = 0.0;
    for (int j = 0; j < 4; ++j) {
        const OrderedPoly fj = f.partial(j);
        for (int l2 = 0; l2 < 4; ++l2) {
            if (R(j, l2) == 0.0) continue;
            s += 0.5 * R(j, l2) * fj.partial(l2).eval_classical(a);
        }
    }
    return s;
}

}  // namespace gyron
