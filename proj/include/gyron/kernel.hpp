#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "gyron/params.hpp"
#include "gyron/quadrature.hpp"

namespace gyron {

/// Reproducing-kernel polynomial k(x) = sum c_n x^n of one block.
/// c_0 = 1 and all c_n > 0; coefficients are kept in log form so every
/// evaluation can shift by the dominant term and stay finite on (0, inf).
struct KernelFunction {
    ResonanceParams params;
    RepLabel label;
    std::vector<double> log_coeff;  // log c_n, n = 0..r

    int degree() const { return label.r; }

    double coeff(int n) const { return std::exp(log_coeff[n]); }

    double eval(double x) const {
        if (x <= 0.0) return 1.0;
        const double lx = std::log(x);
        double shift = log_coeff[0];
        for (std::size_t n = 1; n < log_coeff.size(); ++n)
            shift = std::max(shift, log_coeff[n] + double(n) * lx);
        double s = 0.0;
        for (std::size_t n = 0; n < log_coeff.size(); ++n)
            s += std::exp(log_coeff[n] + double(n) * lx - shift);
        return s * std::exp(shift);
    }
};

inline KernelFunction kernel(const ResonanceParams& pr, const RepLabel& lb) {
    const int r = lb.r, q = lb.q, p = lb.p, l = pr.l, m = pr.m;
    KernelFunction k{pr, lb, std::vector<double>(r + 1)};
    const double lh = std::log(pr.hbar);
    for (int n = 0; n <= r; ++n) {
        k.log_coeff[n] = (m - l) * double(n) * lh + std::lgamma(q + 1.0) +
                         std::lgamma(p + double(r) * m + 1) - std::lgamma(q + double(n) * l + 1) -
                         std::lgamma(p + double(r - n) * m + 1);
    }
    return k;
}

/// Central moments of the weight distribution w_n ~ c_n x^n. Everything the
/// quantum geometry needs at a point is a short moment expression:
///   x (ln k)'            = mu
///   g = hbar d/dx(x(ln k)')            -> hbar m2 / x
///   ricci density (x(ln g)')'          -> ((m4 - 3 m2^2) m2 - m3^2)/(x m2^2)
///   cumulative (omega - hbar/2 ricci)  -> hbar (mu + 1/2 - m3/(2 m2))
/// These are exact derivative identities of ln k, not finite differences.
struct KernelMoments {
    double shift = 0;   // dominant log weight, shared with band sums
    double ksum = 0;    // sum of shifted weights
    double mu = 0;
    double m2 = 0;
    double m3 = 0;
    double m4 = 0;
};

inline KernelMoments kernel_moments(const KernelFunction& k, double x) {
    const double lx = std::log(x);
    const std::size_t n = k.log_coeff.size();
    KernelMoments mo;
    mo.shift = k.log_coeff[0];
    for (std::size_t i = 1; i < n; ++i)
        mo.shift = std::max(mo.shift, k.log_coeff[i] + double(i) * lx);
    double s0 = 0, s1 = 0;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::exp(k.log_coeff[i] + double(i) * lx - mo.shift);
        s0 += w[i];
        s1 += w[i] * double(i);
    }
    mo.ksum = s0;
    mo.mu = s1 / s0;
    double c2 = 0, c3 = 0, c4 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = double(i) - mo.mu;
        const double wd2 = w[i] * d * d;
        c2 += wd2;
        c3 += wd2 * d;
        c4 += wd2 * d * d;
    }
    mo.m2 = c2 / s0;
    mo.m3 = c3 / s0;
    mo.m4 = c4 / s0;
    return mo;
}

/// Quantum Kaehler data of one block, derived from the kernel polynomial.
class QuantumMetric {
public:
    explicit QuantumMetric(KernelFunction k) : k_(std::move(k)) {}

    const KernelFunction& kernel_function() const { return k_; }
    double hbar() const { return k_.params.hbar; }
    int block_dim() const { return k_.degree() + 1; }

    /// Metric density g(x) in the (x, phi) chart; finite at both poles.
    double g(double x) const {
        if (x <= 0.0) return hbar() * std::exp(k_.log_coeff.size() > 1
                                                   ? k_.log_coeff[1] - k_.log_coeff[0]
                                                   : -std::numeric_limits<double>::infinity());
        const auto mo = kernel_moments(k_, x);
        return hbar() * mo.m2 / x;
    }

    /// Ricci density (x (ln g)')' in the same chart and orientation as g.
    double ricci_density(double x) const {
        const auto mo = kernel_moments(k_, x);
        if (mo.m2 <= 0.0) return 0.0;
        return ((mo.m4 - 3.0 * mo.m2 * mo.m2) * mo.m2 - mo.m3 * mo.m3) / (x * mo.m2 * mo.m2);
    }

    /// x (ln k)' -- the radial part of the Kaehler primitive over hbar.
    double log_deriv(double x) const { return kernel_moments(k_, x).mu; }

    /// Exact cumulative integral over (0, x] of g - (hbar/2) * ricci density.
    double cumulative_bs_measure(double x) const {
        const auto mo = kernel_moments(k_, x);
        if (mo.m2 <= 0.0) return mo.mu < 0.5 ? 0.0 : hbar() * block_dim();
        return hbar() * (mo.mu + 0.5 - mo.m3 / (2.0 * mo.m2));
    }

    /// (1/(2 pi hbar)) * integral of the quantum form over the sphere -> r.
    double omega_integral(int per_side_panels = 50, int gl_order = 40) const {
        return integrate_radial([&](double x) { return g(x); }, per_side_panels, 1e-20,
                                gl_order) /
               hbar();
    }

    /// (1/(2 pi)) * integral of the Ricci form over the sphere -> -2.
    double ricci_integral(int per_side_panels = 50, int gl_order = 40) const {
        return integrate_radial([&](double x) { return ricci_density(x); }, per_side_panels,
                                1e-20, gl_order);
    }

private:
    KernelFunction k_;
};

}  // namespace gyron
