#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "gyron/params.hpp"
#include "gyron/quadrature.hpp"

namespace gyron {

/// Polynomial Poisson tensor on R^4 underlying the commutant algebra.
struct PoissonTensor {
    ResonanceParams params;

    explicit PoissonTensor(const ResonanceParams& pr) : params(pr) {}

    /// Antisymmetric bracket matrix Pi_{ij} = {A_i, A_j} at a point.
    Eigen::Matrix4d at(const Eigen::Vector4d& a) const {
        const double l = params.l, m = params.m;
        Eigen::Matrix4d pi = Eigen::Matrix4d::Zero();
        pi(0, 2) = -m * a(3);
        pi(0, 3) = m * a(2);
        pi(1, 2) = l * a(3);
        pi(1, 3) = -l * a(2);
        // {A3,A4} = -1/2 (l^2 A1 - m^2 A2) A1^{m-1} A2^{l-1}
        pi(2, 3) = -0.5 * (l * l * a(0) - m * m * a(1)) * std::pow(a(0), params.m - 1) *
                   std::pow(a(1), params.l - 1);
        pi(2, 0) = -pi(0, 2);
        pi(3, 0) = -pi(0, 3);
        pi(2, 1) = -pi(1, 2);
        pi(3, 1) = -pi(1, 3);
        pi(3, 2) = -pi(2, 3);
        return pi;
    }

    double bracket(const Eigen::Vector4d& grad_f, const Eigen::Vector4d& grad_g,
                   const Eigen::Vector4d& a) const {
        return grad_f.dot(at(a) * grad_g);
    }

    /// d Pi_{ij} / d A_s with analytic partials of the polynomial entries.
    double entry_partial(int i, int j, int s, const Eigen::Vector4d& a) const {
        const double l = params.l, m = params.m;
        auto sgn = [&](int ii, int jj, double v) { return ii < jj ? v : -v; };
        int lo = std::min(i, j), hi = std::max(i, j);
        if (lo == 0 && hi == 2) return s == 3 ? sgn(i, j, -m) : 0.0;
        if (lo == 0 && hi == 3) return s == 2 ? sgn(i, j, m) : 0.0;
        if (lo == 1 && hi == 2) return s == 3 ? sgn(i, j, l) : 0.0;
        if (lo == 1 && hi == 3) return s == 2 ? sgn(i, j, -l) : 0.0;
        if (lo == 2 && hi == 3) {
            const double p1 = std::pow(a(0), params.m - 1), p2 = std::pow(a(1), params.l - 1);
            double v = 0.0;
            if (s == 0)
                v = -0.5 * (l * l * p1 * p2 + (l * l * a(0) - m * m * a(1)) * (params.m - 1) *
                                                  (params.m >= 2 ? std::pow(a(0), params.m - 2) : 0.0) * p2);
            else if (s == 1)
                v = -0.5 * (-m * m * p1 * p2 + (l * l * a(0) - m * m * a(1)) * (params.l - 1) * p1 *
                                                   (params.l >= 2 ? std::pow(a(1), params.l - 2) : 0.0));
            return sgn(i, j, v);
        }
        return 0.0;
    }

    /// Max cyclic Jacobi sum over coordinate triples at a point.
    double jacobi_residual(const Eigen::Vector4d& a) const {
        double worst = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                for (int k = j + 1; k < 4; ++k) {
                    const Eigen::Matrix4d pi = at(a);
                    double sum = 0.0;
                    for (int s = 0; s < 4; ++s) {
                        sum += pi(i, s) * entry_partial(j, k, s, a);
                        sum += pi(j, s) * entry_partial(k, i, s, a);
                        sum += pi(k, s) * entry_partial(i, j, s, a);
                    }
                    worst = std::max(worst, std::abs(sum));
                }
        return worst;
    }
};

/// Point on the leaf of the given energy at radial coordinate x = |z0|^2.
/// The defining equation x = A2^l A1^{-m} with l A1 + m A2 = E is solved by
/// bisection in log A2 (x <= 1) or log A1 (x > 1), which keeps full relative
/// precision in the coordinate that vanishes at the pole.
struct LeafPoint {
    double a1 = 0;
    double a2 = 0;
    double alpha = 0;
};

inline LeafPoint leaf_point_log(double energy, const ResonanceParams& pr, double lx) {
    const double l = pr.l, m = pr.m;
    // scale-free variable beta = m A2 / E in (0,1), 1 - beta = l A1 / E:
    //   l ln(beta) - m ln(1-beta) = ln(x) - l ln(E/m) + m ln(E/l) =: lxh
    const double lxh = lx - l * std::log(energy / m) + m * std::log(energy / l);
    double beta, one_minus_beta;
    if (lxh <= 0.0) {
        // bisect s = ln(beta); the root stays away from beta = 1
        double lo = lxh / l - 40.0, hi = 0.0;
        for (int it = 0; it < 200; ++it) {
            const double s = 0.5 * (lo + hi);
            const double v = l * s - m * std::log(-std::expm1(s)) - lxh;
            (v < 0.0 ? lo : hi) = s;
        }
        beta = std::exp(0.5 * (lo + hi));
        one_minus_beta = -std::expm1(0.5 * (lo + hi));
    } else {
        // bisect u = ln(1-beta); decreasing in u
        double lo = -lxh / m - 40.0, hi = 0.0;
        for (int it = 0; it < 200; ++it) {
            const double u = 0.5 * (lo + hi);
            const double v = l * std::log(-std::expm1(u)) - m * u - lxh;
            (v < 0.0 ? hi : lo) = u;
        }
        one_minus_beta = std::exp(0.5 * (lo + hi));
        beta = -std::expm1(0.5 * (lo + hi));
    }
    LeafPoint out;
    out.a2 = energy / m * beta;
    out.a1 = energy / l * one_minus_beta;
    out.alpha = lxh <= 0.0 ? (out.a2 - energy / (2.0 * m)) / l
                           : (energy / (2.0 * l) - out.a1) / m;
    return out;
}

inline LeafPoint leaf_point(double energy, const ResonanceParams& pr, double x) {
    if (x <= 0.0) return {energy / pr.l, 0.0, -energy / (2.0 * pr.l * pr.m)};
    return leaf_point_log(energy, pr, std::log(x));
}

/// Unique solution of the leaf equation on [-E/2lm, E/2lm].
inline double solve_alpha(double energy, const ResonanceParams& pr, double x) {
    return leaf_point(energy, pr, x).alpha;
}

/// Restriction of the four coordinates to the leaf of the given energy.
inline Eigen::Vector4d classical_coords(double energy, const ResonanceParams& pr,
                                        std::complex<double> z0) {
    const auto pt = leaf_point(energy, pr, std::norm(z0));
    const std::complex<double> a34 = z0 * std::pow(pt.a1, pr.m);
    return {pt.a1, pt.a2, a34.real(), a34.imag()};
}

/// Density g0 of the classical leaf form in the (x, phi) chart, by the
/// implicit-function derivative of the leaf equation (pole-exact, no
/// finite differences).
inline double classical_form_density(double energy, const ResonanceParams& pr, double x) {
    if (x <= 0.0) {
        if (pr.l > 1) throw SingularAtPoleError("classical form density diverges at x=0 for l>1");
        x = 1e-300;
    }
    const auto pt = leaf_point(energy, pr, x);
    return 1.0 / (x * (double(pr.l) * pr.l / pt.a2 + double(pr.m) * pr.m / pt.a1));
}

/// (1/2pi) * integral of the leaf form = E/(l m). The grading reaches 1e-30
/// in each chart so the untouched pole tails (~ x^{1/l}, x^{-1/m}) stay far
/// below the 1e-8 identity tolerance.
inline double classical_volume(double energy, const ResonanceParams& pr, int per_side_panels = 70,
                               int gl_order = 40) {
    return integrate_radial([&](double x) { return classical_form_density(energy, pr, x); },
                            per_side_panels, 1e-30, gl_order);
}

/// Log-log fit of the form density on a window; returns slope and prefactor.
struct PowerFit {
    double slope = 0;
    double prefactor = 0;
};

template <class F>
PowerFit fit_power_law(F&& f, double x_lo, double x_hi, int n_pts = 40) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n_pts; ++i) {
        const double x = x_lo * std::pow(x_hi / x_lo, double(i) / (n_pts - 1));
        const double lx = std::log(x), ly = std::log(f(x));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    PowerFit fit;
    fit.slope = (n_pts * sxy - sx * sy) / (n_pts * sxx - sx * sx);
    fit.prefactor = std::exp((sy - fit.slope * sx) / n_pts);
    return fit;
}

/// Pole exponents and prefactors of the classical form versus their
/// closed-form values.
struct PoleReport {
    PowerFit near_zero;
    PowerFit near_infinity;
    double expected_slope_zero = 0;       // -(1 - 1/l)
    double expected_slope_infinity = 0;   // -(1 + 1/m)
    double expected_prefactor_zero = 0;   // (1/l^2) (E/l)^{m/l}
    double expected_prefactor_infinity = 0;  // (1/m^2) (E/m)^{l/m}
};

/// Geometric mean of f(x)/x^slope over a log window: the prefactor estimate
/// at a pinned exponent (an intercept extrapolated from a far window would
/// amplify the slope-fit bias of the subleading corrections).
template <class F>
double fit_prefactor_at(F&& f, double slope, double x_lo, double x_hi, int n_pts = 40) {
    double s = 0.0;
    for (int i = 0; i < n_pts; ++i) {
        const double x = x_lo * std::pow(x_hi / x_lo, double(i) / (n_pts - 1));
        s += std::log(f(x)) - slope * std::log(x);
    }
    return std::exp(s / n_pts);
}

inline PoleReport pole_asymptotics_check(double energy, const ResonanceParams& pr) {
    PoleReport rep;
    auto g0 = [&](double x) { return classical_form_density(energy, pr, x); };
    rep.expected_slope_zero = -(1.0 - 1.0 / pr.l);
    rep.expected_slope_infinity = -(1.0 + 1.0 / pr.m);
    rep.expected_prefactor_zero =
        std::pow(energy / pr.l, double(pr.m) / pr.l) / (double(pr.l) * pr.l);
    rep.expected_prefactor_infinity =
        std::pow(energy / pr.m, double(pr.l) / pr.m) / (double(pr.m) * pr.m);
    rep.near_zero = fit_power_law(g0, 1e-6, 1e-3);
    rep.near_infinity = fit_power_law(g0, 1e3, 1e6);
    rep.near_zero.prefactor = fit_prefactor_at(g0, rep.expected_slope_zero, 1e-6, 1e-3);
    rep.near_infinity.prefactor = fit_prefactor_at(g0, rep.expected_slope_infinity, 1e3, 1e6);
    return rep;
}

}  // namespace gyron
