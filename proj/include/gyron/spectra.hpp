#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numeric>
#include <vector>

#include "gyron/quadrature.hpp"
#include "gyron/quantum_geometry.hpp"

namespace gyron {

/// Full ascending spectrum of a Hermitian matrix; backward error per pair is
/// checked against the eigensolver contract.
inline Eigen::VectorXd exact_spectrum(const Eigen::MatrixXcd& h) {
    const double scale = std::max(1e-300, h.cwiseAbs().maxCoeff());
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw NotHermitianError("matrix is not Hermitian within 1e-12 relative");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
    const Eigen::MatrixXcd v = solver.eigenvectors();
    const Eigen::VectorXd ev = solver.eigenvalues();
    for (int i = 0; i < ev.size(); ++i) {
        const double res = (h * v.col(i) - ev(i) * v.col(i)).norm();
        if (res > 1e-10 * scale * std::sqrt(double(ev.size())))
            throw Error("eigenpair residual above contract");
    }
    return ev;
}

/// Effective semiclassical symbol  F_eff = f - (hbar/4) Lap f  with
/// Lap = (2/g) d^2/dz dzbar, evaluated per matrix band:
///   Lap( zbar^d T(x) ) = (2/g) zbar^d ( (d+1) T' + x T'' ).
class EffectiveSymbol {
public:
    enum class Shape { Axisymmetric, CosBand, General };

    EffectiveSymbol(const Eigen::MatrixXcd& op, const ResonanceParams& pr, const RepLabel& lb)
        : params_(pr), label_(lb), sym_(op, kernel(pr, lb)), metric_(kernel(pr, lb)) {
        const double scale = std::max(1e-300, op.cwiseAbs().maxCoeff());
        const bool real_sym = op.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale &&
                              (op - op.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * scale;
        if (sym_.axisymmetric())
            shape_ = Shape::Axisymmetric;
        else if (sym_.single_band() && real_sym)
            shape_ = Shape::CosBand;
        else
            shape_ = Shape::General;
    }

    const ResonanceParams& params() const { return params_; }
    const RepLabel& label() const { return label_; }
    Shape shape() const { return shape_; }
    const QuantumMetric& metric() const { return metric_; }
    const SymbolField& symbol() const { return sym_; }

    /// Radial profile of one effective band at x.
    std::complex<double> band_value(const SymbolField::Band& band, double x) const {
        const auto tr = sym_.band_radial(band, x);
        const double g = metric_.g(x);
        const int d = std::abs(band.d);
        return tr.t - params_.hbar / (2.0 * g) * (double(d + 1) * tr.tp + x * tr.tpp);
    }

    double eval(double x, double phi) const {
        std::complex<double> s = 0.0;
        const double rad = std::sqrt(x);
        for (const auto& band : sym_.bands()) {
            const int e = std::abs(band.d);
            const std::complex<double> angular =
                std::polar(std::pow(rad, e), band.d >= 0 ? -band.d * phi : e * phi);
            s += angular * band_value(band, x);
        }
        return s.real();
    }

    /// For Axisymmetric/CosBand shapes: F_eff(x, phi) = U(x) + V(x) cos(phi).
    double u_profile(double x) const {
        for (const auto& band : sym_.bands())
            if (band.d == 0) return band_value(band, x).real();
        return 0.0;
    }

    double v_profile(double x) const {
        for (const auto& band : sym_.bands())
            if (band.d == 1) return 2.0 * std::sqrt(x) * band_value(band, x).real();
        return 0.0;
    }

private:
    ResonanceParams params_;
    RepLabel label_;
    SymbolField sym_;
    QuantumMetric metric_;
    Shape shape_;
};

namespace detail {

/// Dense radial tables of U, V and the exact cumulative membrane measure W.
struct RadialTables {
    std::vector<double> t;  // t = x/(1+x)
    Pchip u, v, w;
    double w_total = 0;
    double u_pole0 = 0, u_pole1 = 0;  // F_eff at the poles (V vanishes there)
};

inline RadialTables build_tables(const EffectiveSymbol& fe, int n_nodes = 8192) {
    RadialTables tab;
    const double t_eps = 1e-9;
    std::vector<double> tu(n_nodes + 1), uu(n_nodes + 1), vv(n_nodes + 1), ww(n_nodes + 1);
    for (int i = 0; i <= n_nodes; ++i) {
        const double t = t_eps + (1.0 - 2.0 * t_eps) * double(i) / n_nodes;
        const double x = t / (1.0 - t);
        tu[i] = t;
        uu[i] = fe.u_profile(x);
        vv[i] = fe.v_profile(x);
        ww[i] = fe.metric().cumulative_bs_measure(x);
    }
    tab.t = tu;
    tab.u = Pchip(tu, uu);
    tab.v = Pchip(tu, vv);
    tab.w = Pchip(tu, ww);
    tab.w_total = fe.metric().cumulative_bs_measure(1e12);
    tab.u_pole0 = uu.front();
    tab.u_pole1 = uu.back();
    return tab;
}

/// W-measure of the one-dimensional section {t : U + c V <= lam}.
inline double section_measure(const RadialTables& tab, double c, double lam) {
    const auto& ts = tab.t;
    const auto& us = tab.u.ys();
    const auto& vs = tab.v.ys();
    const std::size_t n = ts.size();
    auto h_node = [&](std::size_t i) { return us[i] + c * vs[i] - lam; };
    auto h_cont = [&](double t) { return tab.u(t) + c * tab.v(t) - lam; };

    double meas = 0.0;
    bool inside = h_node(0) <= 0.0;
    double seg_start_w = inside ? 0.0 : -1.0;  // measure from the pole side
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h0 = h_node(i), h1 = h_node(i + 1);
        if ((h0 <= 0.0) == (h1 <= 0.0)) continue;
        double tc;
        try {
            tc = brent_root(h_cont, ts[i], ts[i + 1], 1e-15);
        } catch (const RootBracketError&) {
            tc = 0.5 * (ts[i] + ts[i + 1]);
        }
        const double wc = tab.w(tc);
        if (h0 <= 0.0) {
            meas += wc - seg_start_w;
            inside = false;
        } else {
            seg_start_w = wc;
            inside = true;
        }
    }
    if (inside) meas += tab.w_total - seg_start_w;
    return meas;
}

}  // namespace detail

/// Numerical connectivity check: every interior sublevel and superlevel set of
/// the effective symbol must be connected on the sphere.
inline bool level_sets_connected(const EffectiveSymbol& fe, int nt = 96, int nphi = 64,
                                 int n_levels = 14) {
    std::vector<double> vals(nt * nphi);
    double fmin = 1e300, fmax = -1e300;
    for (int i = 0; i < nt; ++i) {
        const double t = (i + 0.5) / nt;
        const double x = std::max(t, 1e-9) / std::max(1.0 - t, 1e-9);
        for (int j = 0; j < nphi; ++j) {
            const double phi = 2.0 * M_PI * (j + 0.5) / nphi;
            vals[i * nphi + j] = fe.eval(x, phi);
            fmin = std::min(fmin, vals[i * nphi + j]);
            fmax = std::max(fmax, vals[i * nphi + j]);
        }
    }
    const int n_cells = nt * nphi + 2;  // two extra pole nodes
    std::vector<int> comp(n_cells);
    std::vector<char> in(n_cells);
    auto count_components = [&](bool inside_set, double lam) {
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < nphi; ++j)
                in[i * nphi + j] = inside_set == (vals[i * nphi + j] <= lam);
        const double p0 = fe.eval(1e-9, 0.0), p1 = fe.eval(1e9, 0.0);
        in[nt * nphi] = inside_set == (p0 <= lam);
        in[nt * nphi + 1] = inside_set == (p1 <= lam);
        std::fill(comp.begin(), comp.end(), -1);
        int n_comp = 0;
        std::vector<int> stack;
        for (int s = 0; s < n_cells; ++s) {
            if (!in[s] || comp[s] >= 0) continue;
            ++n_comp;
            stack.assign(1, s);
            comp[s] = n_comp;
            while (!stack.empty()) {
                const int c = stack.back();
                stack.pop_back();
                auto push = [&](int nb) {
                    if (nb >= 0 && in[nb] && comp[nb] < 0) {
                        comp[nb] = n_comp;
                        stack.push_back(nb);
                    }
                };
                if (c >= nt * nphi) {
                    const int row = c == nt * nphi ? 0 : nt - 1;
                    for (int j = 0; j < nphi; ++j) push(row * nphi + j);
                    continue;
                }
                const int i = c / nphi, j = c % nphi;
                push(i * nphi + (j + 1) % nphi);
                push(i * nphi + (j + nphi - 1) % nphi);
                if (i + 1 < nt) push((i + 1) * nphi + j);
                if (i > 0) push((i - 1) * nphi + j);
                if (i == 0) push(nt * nphi);
                if (i == nt - 1) push(nt * nphi + 1);
            }
        }
        return n_comp;
    };
    for (int s = 1; s <= n_levels; ++s) {
        const double lam = fmin + (fmax - fmin) * double(s) / (n_levels + 1);
        if (count_components(true, lam) > 1 || count_components(false, lam) > 1) return false;
    }
    return true;
}

/// A(lambda) = (1/2 pi hbar) * integral of (omega - hbar/2 ricci) over the
/// sublevel set {F_eff <= lambda}, sampled on a lambda grid with a monotone
/// interpolant; the exact evaluator is kept for refinement.
struct AreaFunction {
    std::vector<double> lambda_grid;
    std::vector<double> samples;
    Pchip interp;
    double lambda_min = 0, lambda_max = 0;
    double total = 0;
    std::function<double(double)> exact;

    double operator()(double lam) const { return interp(lam); }
};

/// General-symbol sublevel quadrature: tensor cells in (t, phi) with 4x4
/// subsampling of boundary cells.
inline double sublevel_area_grid(const EffectiveSymbol& fe, double lam, int nt = 512,
                                 int nphi = 256) {
    const auto& metric = fe.metric();
    const double hbar = fe.params().hbar;
    // corner values classify cells; the axisymmetric weight is per-row
    std::vector<double> corner((nt + 1) * (nphi + 1));
    for (int i = 0; i <= nt; ++i) {
        const double t = std::min(std::max(double(i) / nt, 1e-9), 1.0 - 1e-9);
        const double x = t / (1.0 - t);
        for (int j = 0; j <= nphi; ++j)
            corner[i * (nphi + 1) + j] = fe.eval(x, 2.0 * M_PI * j / nphi);
    }
    auto weight = [&](double t) {
        const double x = t / (1.0 - t);
        const double d = metric.g(x) - 0.5 * hbar * metric.ricci_density(x);
        return d / ((1.0 - t) * (1.0 - t));
    };
    double area = 0.0;
    const double dt = 1.0 / nt, dphi = 2.0 * M_PI / nphi;
    for (int i = 0; i < nt; ++i) {
        const double t_mid = (i + 0.5) * dt;
        const double w_mid = weight(std::min(std::max(t_mid, 1e-9), 1.0 - 1e-9));
        for (int j = 0; j < nphi; ++j) {
            const double c00 = corner[i * (nphi + 1) + j], c01 = corner[i * (nphi + 1) + j + 1];
            const double c10 = corner[(i + 1) * (nphi + 1) + j],
                         c11 = corner[(i + 1) * (nphi + 1) + j + 1];
            const bool all_in = c00 <= lam && c01 <= lam && c10 <= lam && c11 <= lam;
            const bool all_out = c00 > lam && c01 > lam && c10 > lam && c11 > lam;
            if (all_out) continue;
            if (all_in) {
                area += w_mid * dt * dphi;
                continue;
            }
            int hits = 0;
            double wsum = 0.0;
            for (int a = 0; a < 4; ++a) {
                const double ts = std::min(std::max((i + (a + 0.5) / 4.0) * dt, 1e-9), 1.0 - 1e-9);
                const double xs = ts / (1.0 - ts);
                const double ws = weight(ts);
                for (int b2 = 0; b2 < 4; ++b2) {
                    const double ps = 2.0 * M_PI * (j + (b2 + 0.5) / 4.0) / nphi;
                    if (fe.eval(xs, ps) <= lam) {
                        ++hits;
                        wsum += ws;
                    }
                }
            }
            area += wsum * dt * dphi / 16.0;
        }
    }
    return area / (2.0 * M_PI * hbar);
}

inline AreaFunction area_function(const EffectiveSymbol& fe, int n_lambda = 513) {
    if (!level_sets_connected(fe))
        throw MultiWellError("effective symbol has disconnected level sets");
    AreaFunction af;
    const double hbar = fe.params().hbar;

    if (fe.shape() == EffectiveSymbol::Shape::General) {
        af.exact = [keep = std::make_shared<EffectiveSymbol>(fe)](double lam) {
            return sublevel_area_grid(*keep, lam);
        };
        // range scan on a coarse grid
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i <= 64; ++i) {
            const double t = std::min(std::max(double(i) / 64, 1e-9), 1.0 - 1e-9);
            for (int j = 0; j < 32; ++j) {
                const double v = fe.eval(t / (1.0 - t), 2.0 * M_PI * j / 32.0);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        af.lambda_min = lo;
        af.lambda_max = hi;
    } else {
        auto tables = std::make_shared<detail::RadialTables>(detail::build_tables(fe));
        const auto& us = tables->u.ys();
        const auto& vs = tables->v.ys();
        double lo = 1e300, hi = -1e300;
        for (std::size_t i = 0; i < us.size(); ++i) {
            lo = std::min(lo, us[i] - std::abs(vs[i]));
            hi = std::max(hi, us[i] + std::abs(vs[i]));
        }
        af.lambda_min = lo;
        af.lambda_max = hi;
        const bool axisym = fe.shape() == EffectiveSymbol::Shape::Axisymmetric;
        const int dim = fe.label().dim();
        af.exact = [tables, hbar, axisym, dim](double lam) {
            if (axisym) return detail::section_measure(*tables, 0.0, lam) / hbar;
            auto m_of_phi = [&](double phi) {
                return detail::section_measure(*tables, std::cos(phi), lam);
            };
            const double tol = 1e-10 * dim * M_PI * hbar;
            return adaptive_simpson(m_of_phi, 0.0, M_PI, tol) / (M_PI * hbar);
        };
    }

    const double pad = 1e-9 * std::max(1.0, af.lambda_max - af.lambda_min);
    af.lambda_grid.resize(n_lambda);
    af.samples.resize(n_lambda);
    for (int i = 0; i < n_lambda; ++i) {
        af.lambda_grid[i] = af.lambda_min - pad +
                            (af.lambda_max - af.lambda_min + 2 * pad) * double(i) / (n_lambda - 1);
        af.samples[i] = af.exact(af.lambda_grid[i]);
    }
    for (int i = 0; i + 1 < n_lambda; ++i)
        if (af.samples[i + 1] < af.samples[i] - 1e-7 * std::abs(af.samples[i]))
            throw Error("area function is not monotone");
    af.interp = Pchip(af.lambda_grid, af.samples);
    af.total = af.samples.back();
    return af;
}

/// Roots of A(lambda) = k + 1/2 on the sampled interpolant, one per integer k
/// with 0 <= k + 1/2 <= A_total.
inline std::vector<double> bs_spectrum(const AreaFunction& af) {
    std::vector<double> roots;
    for (int k = 0;; ++k) {
        const double target = k + 0.5;
        if (target > af.total) break;
        // bracket on the sample grid
        const auto& xs = af.lambda_grid;
        const auto& ys = af.samples;
        std::size_t j = 0;
        while (j + 1 < ys.size() && !(ys[j] <= target && ys[j + 1] >= target)) ++j;
        if (j + 1 >= ys.size()) {
            if (target <= ys.front()) {
                roots.push_back(xs.front());
                continue;
            }
            throw RootBracketError("quantization target not bracketed by the area samples");
        }
        auto f = [&](double lam) { return af(lam) - target; };
        const double xtol = 1e-13 * std::max(1.0, std::abs(xs.back() - xs.front()));
        roots.push_back(brent_root(f, xs[j], xs[j + 1], xtol));
    }
    return roots;
}

/// Pairing of exact and semiclassical lists by best index alignment.
struct SpectrumReport {
    std::vector<double> exact;
    std::vector<double> semiclassical;
    std::vector<std::pair<int, int>> pairs;
    double max_abs_error = 0;
};

inline SpectrumReport pair_spectra(const Eigen::VectorXd& exact, const std::vector<double>& bs) {
    SpectrumReport rep;
    rep.exact.assign(exact.data(), exact.data() + exact.size());
    rep.semiclassical = bs;
    const int ne = int(rep.exact.size()), nb = int(bs.size());
    int best_shift = 0;
    double best_cost = 1e300;
    for (int shift = -2; shift <= 2; ++shift) {
        double cost = 0.0;
        int count = 0;
        for (int i = 0; i < ne; ++i) {
            const int j = i + shift;
            if (j < 0 || j >= nb) continue;
            cost += std::abs(rep.exact[i] - bs[j]);
            ++count;
        }
        if (count == 0) continue;
        cost /= count;
        if (cost < best_cost) {
            best_cost = cost;
            best_shift = shift;
        }
    }
    for (int i = 0; i < ne; ++i) {
        const int j = i + best_shift;
        if (j < 0 || j >= nb) continue;
        rep.pairs.emplace_back(i, j);
        rep.max_abs_error = std::max(rep.max_abs_error, std::abs(rep.exact[i] - bs[j]));
    }
    return rep;
}

/// Middle-third error of one paired report (spectrum-edge errors excluded).
inline double middle_third_error(const SpectrumReport& rep) {
    const int n = int(rep.exact.size());
    const int lo = n / 3, hi = n - n / 3;
    double err = 0.0;
    for (const auto& [i, j] : rep.pairs)
        if (i >= lo && i < hi)
            err = std::max(err, std::abs(rep.exact[i] - rep.semiclassical[j]));
    return err;
}

struct ConvergenceRow {
    int r = 0;
    double hbar = 0;
    double err_middle = 0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double slope = 0;               // log-log fit of err vs r
    std::vector<double> ratios;     // err(r) / err(2r)

    void finalize() {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = int(rows.size());
        for (const auto& row : rows) {
            const double lx = std::log(double(row.r)), ly = std::log(row.err_middle);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        ratios.clear();
        for (std::size_t i = 0; i + 1 < rows.size(); ++i)
            ratios.push_back(rows[i].err_middle / rows[i + 1].err_middle);
    }
};

/// Exact-vs-semiclassical error table along an r-sweep at fixed classical
/// energy (hbar = E/(l m r)).
inline ConvergenceReport convergence_report(
    int l, int m, int q, int p, double energy, const std::vector<int>& r_list,
    const std::function<Eigen::MatrixXcd(const ResonanceParams&, const RepLabel&)>& build_op) {
    ConvergenceReport rep;
    for (int r : r_list) {
        const auto pr = validate_params(l, m, energy / (double(l) * m * r));
        const auto lb = make_label(pr, r, q, p);
        const Eigen::MatrixXcd op = build_op(pr, lb);
        const auto ev = exact_spectrum(op);
        EffectiveSymbol fe(op, pr, lb);
        const auto af = area_function(fe);
        const auto bs = bs_spectrum(af);
        const auto paired = pair_spectra(ev, bs);
        rep.rows.push_back({r, pr.hbar, middle_third_error(paired)});
    }
    rep.finalize();
    return rep;
}

}  // namespace gyron
