#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "gyron/errors.hpp"

namespace gyron {

struct GaussRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;
};

/// Gauss-Legendre rule by Newton iteration on the Legendre polynomial.
inline const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

template <class F>
double integrate_gl(F&& f, double a, double b, int n) {
    const auto& rule = gauss_legendre(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += rule.weights[i] * f(c + h * rule.nodes[i]);
    return s * h;
}

template <class F>
double integrate_panels(F&& f, const std::vector<double>& edges, int n_per_panel) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        s += integrate_gl(f, edges[i], edges[i + 1], n_per_panel);
    return s;
}

/// Panel edges on (a,b) geometrically graded toward both endpoints,
/// down to a relative offset `eps` of the interval length.
inline std::vector<double> graded_edges(double a, double b, int per_side, double eps = 1e-12) {
    std::vector<double> rel;
    rel.push_back(eps);
    const double ratio = std::pow(0.5 / eps, 1.0 / per_side);
    double t = eps;
    while (t * ratio < 0.5) {
        t *= ratio;
        rel.push_back(t);
    }
    std::vector<double> edges;
    edges.push_back(a);
    const double len = b - a;
    for (double v : rel) edges.push_back(a + v * len);
    edges.push_back(a + 0.5 * len);
    for (auto it = rel.rbegin(); it != rel.rend(); ++it) edges.push_back(b - *it * len);
    edges.push_back(b);
    return edges;
}

/// Quadrature nodes for integrals over the radial coordinate of the sphere:
///   integral_0^inf f(x) dx  ~=  sum_i w_i f(x_i),
/// split at x = 1 with the far half mapped through y = 1/x, and panels graded
/// geometrically toward both poles down to `eps` in each chart. Integrable
/// endpoint singularities x^a (a > -1) are handled by the grading; the
/// omitted pole tails are O(eps^{a+1}).
struct RadialNode {
    double x = 0;
    double w = 0;
};

inline std::vector<RadialNode> radial_nodes(int panels_per_side = 50, double eps = 1e-20,
                                            int gl_order = 32) {
    const auto& rule = gauss_legendre(gl_order);
    std::vector<double> edges(panels_per_side + 1);
    for (int k = 0; k <= panels_per_side; ++k)
        edges[k] = std::pow(eps, 1.0 - double(k) / panels_per_side);
    std::vector<RadialNode> out;
    out.reserve(2 * panels_per_side * gl_order);
    for (int k = 0; k + 1 <= panels_per_side; ++k) {
        const double c = 0.5 * (edges[k] + edges[k + 1]);
        const double h = 0.5 * (edges[k + 1] - edges[k]);
        for (int i = 0; i < gl_order; ++i) {
            const double u = c + h * rule.nodes[i];
            const double w = h * rule.weights[i];
            out.push_back({u, w});                    // near chart: x = u
            out.push_back({1.0 / u, w / (u * u)});    // far chart: x = 1/u
        }
    }
    return out;
}

template <class F>
double integrate_radial(F&& f, int panels_per_side = 50, double eps = 1e-20, int gl_order = 32) {
    double s = 0.0;
    for (const auto& node : radial_nodes(panels_per_side, eps, gl_order)) s += node.w * f(node.x);
    return s;
}

namespace detail {
template <class F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb, double whole,
                            double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Brent root bracketing solve on [a,b]; f(a), f(b) must differ in sign.
template <class F>
double brent_root(F&& f, double a, double b, double xtol, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) throw RootBracketError("root not bracketed");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, p, qq;
            if (a == c) {
                p = 2.0 * xm * s;
                qq = 1.0 - s;
            } else {
                double q2 = fa / fc, r2 = fb / fc;
                p = s * (2.0 * xm * q2 * (q2 - r2) - (b - a) * (r2 - 1.0));
                qq = (q2 - 1.0) * (r2 - 1.0) * (s - 1.0);
            }
            if (p > 0.0) qq = -qq;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * qq - std::abs(tol1 * qq), std::abs(e * qq))) {
                e = d;
                d = p / qq;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

/// Monotone (Fritsch-Carlson) cubic Hermite interpolant.
class Pchip {
public:
    Pchip() = default;

    Pchip(std::vector<double> xs, std::vector<double> ys) : x_(std::move(xs)), y_(std::move(ys)) {
        const std::size_t n = x_.size();
        d_.assign(n, 0.0);
        if (n < 2) return;
        std::vector<double> h(n - 1), slope(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            slope[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        if (n == 2) {
            d_[0] = d_[1] = slope[0];
            return;
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (slope[i - 1] * slope[i] <= 0.0) {
                d_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
            }
        }
        d_[0] = edge_slope(h[0], h[1], slope[0], slope[1]);
        d_[n - 1] = edge_slope(h[n - 2], h[n - 3], slope[n - 2], slope[n - 3]);
    }

    double operator()(double x) const {
        const std::size_t n = x_.size();
        if (n == 0) return 0.0;
        if (n == 1 || x <= x_.front()) return n == 1 ? y_[0] : hermite(0, x);
        if (x >= x_.back()) return hermite(n - 2, x);
        std::size_t lo = 0, hi = n - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (x_[mid] <= x ? lo : hi) = mid;
        }
        return hermite(lo, x);
    }

    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

private:
    static double edge_slope(double h0, double h1, double s0, double s1) {
        double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d * s0 <= 0.0) return 0.0;
        if (s0 * s1 <= 0.0 && std::abs(d) > 3.0 * std::abs(s0)) return 3.0 * s0;
        return d;
    }

    double hermite(std::size_t i, double x) const {
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return y_[i] * (2 * t3 - 3 * t2 + 1) + h * d_[i] * (t3 - 2 * t2 + t) +
               y_[i + 1] * (-2 * t3 + 3 * t2) + h * d_[i + 1] * (t3 - t2);
    }

    std::vector<double> x_, y_, d_;
};

}  // namespace gyron
