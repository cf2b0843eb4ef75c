#pragma once

#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include <json.hpp>

#include "gyron/averaging.hpp"
#include "gyron/classical_leaf.hpp"
#include "gyron/kernel.hpp"
#include "gyron/quantum_geometry.hpp"
#include "gyron/rep_matrices.hpp"
#include "gyron/spectra.hpp"

namespace gyron {

using nlohmann::json;

inline json rep_to_json(const GeneratorMatrices& g) {
    json j;
    j["l"] = g.params.l;
    j["m"] = g.params.m;
    j["hbar"] = g.params.hbar;
    j["r"] = g.label.r;
    j["q"] = g.label.q;
    j["p"] = g.label.p;
    j["energy"] = rep_energy(g.params, g.label);
    j["a1_diag"] = std::vector<double>(g.a1_diag.data(), g.a1_diag.data() + g.a1_diag.size());
    j["a2_diag"] = std::vector<double>(g.a2_diag.data(), g.a2_diag.data() + g.a2_diag.size());
    j["a_plus_subdiag"] = std::vector<double>(g.a_plus_subdiag.data(),
                                              g.a_plus_subdiag.data() + g.a_plus_subdiag.size());
    return j;
}

inline GeneratorMatrices rep_from_json(const json& j) {
    const auto pr = validate_params(j.at("l"), j.at("m"), j.at("hbar"));
    const auto lb = make_label(pr, j.at("r"), j.at("q"), j.at("p"));
    GeneratorMatrices g{pr, lb, Eigen::VectorXd(lb.dim()), Eigen::VectorXd(lb.dim()),
                        Eigen::VectorXd(lb.r)};
    const auto a1 = j.at("a1_diag").get<std::vector<double>>();
    const auto a2 = j.at("a2_diag").get<std::vector<double>>();
    const auto ap = j.at("a_plus_subdiag").get<std::vector<double>>();
    if (int(a1.size()) != lb.dim() || int(a2.size()) != lb.dim() || int(ap.size()) != lb.r)
        throw Error("rep json has inconsistent array sizes");
    for (int i = 0; i < lb.dim(); ++i) {
        g.a1_diag(i) = a1[i];
        g.a2_diag(i) = a2[i];
    }
    for (int i = 0; i < lb.r; ++i) g.a_plus_subdiag(i) = ap[i];
    return g;
}

inline json relation_report_to_json(const RelationReport& rel, const CasimirReport& cas) {
    json j;
    j["comm_a1_a2"] = rel.comm_a1_a2;
    j["comm_a1_aplus"] = rel.comm_a1_aplus;
    j["comm_a1_aminus"] = rel.comm_a1_aminus;
    j["comm_a2_aplus"] = rel.comm_a2_aplus;
    j["comm_a2_aminus"] = rel.comm_a2_aminus;
    j["comm_aminus_aplus"] = rel.comm_aminus_aplus;
    j["scale"] = rel.scale;
    j["max_relative"] = rel.max_relative();
    j["kappa_value"] = cas.kappa_value;
    j["kappa_residual"] = cas.kappa_residual;
    j["casimir_residual"] = cas.casimir_residual;
    return j;
}

inline json label_to_json(const ResonanceParams& pr, const RepLabel& lb) {
    return json{{"l", pr.l},         {"m", pr.m}, {"hbar", pr.hbar},
                {"r", lb.r},         {"q", lb.q}, {"p", lb.p},
                {"energy", rep_energy(pr, lb)}};
}

inline json spectrum_report_to_json(const ResonanceParams& pr, const RepLabel& lb,
                                    const SpectrumReport& rep, const ConvergenceReport* conv) {
    json j;
    j["label"] = label_to_json(pr, lb);
    j["exact"] = rep.exact;
    j["semiclassical"] = rep.semiclassical;
    json pairs = json::array();
    for (const auto& [a, b] : rep.pairs) pairs.push_back(json::array({a, b}));
    j["pairs"] = pairs;
    j["max_abs_error"] = rep.max_abs_error;
    json convergence = json::array();
    if (conv) {
        for (const auto& row : conv->rows)
            convergence.push_back(json{{"r", row.r}, {"err", row.err_middle}});
        j["slope"] = conv->slope;
        j["ratios"] = conv->ratios;
    }
    j["convergence"] = convergence;
    return j;
}

inline BosonicPolynomial perturbation_from_json(const json& j) {
    BosonicPolynomial out;
    for (const auto& term : j.at("terms")) {
        const auto nu = term.at("nu").get<std::vector<int>>();
        const auto mu = term.at("mu").get<std::vector<int>>();
        if (nu.size() != 2 || mu.size() != 2) throw Error("perturbation term needs nu/mu of size 2");
        if (nu[0] < 0 || nu[1] < 0 || mu[0] < 0 || mu[1] < 0)
            throw Error("perturbation exponents must be nonnegative");
        const double re = term.value("re", 0.0), im = term.value("im", 0.0);
        out.add({nu[0], nu[1], mu[0], mu[1]}, {re, im});
    }
    return out;
}

inline BosonicPolynomial perturbation_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open perturbation file " + path);
    json j;
    in >> j;
    return perturbation_from_json(j);
}

inline void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file " + path);
    out << body;
}

inline void write_json(const std::string& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

/// CSV of the quantum geometry profile (x, k, g, ricci, L, L*k).
inline std::string geometry_csv(const QuantumMetric& metric, const MeasureDensity& meas,
                                const std::vector<double>& xs) {
    std::ostringstream os;
    os << std::setprecision(16);
    os << "x,k,g,ricci,L,Lk\n";
    const auto& kf = metric.kernel_function();
    for (double x : xs) {
        const double k = kf.eval(x), L = meas(x);
        os << x << ',' << k << ',' << metric.g(x) << ',' << metric.ricci_density(x) << ',' << L
           << ',' << L * k << '\n';
    }
    return os.str();
}

/// CSV of the classical leaf profile (x, alpha, g0, A1, A2).
inline std::string classical_csv(double energy, const ResonanceParams& pr,
                                 const std::vector<double>& xs) {
    std::ostringstream os;
    os << std::setprecision(16);
    os << "x,alpha,g0,A1,A2\n";
    for (double x : xs) {
        const double al = solve_alpha(energy, pr, x);
        const double a1 = energy / (2.0 * pr.l) - pr.m * al;
        const double a2 = energy / (2.0 * pr.m) + pr.l * al;
        os << x << ',' << al << ',' << classical_form_density(energy, pr, x) << ',' << a1 << ','
           << a2 << '\n';
    }
    return os.str();
}

inline std::string area_csv(const AreaFunction& af) {
    std::ostringstream os;
    os << std::setprecision(16);
    os << "lambda,area\n";
    for (std::size_t i = 0; i < af.lambda_grid.size(); ++i)
        os << af.lambda_grid[i] << ',' << af.samples[i] << '\n';
    return os.str();
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return xs;
}

}  // namespace gyron
