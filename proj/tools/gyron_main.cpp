// gyron: build irreducible blocks of the l:m resonance algebra, emit their
// quantum geometry tables, and compute gyron spectra exactly and
// semiclassically.

#include <CLI11.hpp>
#include <complex>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "gyron/fock.hpp"
#include "gyron/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitToleranceFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitQuadratureFailure = 3;
constexpr int kExitMultiWell = 4;

struct CommonOpts {
    int l = 1, m = 1;
    double hbar = 1.0;
    int r = -1, q = 0, p = 0;
    double emax = -1.0;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--l", o.l, "first resonance integer")->required();
    cmd->add_option("--m", o.m, "second resonance integer")->required();
    cmd->add_option("--hbar", o.hbar, "quantum of action")->required();
    cmd->add_option("--r", o.r, "principal block number");
    cmd->add_option("--q", o.q, "first fine label (0..l-1)");
    cmd->add_option("--p", o.p, "second fine label (0..m-1)");
    cmd->add_option("--out", o.out, "output path or prefix");
}

std::vector<gyron::RepLabel> select_labels(const gyron::ResonanceParams& pr, const CommonOpts& o) {
    if (o.emax >= 0.0) return gyron::enumerate_reps(pr, o.emax);
    if (o.r < 0) throw gyron::InvalidLabelError("either --r or --emax is required");
    return {gyron::make_label(pr, o.r, o.q, o.p)};
}

int cmd_rep(const CommonOpts& o, double tol_residual) {
    const auto pr = gyron::validate_params(o.l, o.m, o.hbar);
    const auto labels = select_labels(pr, o);
    const gyron::StructureData structure(pr);

    gyron::json reps = gyron::json::array();
    gyron::json failures = gyron::json::array();
    for (const auto& lb : labels) {
        const auto g = gyron::build_matrices(pr, lb);
        const auto rel = gyron::check_relations(g, structure);
        const auto cas = gyron::casimir_values(g, structure, lb);

        // cross-construction consistency
        const auto g2 = gyron::build_diffop_matrices(pr, lb);
        double diffop_dev = 0.0;
        for (int i = 0; i < lb.dim(); ++i) {
            diffop_dev = std::max(diffop_dev, std::abs(g.a1_diag(i) - g2.a1_diag(i)));
            diffop_dev = std::max(diffop_dev, std::abs(g.a2_diag(i) - g2.a2_diag(i)));
        }
        for (int i = 0; i < lb.r; ++i)
            diffop_dev = std::max(diffop_dev, std::abs(g.a_plus_subdiag(i) - g2.a_plus_subdiag(i)) /
                                                  std::max(1.0, std::abs(g.a_plus_subdiag(i))));

        gyron::json entry = gyron::rep_to_json(g);
        entry["report"] = gyron::relation_report_to_json(rel, cas);
        entry["report"]["diffop_deviation"] = diffop_dev;
        reps.push_back(entry);

        auto fail = [&](const std::string& what, double value) {
            failures.push_back(gyron::json{{"label", gyron::label_to_json(pr, lb)},
                                           {"check", what},
                                           {"value", value},
                                           {"tolerance", tol_residual}});
        };
        if (rel.max_relative() > tol_residual) fail("relations", rel.max_relative());
        if (cas.kappa_residual > tol_residual) fail("kappa", cas.kappa_residual);
        if (cas.casimir_residual > tol_residual) fail("casimir", cas.casimir_residual);
        if (diffop_dev > tol_residual) fail("diffop", diffop_dev);
    }
    if (!o.out.empty()) gyron::write_json(o.out, labels.size() == 1 ? reps[0] : reps);
    if (!failures.empty()) {
        std::cout << failures.dump(2) << "\n";
        return kExitToleranceFailure;
    }
    std::cout << "rep: " << labels.size() << " block(s), all residuals within " << tol_residual
              << "\n";
    return kExitOk;
}

int cmd_geometry(const CommonOpts& o, int grid_x, double tol_omega, double tol_dm,
                 double tol_ricci) {
    const auto pr = gyron::validate_params(o.l, o.m, o.hbar);
    if (o.r < 0) throw gyron::InvalidLabelError("--r is required for geometry");
    const auto lb = gyron::make_label(pr, o.r, o.q, o.p);
    const auto kf = gyron::kernel(pr, lb);
    const gyron::QuantumMetric metric(kf);
    const gyron::MeasureDensity meas(pr, lb);
    const double energy = gyron::rep_energy(pr, lb);

    const auto xs = gyron::log_grid(1e-4, 1e4, grid_x);
    const std::string prefix = o.out.empty() ? "geometry" : o.out;
    gyron::write_text(prefix + "_quantum.csv", gyron::geometry_csv(metric, meas, xs));
    gyron::write_text(prefix + "_classical.csv", gyron::classical_csv(energy, pr, xs));

    const double omega = metric.omega_integral();
    const double ricci = metric.ricci_integral();
    const double dm = meas.dm_integral(kf);
    gyron::json report;
    report["omega_integral"] = omega;
    report["dm_integral"] = dm;
    report["ricci_integral"] = ricci;
    report["r"] = lb.r;
    report["tolerances"] = gyron::json{{"omega", tol_omega}, {"dm", tol_dm}, {"ricci", tol_ricci}};
    gyron::write_json(prefix + "_integrals.json", report);

    const bool ok = std::abs(omega - lb.r) <= tol_omega && std::abs(dm - (lb.r + 1)) <= tol_dm &&
                    std::abs(ricci - (-2.0)) <= tol_ricci;
    std::cout << report.dump(2) << "\n";
    return ok ? kExitOk : kExitToleranceFailure;
}

int cmd_spectrum(const CommonOpts& o, const std::string& perturbation_path, bool exact_only,
                 const std::vector<int>& sweep_r) {
    const auto pr = gyron::validate_params(o.l, o.m, o.hbar);
    if (o.r < 0) throw gyron::InvalidLabelError("--r is required for spectrum");
    const auto lb = gyron::make_label(pr, o.r, o.q, o.p);

    gyron::BosonicPolynomial pert;
    if (!perturbation_path.empty()) {
        pert = gyron::perturbation_from_file(perturbation_path);
    } else {
        // default reference perturbation: the resonance coupling itself
        pert = gyron::BosonicPolynomial::monomial(0, pr.l, pr.m, 0) +
               gyron::BosonicPolynomial::monomial(pr.m, 0, 0, pr.l);
    }
    const auto resonant = gyron::project_resonant(pert, pr);
    const Eigen::MatrixXcd op = gyron::realize_in_rep(resonant, pr, lb);
    const auto exact = gyron::exact_spectrum(op);

    const std::string prefix = o.out.empty() ? "spectrum" : o.out;
    gyron::SpectrumReport paired;
    paired.exact.assign(exact.data(), exact.data() + exact.size());
    if (!exact_only) {
        gyron::EffectiveSymbol fe(op, pr, lb);
        const auto af = gyron::area_function(fe);
        const auto bs = gyron::bs_spectrum(af);
        paired = gyron::pair_spectra(exact, bs);
        gyron::write_text(prefix + "_area.csv", gyron::area_csv(af));
    }

    gyron::ConvergenceReport conv;
    const bool do_sweep = !exact_only && sweep_r.size() >= 2;
    if (do_sweep) {
        const double energy = gyron::rep_energy(pr, lb);
        conv = gyron::convergence_report(
            pr.l, pr.m, lb.q, lb.p, energy, sweep_r,
            [&](const gyron::ResonanceParams& pr2, const gyron::RepLabel& lb2) {
                return gyron::realize_in_rep(resonant, pr2, lb2);
            });
    }
    const auto report =
        gyron::spectrum_report_to_json(pr, lb, paired, do_sweep ? &conv : nullptr);
    gyron::write_json(prefix + "_report.json", report);
    std::cout << report.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"l:m resonance algebra, quantum leaf geometry, and gyron spectra"};
    app.require_subcommand(1);
    app.set_config("--config");

    CommonOpts rep_opts, geo_opts, spec_opts;
    double tol_residual = 1e-12;
    int grid_x = 200, grid_phi = 64;
    double tol_omega = 1e-8, tol_dm = 1e-4, tol_ricci = 1e-6;
    std::string perturbation_path;
    bool exact_only = false;
    std::vector<int> sweep_r;

    auto* rep = app.add_subcommand("rep", "build a block and verify its algebra identities");
    add_common(rep, rep_opts);
    rep->add_option("--emax", rep_opts.emax, "build every block in the energy shell");
    rep->add_option("--tol-residual", tol_residual, "relative residual tolerance");

    auto* geo = app.add_subcommand("geometry", "emit quantum/classical geometry tables");
    add_common(geo, geo_opts);
    geo->add_option("--grid-x", grid_x, "radial sample count for CSV tables");
    geo->add_option("--grid-phi", grid_phi, "angular sample count (reserved)");
    geo->add_option("--tol-omega", tol_omega, "tolerance on the form integral");
    geo->add_option("--tol-dm", tol_dm, "tolerance on the measure integral");
    geo->add_option("--tol-ricci", tol_ricci, "tolerance on the curvature integral");

    auto* spec = app.add_subcommand("spectrum", "exact and semiclassical gyron spectra");
    add_common(spec, spec_opts);
    spec->add_option("--perturbation", perturbation_path, "perturbation JSON file");
    spec->add_flag("--exact-only", exact_only, "skip the semiclassical pipeline");
    spec->add_option("--sweep-r", sweep_r, "comma-separated r sweep for the convergence table")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (rep->parsed()) return cmd_rep(rep_opts, tol_residual);
        if (geo->parsed()) return cmd_geometry(geo_opts, grid_x, tol_omega, tol_dm, tol_ricci);
        if (spec->parsed()) return cmd_spectrum(spec_opts, perturbation_path, exact_only, sweep_r);
    } catch (const gyron::MultiWellError& e) {
        std::cerr << "multiwell: " << e.what() << "\n";
        return kExitMultiWell;
    } catch (const gyron::QuadratureNotConvergedError& e) {
        std::cerr << "quadrature: " << e.what() << "\n";
        return kExitQuadratureFailure;
    } catch (const gyron::NonCoprimeError& e) {
        std::cerr << "input: " << e.what() << "\n";
        return kExitInputError;
    } catch (const gyron::NonPositiveError& e) {
        std::cerr << "input: " << e.what() << "\n";
        return kExitInputError;
    } catch (const gyron::InvalidLabelError& e) {
        std::cerr << "input: " << e.what() << "\n";
        return kExitInputError;
    } catch (const gyron::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
