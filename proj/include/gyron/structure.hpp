#pragma once

#include <utility>

#include "gyron/params.hpp"

namespace gyron {

/// Structure polynomials of the commutant algebra: the factorized right-hand
/// side of the ladder commutator, the linear Casimir form, and the affine
/// step map that shifts a weight by one ladder application.
struct StructureData {
    ResonanceParams params;

    explicit StructureData(const ResonanceParams& pr) : params(pr) {}

    double rho_plus(double a1) const {
        double v = 1.0;
        for (int j = 1; j <= params.m; ++j) v *= a1 + j * params.hbar;
        return v;
    }

    double rho_minus(double a2) const {
        double v = 1.0;
        for (int s = 1; s <= params.l; ++s) v *= a2 - (s - 1) * params.hbar;
        return v;
    }

    double rho(double a1, double a2) const { return rho_plus(a1) * rho_minus(a2); }

    double kappa(double a1, double a2) const { return params.l * a1 + params.m * a2; }

    /// One ladder step: (a1, a2) -> (a1 - hbar*m, a2 + hbar*l). kappa is invariant.
    std::pair<double, double> step(double a1, double a2) const {
        return {a1 - params.hbar * params.m, a2 + params.hbar * params.l};
    }

    std::pair<double, double> step_n(double a1, double a2, int n) const {
        return {a1 - double(n) * params.hbar * params.m, a2 + double(n) * params.hbar * params.l};
    }

    /// Weight of the lowest vector of the block: (hbar(rm+p), hbar q).
    std::pair<double, double> base_point(const RepLabel& lb) const {
        return {params.hbar * (double(lb.r) * params.m + lb.p), params.hbar * double(lb.q)};
    }
};

}  // namespace gyron
