#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "gyron/errors.hpp"

namespace gyron {

/// Resonance proportion l:m (coprime) and the quantum of action.
struct ResonanceParams {
    int l = 1;
    int m = 1;
    double hbar = 1.0;
};

inline ResonanceParams validate_params(int l, int m, double hbar) {
    if (l <= 0 || m <= 0) {
        throw NonPositiveError("resonance integers must be positive, got l=" + std::to_string(l) +
                               " m=" + std::to_string(m));
    }
    if (!(hbar > 0.0)) {
        throw NonPositiveError("hbar must be positive, got " + std::to_string(hbar));
    }
    if (std::gcd(l, m) != 1) {
        throw NonCoprimeError("l and m must be coprime, got l=" + std::to_string(l) +
                              " m=" + std::to_string(m));
    }
    return ResonanceParams{l, m, hbar};
}

/// Label (r,q,p) of an irreducible block; the block dimension is r+1.
struct RepLabel {
    int r = 0;
    int q = 0;
    int p = 0;

    int dim() const { return r + 1; }

    friend bool operator==(const RepLabel&, const RepLabel&) = default;
};

/// Integer oscillator level l*m*r + l*p + m*q (energy in units of hbar).
inline std::int64_t energy_units(const ResonanceParams& pr, const RepLabel& lb) {
    return std::int64_t(pr.l) * pr.m * lb.r + std::int64_t(pr.l) * lb.p + std::int64_t(pr.m) * lb.q;
}

inline double rep_energy(const ResonanceParams& pr, const RepLabel& lb) {
    return pr.hbar * double(energy_units(pr, lb));
}

inline RepLabel make_label(const ResonanceParams& pr, int r, int q, int p) {
    if (r < 0 || q < 0 || q > pr.l - 1 || p < 0 || p > pr.m - 1) {
        throw InvalidLabelError("label out of range: r=" + std::to_string(r) + " q=" + std::to_string(q) +
                                " p=" + std::to_string(p) + " for l=" + std::to_string(pr.l) +
                                " m=" + std::to_string(pr.m));
    }
    return RepLabel{r, q, p};
}

/// All labels with energy <= e_max, sorted by energy then (r,q,p).
/// Each oscillator level belongs to exactly one label: p and q are the residues
/// of the level modulo m and l, which fixes (r,q,p) uniquely.
inline std::vector<RepLabel> enumerate_reps(const ResonanceParams& pr, double e_max) {
    std::vector<RepLabel> out;
    if (e_max < 0.0) return out;
    const std::int64_t u_max = std::int64_t(e_max / pr.hbar + 1e-9);
    for (int r = 0; std::int64_t(pr.l) * pr.m * r <= u_max; ++r) {
        for (int q = 0; q <= pr.l - 1; ++q) {
            for (int p = 0; p <= pr.m - 1; ++p) {
                RepLabel lb{r, q, p};
                if (energy_units(pr, lb) <= u_max) out.push_back(lb);
            }
        }
    }
    std::sort(out.begin(), out.end(), [&](const RepLabel& a, const RepLabel& b) {
        auto ea = energy_units(pr, a), eb = energy_units(pr, b);
        if (ea != eb) return ea < eb;
        return std::array{a.r, a.q, a.p} < std::array{b.r, b.q, b.p};
    });
    return out;
}

}  // namespace gyron
