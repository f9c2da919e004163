#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "bladeopt/core/error.hpp"
#include "bladeopt/structures/blade_structure.hpp"

namespace bladeopt {

inline constexpr double kFrequencyPenaltyCap = 1e6;

struct PenaltyLimits {
    double max_tip_deflection = 1.0;  // [m]
    double freq_gap_allow = 0.0;      // [rad/s]
    double omega_rotor = 0.0;         // [rad/s]
};

// Structural responses entering the penalties. Lamina stresses arrive
// already normalized by the strengths of the ply they occur in.
struct ResponseSummary {
    LaminaExtremes lamina;
    double buckling_max = 0.0;
    double tip_deflection = 0.0;
    std::vector<double> frequencies;  // [rad/s]
};

// p1..p8 stored at index 0..7.
struct PenaltySet {
    std::array<double, 8> p{};

    double operator[](std::size_t i) const { return p[i]; }
    bool feasible() const {
        return std::all_of(p.begin(), p.end(), [](double v) { return v <= 1.0; });
    }
};

inline PenaltySet penalty_factors(const ResponseSummary& r, const PenaltyLimits& lim) {
    BLADEOPT_REQUIRE(!r.frequencies.empty(), DomainError, "penalty_factors: modal frequencies are required");
    BLADEOPT_REQUIRE(lim.max_tip_deflection > 0.0, DomainError, "penalty_factors: tip deflection limit must be > 0");
    PenaltySet s;
    s.p[0] = r.lamina.r11_tension;
    s.p[1] = r.lamina.r11_compression;
    s.p[2] = r.lamina.r22_tension;
    s.p[3] = r.lamina.r22_compression;
    s.p[4] = r.lamina.r12_shear;
    s.p[5] = r.buckling_max;
    s.p[6] = std::abs(r.tip_deflection) / lim.max_tip_deflection;
    double p8 = 0.0;
    for (double w : r.frequencies) {
        const double gap = std::abs(w - lim.omega_rotor);
        p8 = std::max(p8, gap > 0.0 ? std::min(lim.freq_gap_allow / gap, kFrequencyPenaltyCap) : kFrequencyPenaltyCap);
    }
    s.p[7] = p8;
    return s;
}

// mass * prod max(1, p_n)^2.
inline double penalized_mass(double mass, const PenaltySet& s) {
    double f = mass;
    for (double v : s.p) {
        const double k = std::max(1.0, v);
        f *= k * k;
    }
    return f;
}

} // namespace bladeopt
