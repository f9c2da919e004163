#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bladeopt/core/error.hpp"
#include "bladeopt/structures/laminate.hpp"

namespace bladeopt {

struct BucklingExponents {
    double alpha = 1.0;  // compression term
    double beta = 2.0;   // shear term

    bool operator==(const BucklingExponents&) const = default;
};

struct CriticalStresses {
    double sigma = 0.0;  // compressive, positive [Pa]
    double tau = 0.0;    // [Pa]
};

// Long simply-supported specially-orthotropic plate of width b, loaded along
// the beam axis (laminate x). Uses the laminate D matrix about its midplane.
inline CriticalStresses panel_critical_stresses(const LaminateModel& lam, double width) {
    BLADEOPT_REQUIRE(width > 0.0, StructuralError, "panel_buckling: zero panel extent");
    const auto& D = lam.abd.D;
    const double t = lam.abd.thickness;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double d11 = D(0, 0), d22 = D(1, 1), d12 = D(0, 1), d66 = D(2, 2);
    const double n_comp = 2.0 * pi2 / (width * width) * (std::sqrt(d11 * d22) + d12 + 2.0 * d66);
    const double n_shear = 5.35 * pi2 / (width * width) * std::pow(d11 * d22 * d22 * d22, 0.25);
    return {n_comp / t, n_shear / t};
}

// Interaction sum (sigma / sigma_cr)^alpha + (tau / tau_cr)^beta.
// sigma is compressive-positive; tension does not contribute.
inline double buckling_interaction(double sigma_compressive, double tau, const CriticalStresses& cr,
                                   const BucklingExponents& ex = {}) {
    BLADEOPT_REQUIRE(cr.sigma > 0.0 && cr.tau > 0.0, StructuralError, "panel_buckling: critical stresses must be > 0");
    const double s = std::max(0.0, sigma_compressive) / cr.sigma;
    const double q = std::abs(tau) / cr.tau;
    return std::pow(s, ex.alpha) + std::pow(q, ex.beta);
}

inline double panel_buckling(const LaminateModel& lam, double width, double sigma_compressive, double tau,
                             const BucklingExponents& ex = {}) {
    return buckling_interaction(sigma_compressive, tau, panel_critical_stresses(lam, width), ex);
}

} // namespace bladeopt
