#pragma once

#include <cmath>

#include "bladeopt/core/error.hpp"

namespace bladeopt {

struct Environment {
    double fluid_density = 1.225;        // [kg/m^3]
    double gravity = 9.81;               // [m/s^2]
    double weibull_k = 1.91;             // shape
    double weibull_c = 6.8;              // scale [m/s]
    double u_mean = 6.03;                // [m/s], informational
    double kinematic_viscosity = 1.464e-5;
    double shear_exponent = 0.0;
    double v_cut_in = 3.0;               // [m/s]
    double v_cut_out = 25.0;             // [m/s]

    void validate() const {
        BLADEOPT_REQUIRE(fluid_density > 0.0 && gravity > 0.0, ConfigError,
                         "fluid density and gravity must be positive");
        BLADEOPT_REQUIRE(weibull_k > 0.0 && weibull_c > 0.0, ConfigError,
                         "Weibull shape and scale must be positive");
        BLADEOPT_REQUIRE(v_cut_in >= 0.0 && v_cut_in < v_cut_out, ConfigError,
                         "cut-in speed must be below cut-out speed");
    }

    bool operator==(const Environment&) const = default;
};

// Weibull density f(v) = (k/c)(v/c)^(k-1) exp(-(v/c)^k), per m/s.
inline double weibull_pdf(double v, double k, double c) {
    BLADEOPT_REQUIRE(v >= 0.0 && k > 0.0 && c > 0.0, DomainError, "weibull_pdf: invalid argument");
    if (v == 0.0) {
        if (k > 1.0) return 0.0;
        if (k == 1.0) return 1.0 / c;
        return HUGE_VAL;
    }
    const double x = v / c;
    return (k / c) * std::pow(x, k - 1.0) * std::exp(-std::pow(x, k));
}

inline double weibull_cdf(double v, double k, double c) {
    BLADEOPT_REQUIRE(v >= 0.0 && k > 0.0 && c > 0.0, DomainError, "weibull_cdf: invalid argument");
    if (std::isinf(v)) return 1.0;
    return -std::expm1(-std::pow(v / c, k));
}

} // namespace bladeopt
