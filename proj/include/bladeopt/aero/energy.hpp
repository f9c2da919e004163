#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "bladeopt/aero/bem.hpp"
#include "bladeopt/core/error.hpp"
#include "bladeopt/model/environment.hpp"

namespace bladeopt {

inline constexpr double kHoursPerYear = 8760.0;

// Power [W] at speed v by linear interpolation of the curve; zero outside it.
inline double interpolate_power(const std::vector<PowerCurvePoint>& curve, double v) {
    if (curve.empty() || v < curve.front().wind_speed || v > curve.back().wind_speed) return 0.0;
    auto hi = std::lower_bound(curve.begin(), curve.end(), v,
                               [](const PowerCurvePoint& p, double x) { return p.wind_speed < x; });
    if (hi->wind_speed == v || hi == curve.begin()) return hi->power;
    auto lo = hi - 1;
    const double t = (v - lo->wind_speed) / (hi->wind_speed - lo->wind_speed);
    return lo->power + t * (hi->power - lo->power);
}

// Annual energy [kWh/yr]: 8760 h times the Weibull-weighted mean power
// between cut-in and cut-out, trapezoid rule with step dv.
inline double annual_energy(const std::vector<PowerCurvePoint>& curve, const Environment& env, double dv = 0.25) {
    env.validate();
    BLADEOPT_REQUIRE(dv > 0.0, DomainError, "annual_energy: step must be positive");
    if (curve.empty()) return 0.0;
    const double a = env.v_cut_in, b = env.v_cut_out;
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / dv - 1e-9)));
    const double h = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double v = a + h * i;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        sum += w * interpolate_power(curve, v) * weibull_pdf(v, env.weibull_k, env.weibull_c);
    }
    return kHoursPerYear * sum * h / 1000.0;
}

} // namespace bladeopt
