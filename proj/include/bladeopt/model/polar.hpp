#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bladeopt/core/error.hpp"

namespace bladeopt {

struct PolarRow {
    double alpha_deg = 0.0;
    double cl = 0.0;
    double cd = 0.0;
    double cm = 0.0;
};

struct PolarCoefficients {
    double cl = 0.0;
    double cd = 0.0;
    double cm = 0.0;
};

// Tabulated section coefficients versus angle of attack. thickness_ratio
// (t/c) is carried with the airfoil because the structural model builds the
// section outline from it.
struct AirfoilPolar {
    std::string id;
    std::vector<PolarRow> rows;
    bool has_cm = false;
    double thickness_ratio = 0.18;

    void validate() const {
        BLADEOPT_REQUIRE(rows.size() >= 2, ConfigError, "polar '" + id + "': needs at least two rows");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            BLADEOPT_REQUIRE(std::isfinite(r.alpha_deg) && std::isfinite(r.cl) && std::isfinite(r.cd),
                             ConfigError, "polar '" + id + "': non-finite entry");
            BLADEOPT_REQUIRE(r.cd >= 0.0, ConfigError, "polar '" + id + "': negative drag coefficient");
            if (i > 0)
                BLADEOPT_REQUIRE(r.alpha_deg > rows[i - 1].alpha_deg, ConfigError,
                                 "polar '" + id + "': alpha must be strictly increasing");
        }
        BLADEOPT_REQUIRE(thickness_ratio > 0.0 && thickness_ratio <= 1.0, ConfigError,
                         "polar '" + id + "': thickness ratio must lie in (0, 1]");
    }

    double alpha_min() const { return rows.front().alpha_deg; }
    double alpha_max() const { return rows.back().alpha_deg; }
    bool covers_full_circle() const { return alpha_min() <= -180.0 && alpha_max() >= 180.0; }
};

// Piecewise-linear lookup. Exact at table nodes.
inline PolarCoefficients interpolate_polar(const AirfoilPolar& polar, double alpha_deg) {
    if (!(alpha_deg >= -180.0 && alpha_deg <= 180.0))
        throw DomainError("interpolate_polar: alpha outside [-180, 180] deg");
    const auto& rows = polar.rows;
    if (alpha_deg < polar.alpha_min() || alpha_deg > polar.alpha_max())
        throw DomainError("interpolate_polar: alpha outside table range of '" + polar.id + "'");
    auto hi = std::lower_bound(rows.begin(), rows.end(), alpha_deg,
                               [](const PolarRow& r, double a) { return r.alpha_deg < a; });
    if (hi->alpha_deg == alpha_deg) return {hi->cl, hi->cd, hi->cm};
    auto lo = hi - 1;
    const double t = (alpha_deg - lo->alpha_deg) / (hi->alpha_deg - lo->alpha_deg);
    return {lo->cl + t * (hi->cl - lo->cl), lo->cd + t * (hi->cd - lo->cd), lo->cm + t * (hi->cm - lo->cm)};
}

// Maps any angle into [-180, 180].
inline double wrap_angle_deg(double a) {
    a = std::fmod(a + 180.0, 360.0);
    if (a < 0.0) a += 360.0;
    return a - 180.0;
}

namespace detail {

// Viterna flat-plate model anchored at a stall point (as, cls, cds), as in (0, 90).
struct Viterna {
    double a1, a2, b1, b2;

    Viterna(double as_deg, double cls, double cds, double cd_max) {
        const double as = as_deg * std::numbers::pi / 180.0;
        const double s = std::sin(as), c = std::cos(as);
        b1 = cd_max;
        a1 = 0.5 * b1;
        a2 = (cls - cd_max * s * c) * s / (c * c);
        b2 = (cds - cd_max * s * s) / c;
    }
    double cl(double a_deg) const {
        const double a = a_deg * std::numbers::pi / 180.0;
        const double s = std::sin(a), c = std::cos(a);
        return a1 * std::sin(2.0 * a) + a2 * c * c / s;
    }
    double cd(double a_deg) const {
        const double a = a_deg * std::numbers::pi / 180.0;
        const double s = std::sin(a);
        return std::max(0.0, b1 * s * s + b2 * std::cos(a));
    }
};

// Rows strictly above `anchor` (positive-side stall point) up to 180 deg.
inline std::vector<PolarRow> viterna_branch(double as, double cls, double cds, double cd_max,
                                            double cd_180, double step) {
    std::vector<PolarRow> out;
    const Viterna v(as, cls, cds, cd_max);
    const double back = 180.0 - as;  // start of the trailing-edge-first ramp
    std::vector<double> angles;
    for (double a = as + step; a < 180.0 - 1e-9; a += step) angles.push_back(a);
    angles.push_back(180.0);
    for (double a : angles) {
        PolarRow r;
        r.alpha_deg = a;
        if (a <= 90.0) {
            r.cl = v.cl(a);
            r.cd = v.cd(a);
        } else if (a <= back) {
            r.cl = -0.7 * v.cl(180.0 - a);
            r.cd = v.cd(180.0 - a);
        } else {
            // Linear ramp to the zero-lift reversed-flow point at 180 deg.
            const double t = (a - back) / (180.0 - back);
            const double cl_b = -0.7 * cls, cd_b = cds;
            r.cl = (1.0 - t) * cl_b;
            r.cd = (1.0 - t) * cd_b + t * cd_180;
        }
        out.push_back(r);
    }
    return out;
}

} // namespace detail

// Extends a measured polar to the full [-180, 180] circle with the Viterna
// flat-plate model on both sides. A polar already spanning the circle is
// returned unchanged.
inline AirfoilPolar extend_viterna(const AirfoilPolar& polar, double cd_max = 1.47, double step_deg = 2.0) {
    polar.validate();
    if (polar.covers_full_circle()) return polar;
    BLADEOPT_REQUIRE(polar.alpha_min() < 0.0 && polar.alpha_max() > 0.0 && polar.alpha_max() < 90.0 &&
                         polar.alpha_min() > -90.0,
                     ConfigError, "polar '" + polar.id + "': measured range must bracket 0 and stay within +-90 deg");
    const double cd_180 = std::min_element(polar.rows.begin(), polar.rows.end(), [](auto& a, auto& b) {
                              return a.cd < b.cd;
                          })->cd;
    const auto& hi = polar.rows.back();
    const auto& lo = polar.rows.front();

    auto upper = detail::viterna_branch(hi.alpha_deg, hi.cl, hi.cd, cd_max, cd_180, step_deg);
    // Negative side: mirror (alpha, cl) -> (-alpha, -cl), build, mirror back.
    auto lower = detail::viterna_branch(-lo.alpha_deg, -lo.cl, lo.cd, cd_max, cd_180, step_deg);

    AirfoilPolar out = polar;
    out.rows.clear();
    for (auto it = lower.rbegin(); it != lower.rend(); ++it)
        out.rows.push_back({-it->alpha_deg, -it->cl, it->cd, 0.0});
    for (const auto& r : polar.rows) out.rows.push_back(r);
    for (const auto& r : upper) out.rows.push_back({r.alpha_deg, r.cl, r.cd, 0.0});
    // Cm outside the measured range is held at the boundary values.
    for (auto& r : out.rows) {
        if (r.alpha_deg < lo.alpha_deg) r.cm = lo.cm;
        if (r.alpha_deg > hi.alpha_deg) r.cm = hi.cm;
    }
    return out;
}

} // namespace bladeopt
