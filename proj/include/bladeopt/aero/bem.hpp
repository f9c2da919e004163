#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "bladeopt/core/error.hpp"
#include "bladeopt/model/blade.hpp"
#include "bladeopt/model/environment.hpp"
#include "bladeopt/model/polar.hpp"

namespace bladeopt {

struct BemConfig {
    int max_iter = 1000;
    double a_tol = 1e-6;
    bool tip_loss = true;
    bool hub_loss = true;
    bool swirl = true;
    bool skewed_wake = false;
    bool adv_brake = true;  // Buhl high-induction thrust relation
    bool ai_drag = true;    // drag in the axial induction update
    bool ti_drag = true;    // drag in the tangential induction update
    int num_sectors = 1;
    bool ind_prop = true;   // accepted for deck compatibility; one solver is provided

    void validate() const {
        BLADEOPT_REQUIRE(max_iter >= 1, ConfigError, "BEM: MaxIter must be >= 1");
        BLADEOPT_REQUIRE(a_tol > 0.0, ConfigError, "BEM: ATol must be positive");
        BLADEOPT_REQUIRE(num_sectors >= 1, ConfigError, "BEM: NumSect must be >= 1");
    }

    bool operator==(const BemConfig&) const = default;
};

struct OperatingPoint {
    double wind_speed = 0.0;        // [m/s]
    double rotor_speed_rpm = 80.0;
    double pitch_deg = 0.0;
    double yaw_deg = 0.0;

    double omega() const { return rotor_speed_rpm * 2.0 * std::numbers::pi / 60.0; }
};

struct AnnulusState {
    double a = 0.0, a_prime = 0.0;
    double phi = 0.0;         // inflow angle [rad]
    double alpha = 0.0;       // angle of attack [deg]
    double cl = 0.0, cd = 0.0, cm = 0.0;
    double F = 1.0;
    double w = 0.0;           // relative speed [m/s]
    double dT_dr = 0.0;       // whole-rotor thrust per unit span [N/m]
    double dQ_dr = 0.0;       // whole-rotor torque per unit span [N m/m]
    double normal_force = 0.0;      // per blade, out of the rotor plane [N/m]
    double tangential_force = 0.0;  // per blade, in the direction of rotation [N/m]
    double pitching_moment = 0.0;   // per blade, about the quarter chord, nose up [N m/m]
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
};

// Prandtl tip and hub loss. sin(phi) is floored at 1e-6 in magnitude.
inline double prandtl_factor(int num_blades, double r, double R, double R_hub, double phi, bool tip_loss,
                             bool hub_loss) {
    double s = std::abs(std::sin(phi));
    s = std::max(s, 1e-6);
    const double B = num_blades;
    double F = 1.0;
    if (tip_loss) {
        const double f = B * (R - r) / (2.0 * r * s);
        F *= 2.0 / std::numbers::pi * std::acos(std::clamp(std::exp(-std::max(f, 0.0)), 0.0, 1.0));
    }
    if (hub_loss && R_hub > 0.0) {
        const double f = B * (r - R_hub) / (2.0 * R_hub * s);
        F *= 2.0 / std::numbers::pi * std::acos(std::clamp(std::exp(-std::max(f, 0.0)), 0.0, 1.0));
    }
    return std::clamp(F, 0.0, 1.0);
}

// Buhl's empirical induction for local thrust coefficients above 0.96 F.
inline double buhl_induction(double ct, double F) {
    const double disc = ct * (50.0 - 36.0 * F) + 12.0 * F * (3.0 * F - 4.0);
    return (18.0 * F - 20.0 - 3.0 * std::sqrt(std::max(disc, 0.0))) / (36.0 * F - 50.0);
}

struct AnnulusInput {
    double r = 0.0;
    double chord = 0.0;
    double twist_deg = 0.0;
    const AirfoilPolar* polar = nullptr;
    double cone_rad = 0.0;  // local out-of-plane slope of the blade axis
};

struct RotorGeometry {
    double tip_radius = 10.0;
    double hub_radius = 0.5;
    int num_blades = 3;
};

namespace detail {

inline void element_loads(AnnulusState& st, const AnnulusInput& in, double vx, double vt, int B, double rho) {
    const double s = std::sin(st.phi), c = std::cos(st.phi);
    st.w = std::hypot(vx, vt);
    const double q = 0.5 * rho * st.w * st.w * in.chord;
    st.normal_force = q * (st.cl * c + st.cd * s);
    st.tangential_force = q * (st.cl * s - st.cd * c);
    st.pitching_moment = q * in.chord * st.cm;
    st.dT_dr = B * st.normal_force * std::cos(in.cone_rad);
    st.dQ_dr = B * st.tangential_force * in.r;
}

} // namespace detail

// Damped fixed-point BEM iteration on (a, a') for one annulus, with a
// bracketed inflow-angle solve when it fails to settle. A station at
// a zero loss factor (blade tip or hub with the loss model on) carries no load.
inline AnnulusState solve_annulus(const AnnulusInput& in, const RotorGeometry& rotor, const OperatingPoint& op,
                                  double rho, const BemConfig& cfg) {
    BLADEOPT_REQUIRE(in.chord > 0.0 && in.polar != nullptr, DomainError, "solve_annulus: invalid station");
    AnnulusState st;
    const double omega = op.omega();
    const double yaw = op.yaw_deg * std::numbers::pi / 180.0;
    const double vn = op.wind_speed * std::cos(yaw) * std::cos(in.cone_rad);
    const double theta = in.twist_deg + op.pitch_deg;
    const int B = rotor.num_blades;
    const double sigma = B * in.chord / (2.0 * std::numbers::pi * in.r);
    if (vn <= 0.0 && omega <= 0.0) {
        st.converged = true;
        return st;
    }

    auto evaluate = [&](AnnulusState& s, double a, double ap) {
        const double vx = vn * (1.0 - a), vt = omega * in.r * (1.0 + ap);
        s.phi = std::atan2(vx, vt);
        s.F = prandtl_factor(B, in.r, rotor.tip_radius, rotor.hub_radius, s.phi, cfg.tip_loss, cfg.hub_loss);
        s.alpha = wrap_angle_deg(s.phi * 180.0 / std::numbers::pi - theta);
        const auto co = interpolate_polar(*in.polar, s.alpha);
        if (!std::isfinite(co.cl) || !std::isfinite(co.cd))
            throw NumericalError("solve_annulus: non-finite polar value in '" + in.polar->id + "'");
        s.cl = co.cl;
        s.cd = co.cd;
        s.cm = co.cm;
        return std::pair{vx, vt};
    };

    double a = 0.0, ap = 0.0;
    if (vn <= 0.0) {
        // Pure rotation: no through-flow, no momentum balance to solve.
        const auto [vx, vt] = evaluate(st, 0.0, 0.0);
        detail::element_loads(st, in, vx, vt, B, rho);
        st.converged = true;
        return st;
    }
    for (int it = 1; it <= cfg.max_iter; ++it) {
        AnnulusState s;
        const auto [vx, vt] = evaluate(s, a, ap);
        st = s;
        st.a = a;
        st.a_prime = ap;
        st.iterations = it;
        if (st.F <= 0.0) {
            // Zero-load limit at the tip or hub.
            st.a = st.a_prime = 0.0;
            st.converged = true;
            st.residual = 0.0;
            return st;
        }
        double sp = std::sin(st.phi);
        if (std::abs(sp) < 1e-6) sp = std::copysign(1e-6, sp);
        const double cp = std::cos(st.phi);
        const double cn = st.cl * cp + (cfg.ai_drag ? st.cd * sp : 0.0);
        const double ct = st.cl * sp - (cfg.ti_drag ? st.cd * cp : 0.0);

        double a_new = a;
        const double den_a = 4.0 * st.F * sp * sp + sigma * cn;
        if (std::abs(den_a) > 1e-300) a_new = sigma * cn / den_a;
        if (cfg.adv_brake) {
            const double ct_local = sigma * (1.0 - a) * (1.0 - a) * cn / (sp * sp);
            if (ct_local > 0.96 * st.F) a_new = buhl_induction(ct_local, st.F);
        }
        double ap_new = 0.0;
        if (cfg.swirl) {
            const double den_t = 4.0 * st.F * sp * cp - sigma * ct;
            ap_new = std::abs(den_t) > 1e-300 ? sigma * ct / den_t : ap;
        }
        a_new = std::clamp(a_new, -0.5, 0.995);
        ap_new = std::clamp(ap_new, -0.5, 1.5);

        st.residual = std::max(std::abs(a_new - a), std::abs(ap_new - ap));
        if (!std::isfinite(st.residual)) throw NumericalError("solve_annulus: induction iteration diverged");
        if (st.residual < cfg.a_tol) {
            st.converged = true;
            detail::element_loads(st, in, vx, vt, B, rho);
            if (cfg.skewed_wake && yaw != 0.0) {
                // Pitt-Peters skewed-wake induction, loads averaged over the sectors.
                const double chi = (0.6 * a + 1.0) * yaw;
                const double k = 15.0 * std::numbers::pi / 32.0 * std::tan(0.5 * chi) * in.r / rotor.tip_radius;
                AnnulusState avg = st;
                avg.dT_dr = avg.dQ_dr = avg.normal_force = avg.tangential_force = avg.pitching_moment = 0.0;
                for (int j = 0; j < cfg.num_sectors; ++j) {
                    const double psi = 2.0 * std::numbers::pi * (j + 0.5) / cfg.num_sectors;
                    AnnulusState sec;
                    const auto [sx, sv] = evaluate(sec, a * (1.0 + k * std::cos(psi)), ap);
                    detail::element_loads(sec, in, sx, sv, B, rho);
                    avg.dT_dr += sec.dT_dr / cfg.num_sectors;
                    avg.dQ_dr += sec.dQ_dr / cfg.num_sectors;
                    avg.normal_force += sec.normal_force / cfg.num_sectors;
                    avg.tangential_force += sec.tangential_force / cfg.num_sectors;
                    avg.pitching_moment += sec.pitching_moment / cfg.num_sectors;
                }
                return avg;
            }
            return st;
        }
        a += 0.5 * (a_new - a);
        ap += 0.5 * (ap_new - ap);
    }

    // Fallback: bracket the inflow angle. For a given phi the momentum
    // relations give a(phi), a'(phi) in closed form (the same ones the
    // iteration uses), so a root of the kinematic residual is an exact fixed
    // point of the iteration above.
    struct Induced {
        double a, ap, f;
        bool ok;
    };
    const double lambda_r = omega * in.r / vn;
    auto induced = [&](double phi) {
        AnnulusState s;
        s.phi = phi;
        s.F = prandtl_factor(B, in.r, rotor.tip_radius, rotor.hub_radius, phi, cfg.tip_loss, cfg.hub_loss);
        s.alpha = wrap_angle_deg(phi * 180.0 / std::numbers::pi - theta);
        const auto co = interpolate_polar(*in.polar, s.alpha);
        const double sp = std::sin(phi), cp = std::cos(phi);
        const double cn = co.cl * cp + (cfg.ai_drag ? co.cd * sp : 0.0);
        const double ct = co.cl * sp - (cfg.ti_drag ? co.cd * cp : 0.0);
        if (!(s.F > 0.0)) return Induced{0, 0, 0, false};
        const double k = sigma * cn / (4.0 * s.F * sp * sp);
        const double kp = cfg.swirl ? sigma * ct / (4.0 * s.F * sp * cp) : 0.0;
        double a, inv_one_minus_a;
        if (!cfg.adv_brake || k <= 2.0 / 3.0) {
            a = k / (1.0 + k);
            inv_one_minus_a = 1.0 + k;
        } else {
            const double F = s.F;
            const double g1 = 2.0 * F * k - (10.0 / 9.0 - F);
            const double g2 = std::max(2.0 * F * k - F * (4.0 / 3.0 - F), 0.0);
            const double g3 = 2.0 * F * k - (25.0 / 9.0 - 2.0 * F);
            a = std::abs(g3) < 1e-6 ? 1.0 - 1.0 / (2.0 * std::sqrt(g2)) : (g1 - std::sqrt(g2)) / g3;
            inv_one_minus_a = 1.0 / (1.0 - a);
        }
        const double f = sp * inv_one_minus_a - cp * (1.0 - kp) / lambda_r;
        return Induced{a, kp / (1.0 - kp), f, std::isfinite(f)};
    };
    constexpr double eps = 1e-6;
    const double pi = std::numbers::pi;
    for (auto [lo, hi] : {std::pair{eps, 0.5 * pi}, std::pair{-0.25 * pi, -eps}, std::pair{0.5 * pi, pi - eps}}) {
        auto flo = induced(lo), fhi = induced(hi);
        if (!flo.ok || !fhi.ok || (flo.f > 0.0) == (fhi.f > 0.0)) continue;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            const auto fm = induced(mid);
            if (!fm.ok) break;
            if ((fm.f > 0.0) == (flo.f > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        const auto root = induced(0.5 * (lo + hi));
        if (!root.ok) continue;
        AnnulusState s;
        const auto [vx, vt] = evaluate(s, root.a, root.ap);
        s.a = root.a;
        s.a_prime = root.ap;
        s.iterations = cfg.max_iter;
        // Residual of one iteration step from the root, as above.
        double sp = std::sin(s.phi);
        if (std::abs(sp) < 1e-6) sp = std::copysign(1e-6, sp);
        const double cp = std::cos(s.phi);
        const double cn = s.cl * cp + (cfg.ai_drag ? s.cd * sp : 0.0);
        const double ct = s.cl * sp - (cfg.ti_drag ? s.cd * cp : 0.0);
        double a_new = sigma * cn / (4.0 * s.F * sp * sp + sigma * cn);
        if (cfg.adv_brake) {
            const double ct_local = sigma * (1.0 - s.a) * (1.0 - s.a) * cn / (sp * sp);
            if (ct_local > 0.96 * s.F) a_new = buhl_induction(ct_local, s.F);
        }
        const double ap_new = cfg.swirl ? sigma * ct / (4.0 * s.F * sp * cp - sigma * ct) : 0.0;
        s.residual = std::max(std::abs(a_new - s.a), std::abs(ap_new - s.a_prime));
        if (!(s.residual < cfg.a_tol)) continue;
        s.converged = true;
        detail::element_loads(s, in, vx, vt, B, rho);
        return s;
    }

    const auto [vx, vt] = evaluate(st, st.a, st.a_prime);
    detail::element_loads(st, in, vx, vt, B, rho);
    st.converged = false;
    return st;
}

// Rotor planform with full-circle polars assigned to each station.
struct AeroRotor {
    BladeDefinition blade;
    std::vector<AirfoilPolar> polars;
    std::vector<std::size_t> station_polar;

    // Extends every polar to +-180 deg and resolves station airfoil ids.
    static AeroRotor build(const BladeDefinition& blade, const std::vector<AirfoilPolar>& raw, double cd_max = 1.47) {
        blade.validate();
        AeroRotor r;
        r.blade = blade;
        for (const auto& p : raw) r.polars.push_back(extend_viterna(p, cd_max));
        for (const auto& st : blade.stations) {
            auto it = std::find_if(r.polars.begin(), r.polars.end(), [&](const AirfoilPolar& p) { return p.id == st.airfoil_id; });
            BLADEOPT_REQUIRE(it != r.polars.end(), ConfigError, "blade: no polar for airfoil '" + st.airfoil_id + "'");
            r.station_polar.push_back(static_cast<std::size_t>(it - r.polars.begin()));
        }
        return r;
    }

    const AirfoilPolar& polar_at(std::size_t station) const { return polars[station_polar[station]]; }
    RotorGeometry geometry() const { return {blade.rotor_radius, blade.hub_radius, blade.num_blades}; }
};

// Small elastic deformation of the blade fed back into the aerodynamics:
// twist about the span axis (positive raises the angle of attack) and the
// local flapwise slope.
struct BladeDeformation {
    std::vector<double> twist_rad;
    std::vector<double> flap_slope;
};

struct RotorPerformance {
    double wind_speed = 0.0;
    double omega = 0.0;
    double power = 0.0;             // [W]
    double cp = 0.0;
    double thrust = 0.0;            // [N]
    double torque = 0.0;            // [N m]
    double root_flap_moment = 0.0;  // per blade, about the first station [N m]
    std::vector<AnnulusState> annuli;
    int failed_annuli = 0;

    bool all_converged() const { return failed_annuli == 0; }
};

namespace detail {

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

} // namespace detail

inline RotorPerformance rotor_performance(const AeroRotor& rotor, const OperatingPoint& op, const Environment& env,
                                          const BemConfig& cfg, const BladeDeformation* deform = nullptr) {
    const auto& st = rotor.blade.stations;
    RotorPerformance out;
    out.wind_speed = op.wind_speed;
    out.omega = op.omega();
    std::vector<double> r(st.size()), dt(st.size()), dq(st.size()), flap(st.size());
    const double r0 = st.front().radius_m;
    for (std::size_t i = 0; i < st.size(); ++i) {
        AnnulusInput in{st[i].radius_m, st[i].chord_m, st[i].twist_deg, &rotor.polar_at(i), 0.0};
        if (deform) {
            in.twist_deg -= deform->twist_rad.at(i) * 180.0 / std::numbers::pi;
            in.cone_rad = std::atan(deform->flap_slope.at(i));
        }
        auto a = solve_annulus(in, rotor.geometry(), op, env.fluid_density, cfg);
        if (!a.converged) ++out.failed_annuli;
        r[i] = st[i].radius_m;
        dt[i] = a.dT_dr;
        dq[i] = a.dQ_dr;
        flap[i] = a.dT_dr / rotor.blade.num_blades * (r[i] - r0);
        out.annuli.push_back(a);
    }
    if (out.failed_annuli == static_cast<int>(st.size()))
        throw NumericalError("rotor_performance: no annulus converged at V = " + std::to_string(op.wind_speed));
    out.thrust = detail::trapezoid(r, dt);
    out.torque = detail::trapezoid(r, dq);
    out.root_flap_moment = detail::trapezoid(r, flap);
    out.power = out.torque * out.omega;
    const double R = rotor.blade.rotor_radius;
    const double avail = 0.5 * env.fluid_density * std::numbers::pi * R * R * std::pow(op.wind_speed, 3);
    out.cp = avail > 0.0 ? out.power / avail : 0.0;
    return out;
}

struct PowerCurvePoint {
    double wind_speed = 0.0;
    double power = 0.0;   // [W]
    double cp = 0.0;
    double thrust = 0.0;
    double torque = 0.0;
    double root_flap_moment = 0.0;
    bool converged = true;
};

inline PowerCurvePoint to_curve_point(const RotorPerformance& p) {
    return {p.wind_speed, p.power, p.cp, p.thrust, p.torque, p.root_flap_moment, p.all_converged()};
}

// Fixed speed and pitch power curve. Speeds outside [cut-in, cut-out] give zero power.
inline std::vector<PowerCurvePoint> power_curve(const AeroRotor& rotor, const std::vector<double>& speeds,
                                                const OperatingPoint& tmpl, const Environment& env,
                                                const BemConfig& cfg) {
    for (std::size_t i = 1; i < speeds.size(); ++i)
        BLADEOPT_REQUIRE(speeds[i] > speeds[i - 1], DomainError, "power_curve: speeds must be strictly increasing");
    std::vector<PowerCurvePoint> out;
    for (double v : speeds) {
        if (v < env.v_cut_in || v > env.v_cut_out) {
            out.push_back({v, 0.0, 0.0, 0.0, 0.0, 0.0, true});
            continue;
        }
        OperatingPoint op = tmpl;
        op.wind_speed = v;
        out.push_back(to_curve_point(rotor_performance(rotor, op, env, cfg)));
    }
    return out;
}

} // namespace bladeopt
