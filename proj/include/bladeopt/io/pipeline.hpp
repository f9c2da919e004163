#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bladeopt/aero/bem.hpp"
#include "bladeopt/core/error.hpp"
#include "bladeopt/io/config.hpp"
#include "bladeopt/io/inputs.hpp"
#include "bladeopt/moo/ga.hpp"
#include "bladeopt/objectives/evaluator.hpp"
#include "bladeopt/structures/airfoil_section.hpp"

namespace bladeopt {

inline BladeDefinition load_blade(const RunConfig& c) {
    auto b = io::parse_blade_file(c.files.blade, c.turbine.rotor_radius, c.turbine.hub_radius, c.turbine.num_blades,
                                  c.blade.elm_spc == 1 ? StationSpacing::cosine : StationSpacing::equal);
    BLADEOPT_REQUIRE(b.num_sections() == static_cast<std::size_t>(c.blade.num_sec), ConfigError,
                     "NUM_SEC = " + std::to_string(c.blade.num_sec) + " but '" + c.files.blade + "' has " +
                         std::to_string(b.num_sections()) + " stations");
    return b;
}

inline std::vector<AirfoilPolar> load_polars(const RunConfig& c) {
    std::vector<AirfoilPolar> out;
    for (const auto& f : c.files.polars) {
        auto p = io::parse_polar_file(f);
        if (c.output.use_cm)
            BLADEOPT_REQUIRE(p.has_cm, ConfigError, "UseCm is true but '" + f + "' has no Cm column");
        for (const auto& q : out)
            BLADEOPT_REQUIRE(q.id != p.id, ConfigError, "two polar files define airfoil '" + p.id + "'");
        out.push_back(std::move(p));
    }
    return out;
}

inline EvaluationSettings evaluation_settings(const RunConfig& c) {
    EvaluationSettings s;
    s.env = c.env;
    s.bem = c.bem;
    s.op.rotor_speed_rpm = c.rotor_speed.start;
    s.op.pitch_deg = c.pitch.start;
    s.op.yaw_deg = c.turbine.yaw_deg;
    s.wind_speeds = c.wind_speeds();
    s.structure.n_elems = c.analysis.n_elems;
    s.structure.n_modes = c.modes();
    auto& body = s.structure.body;
    body.self_weight = c.analysis.self_weight;
    body.buoyancy = c.analysis.buoyancy;
    body.centrifugal = c.analysis.centrif;
    body.gravity = c.env.gravity;
    body.fluid_density = c.env.fluid_density;
    body.omega_rad_s = s.op.omega();
    body.azimuth_deg = c.blade.azim;
    s.structure.buckling = {c.limits.buckle_alpha, c.limits.buckle_beta};
    s.limits.max_tip_deflection = c.tip_deflection_limit();
    s.limits.omega_rotor = s.op.omega();
    s.limits.freq_gap_allow = c.limits.freq_gap_frac * s.op.omega();
    s.safety_factor = c.limits.safety_factor;
    s.use_cm = c.output.use_cm;
    return s;
}

inline AeroRotor make_rotor(const RunConfig& c) { return AeroRotor::build(load_blade(c), load_polars(c)); }

inline std::unique_ptr<BladeEvaluator> make_evaluator(const RunConfig& c) {
    auto rotor = make_rotor(c);
    auto mats = MaterialSet::from_named(io::parse_materials(c.files.materials));
    return std::make_unique<BladeEvaluator>(std::move(rotor), std::move(mats), c.opt.layout, evaluation_settings(c));
}

// Box bounds in flat design-vector order.
inline Bounds design_bounds(const DesignBounds& b, const DesignLayout& layout) {
    Bounds out;
    auto add = [&](const Interval& iv, std::size_t n) {
        out.lower.insert(out.lower.end(), n, iv.lo);
        out.upper.insert(out.upper.end(), n, iv.hi);
    };
    const auto n = static_cast<std::size_t>(layout.num_cp);
    add(b.w_cap, 2);
    add(b.root, 1);
    for (const auto* iv : {&b.skin, &b.cap_uni, &b.cap_core, &b.lep_core, &b.tep_core}) add(*iv, n);
    add(b.web_skin, 2);
    add(b.web_core, 2);
    return out;
}

// Spanwise taper: every control-point family and both web materials are
// non-increasing from inboard to outboard (x_outboard - x_inboard <= 0).
inline LinearConstraints taper_constraints(const DesignLayout& layout) {
    const auto n = static_cast<Eigen::Index>(layout.num_cp);
    const auto size = static_cast<Eigen::Index>(layout.vector_size());
    std::vector<std::pair<Eigen::Index, Eigen::Index>> rows;  // (inboard, outboard)
    for (Eigen::Index f = 0; f < 5; ++f)
        for (Eigen::Index k = 0; k + 1 < n; ++k) rows.push_back({3 + f * n + k, 3 + f * n + k + 1});
    const Eigen::Index web = 3 + 5 * n;
    rows.push_back({web, web + 1});
    rows.push_back({web + 2, web + 3});
    LinearConstraints c;
    c.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), size);
    c.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        c.A(static_cast<Eigen::Index>(r), rows[r].first) = -1.0;
        c.A(static_cast<Eigen::Index>(r), rows[r].second) = 1.0;
    }
    return c;
}

} // namespace bladeopt
