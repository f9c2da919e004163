#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include "bladeopt/aero/bem.hpp"
#include "bladeopt/aero/energy.hpp"
#include "bladeopt/core/error.hpp"
#include "bladeopt/model/design.hpp"
#include "bladeopt/model/environment.hpp"
#include "bladeopt/moo/pareto.hpp"
#include "bladeopt/objectives/fitness.hpp"
#include "bladeopt/objectives/penalty.hpp"
#include "bladeopt/structures/blade_structure.hpp"

namespace bladeopt {

struct EvaluationSettings {
    Environment env;
    BemConfig bem;
    OperatingPoint op;                  // rotor speed, pitch and yaw; wind speed unused
    std::vector<double> wind_speeds;    // power-curve grid
    StructuralSettings structure;
    PenaltyLimits limits;               // omega_rotor is taken from op when zero
    double safety_factor = 1.35;
    bool use_cm = true;
    bool aeroelastic = true;            // feed elastic twist and flap slope back into the power curve
};

// Per-blade aerodynamic line loads at the stations, rotor frame, reduced to
// the pitch axis. Forces act at the quarter chord.
inline LineLoads aero_line_loads(const RotorPerformance& perf, const BladeStructure& bs, bool use_cm) {
    const auto& st = bs.stations();
    BLADEOPT_REQUIRE(perf.annuli.size() == st.size(), DomainError, "aero loads: station count mismatch");
    LineLoads l = LineLoads::zeros(st.size());
    for (std::size_t i = 0; i < st.size(); ++i) {
        const auto& a = perf.annuli[i];
        const auto& g = st[i].geometry;
        const Eigen::Vector2d qc = rotation2(st[i].angle) * Eigen::Vector2d((0.25 - g.pitch_axis_fraction) * g.chord, 0.0);
        l.add_offset_force(i, Eigen::Vector3d(a.tangential_force, a.normal_force, 0.0), qc);
        if (use_cm) l.m[i].z() += a.pitching_moment;
    }
    return l;
}

inline BladeDeformation deformation_at(const BeamState& s, const std::vector<double>& radii) {
    BladeDeformation d;
    for (double r : radii) {
        d.twist_rad.push_back(BeamState::sample(s.z, s.twist, r));
        d.flap_slope.push_back(BeamState::sample(s.z, s.flap_slope, r));
    }
    return d;
}

struct DesignReport {
    std::vector<StationLayup> layup;
    std::shared_ptr<const BladeStructure> structure;
    double mass = 0.0;
    double design_wind_speed = 0.0;
    StaticResponse response;          // under the factored design load
    BeamModel::Modes modes;
    PenaltySet penalties;
    double penalized_mass = 0.0;
    std::vector<PowerCurvePoint> curve;  // elastic when aeroelastic is on
    double aep = 0.0;                    // [kWh/yr]

    bool feasible() const { return penalties.feasible(); }
};

// The full design evaluation: layup -> sections -> beam response under the
// design load -> penalties (penalized mass), and the power curve -> AEP.
// Immutable after construction; evaluate() may be called concurrently.
class BladeEvaluator {
public:
    BladeEvaluator(AeroRotor rotor, MaterialSet mats, DesignLayout layout, EvaluationSettings s)
        : rotor_(std::move(rotor)), mats_(std::move(mats)), layout_(std::move(layout)), s_(std::move(s)) {
        s_.env.validate();
        s_.bem.validate();
        layout_.validate(rotor_.blade.num_sections());
        BLADEOPT_REQUIRE(!s_.wind_speeds.empty(), ConfigError, "evaluator: empty wind-speed grid");
        BLADEOPT_REQUIRE(s_.safety_factor > 0.0, ConfigError, "evaluator: safety factor must be > 0");
        if (s_.limits.omega_rotor == 0.0) s_.limits.omega_rotor = s_.op.omega();
        s_.structure.body.omega_rad_s = s_.op.omega();
        for (std::size_t i = 0; i < rotor_.blade.stations.size(); ++i) {
            thickness_.push_back(rotor_.polar_at(i).thickness_ratio);
            radii_.push_back(rotor_.blade.stations[i].radius_m);
        }
        for (double v : s_.wind_speeds) {
            OperatingPoint op = s_.op;
            op.wind_speed = v;
            const bool on = v >= s_.env.v_cut_in && v <= s_.env.v_cut_out;
            rigid_.push_back(on ? std::optional(rotor_performance(rotor_, op, s_.env, s_.bem)) : std::nullopt);
            rigid_curve_.push_back(on ? to_curve_point(*rigid_.back()) : PowerCurvePoint{v, 0, 0, 0, 0, 0, true});
        }
        double best = -1.0;
        for (std::size_t k = 0; k < rigid_.size(); ++k)
            if (rigid_[k] && rigid_[k]->root_flap_moment > best) {
                best = rigid_[k]->root_flap_moment;
                design_case_ = k;
            }
        BLADEOPT_REQUIRE(best >= 0.0, ConfigError, "evaluator: no wind speed between cut-in and cut-out");
        rigid_aep_ = annual_energy(rigid_curve_, s_.env);
    }

    // Reports refer to the material set held here, so the evaluator stays put.
    BladeEvaluator(const BladeEvaluator&) = delete;
    BladeEvaluator& operator=(const BladeEvaluator&) = delete;

    const AeroRotor& rotor() const { return rotor_; }
    const DesignLayout& layout() const { return layout_; }
    const EvaluationSettings& settings() const { return s_; }
    const std::vector<PowerCurvePoint>& rigid_curve() const { return rigid_curve_; }
    double rigid_aep() const { return rigid_aep_; }
    double design_wind_speed() const { return s_.wind_speeds[design_case_]; }
    const RotorPerformance& design_case() const { return *rigid_[design_case_]; }

    BladeStructure build_structure(const DesignVector& x) const {
        return BladeStructure(rotor_.blade, thickness_, design_vector_to_layup(x, rotor_.blade, layout_), mats_,
                              s_.structure.points_per_surface, s_.op.pitch_deg);
    }

    DesignReport evaluate(const DesignVector& x) const {
        DesignReport out;
        auto bs = std::make_shared<const BladeStructure>(build_structure(x));
        out.layup.reserve(bs->stations().size());
        for (const auto& st : bs->stations()) out.layup.push_back(st.layup);
        out.mass = bs->mass();
        const BeamModel beam(bs->beam_sections(), s_.structure.n_elems);
        const LineLoads body = body_force_loads(bs->beam_sections(), s_.structure.body);

        LineLoads design = aero_line_loads(design_case(), *bs, s_.use_cm);
        design += body;
        design *= s_.safety_factor;
        out.design_wind_speed = design_wind_speed();
        out.response = static_response(*bs, beam, design, s_.structure.buckling);
        out.modes = beam.modal(s_.structure.n_modes);

        ResponseSummary rs;
        rs.lamina = out.response.lamina;
        rs.buckling_max = out.response.buckling_max;
        rs.tip_deflection = out.response.beam.tip_deflection;
        rs.frequencies = out.modes.flap;
        rs.frequencies.insert(rs.frequencies.end(), out.modes.edge.begin(), out.modes.edge.end());
        out.penalties = penalty_factors(rs, s_.limits);
        out.penalized_mass = penalized_mass(out.mass, out.penalties);

        if (!s_.aeroelastic) {
            out.curve = rigid_curve_;
        } else {
            // One-pass coupling: rigid-blade loads plus unfactored body
            // forces deform the blade, and the deformed blade is re-solved.
            for (std::size_t k = 0; k < rigid_.size(); ++k) {
                if (!rigid_[k]) {
                    out.curve.push_back(rigid_curve_[k]);
                    continue;
                }
                LineLoads l = aero_line_loads(*rigid_[k], *bs, s_.use_cm);
                l += body;
                const auto def = deformation_at(beam.solve(l), radii_);
                OperatingPoint op = s_.op;
                op.wind_speed = s_.wind_speeds[k];
                out.curve.push_back(to_curve_point(rotor_performance(rotor_, op, s_.env, s_.bem, &def)));
            }
        }
        out.aep = annual_energy(out.curve, s_.env);
        out.structure = std::move(bs);
        return out;
    }

    DesignReport evaluate(const std::vector<double>& flat) const {
        return evaluate(DesignVector::from_flat(flat, layout_));
    }

    // Adapter for the Pareto sweep: the penalized mass enters the fitness.
    DesignObjectives objectives(const std::vector<double>& flat) const {
        const auto r = evaluate(flat);
        return {r.penalized_mass, r.aep, r.penalties.p, r.feasible()};
    }

private:
    AeroRotor rotor_;
    MaterialSet mats_;  // laminates built by evaluate() point into this
    DesignLayout layout_;
    EvaluationSettings s_;
    std::vector<double> thickness_, radii_;
    std::vector<std::optional<RotorPerformance>> rigid_;
    std::vector<PowerCurvePoint> rigid_curve_;
    std::size_t design_case_ = 0;
    double rigid_aep_ = 0.0;
};

// Power coefficient at the design speed (maximized) and blade mass
// (minimized), as an objective vector for the dominance utilities.
inline std::vector<double> cp_mass_objectives(const AeroRotor& rotor, const OperatingPoint& tmpl, const Environment& env,
                                              const BemConfig& cfg, double mass, double wind_speed = 9.0) {
    OperatingPoint op = tmpl;
    op.wind_speed = wind_speed;
    return {rotor_performance(rotor, op, env, cfg).cp, mass};
}

inline const std::vector<Sense> kCpMassSenses = {Sense::maximize, Sense::minimize};

} // namespace bladeopt
