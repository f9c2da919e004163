#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "bladeopt/core/error.hpp"
#include "bladeopt/model/blade.hpp"
#include "bladeopt/model/design.hpp"
#include "bladeopt/structures/airfoil_section.hpp"
#include "bladeopt/structures/beam.hpp"
#include "bladeopt/structures/buckling.hpp"
#include "bladeopt/structures/laminate.hpp"
#include "bladeopt/structures/section.hpp"

namespace bladeopt {

// Trapezoid integral of the mass distribution over the station radii [kg].
inline double blade_mass(const std::vector<double>& mass_per_length, const std::vector<double>& radii) {
    BLADEOPT_REQUIRE(mass_per_length.size() == radii.size(), DomainError, "blade_mass: size mismatch");
    double m = 0.0;
    for (std::size_t i = 1; i < radii.size(); ++i)
        m += 0.5 * (radii[i] - radii[i - 1]) * (mass_per_length[i] + mass_per_length[i - 1]);
    return m;
}

inline double blade_mass(const std::vector<SectionProperties>& props, const std::vector<double>& radii) {
    std::vector<double> m;
    m.reserve(props.size());
    for (const auto& p : props) m.push_back(p.mass_per_length);
    return blade_mass(m, radii);
}

struct StructuralSettings {
    int n_elems = 50;
    int n_modes = 3;
    int points_per_surface = 40;
    BodyForceOptions body;
    BucklingExponents buckling;
};

struct StationStructure {
    double radius = 0.0;
    double angle = 0.0;  // chord frame -> rotor frame rotation [rad]
    SectionGeometry geometry;
    StationLayup layup;
    std::optional<SectionAnalysis> analysis;  // empty when the station has no material
    SectionProperties props;
    BeamSection beam;
};

// Cross sections of every blade station for one layup. The material set must
// outlive the structure: laminates refer to it.
class BladeStructure {
public:
    BladeStructure(const BladeDefinition& blade, const std::vector<double>& thickness_ratio,
                   const std::vector<StationLayup>& layup, const MaterialSet& mats, int points_per_surface,
                   double pitch_deg = 0.0) {
        BLADEOPT_REQUIRE(thickness_ratio.size() == blade.stations.size() && layup.size() == blade.stations.size(),
                         StructuralError, "structure: per-station inputs do not match the blade");
        for (std::size_t i = 0; i < blade.stations.size(); ++i) {
            const auto& st = blade.stations[i];
            StationStructure s;
            s.radius = st.radius_m;
            s.angle = std::numbers::pi - (st.twist_deg + pitch_deg) * std::numbers::pi / 180.0;
            s.geometry = {st.chord_m, st.pitch_axis_fraction, thickness_ratio[i], points_per_surface};
            s.layup = layup[i];
            if (auto sec = build_station_section(s.layup, s.geometry, mats)) {
                s.analysis.emplace(std::move(*sec));
                s.props = s.analysis->properties();
            }
            s.beam = to_beam_section(s.radius, s.props, s.angle);
            radii_.push_back(s.radius);
            stations_.push_back(std::move(s));
        }
    }

    const std::vector<StationStructure>& stations() const { return stations_; }
    const std::vector<double>& radii() const { return radii_; }

    std::vector<BeamSection> beam_sections() const {
        std::vector<BeamSection> b;
        for (const auto& s : stations_) b.push_back(s.beam);
        return b;
    }

    std::vector<SectionProperties> properties() const {
        std::vector<SectionProperties> p;
        for (const auto& s : stations_) p.push_back(s.props);
        return p;
    }

    double mass() const { return blade_mass(properties(), radii_); }

private:
    std::vector<StationStructure> stations_;
    std::vector<double> radii_;
};

// Extreme principal-axis ply stresses over the blade, and the same extremes
// normalized by each ply's own material strengths.
struct LaminaExtremes {
    double s11_max = 0.0, s11_min = 0.0, s22_max = 0.0, s22_min = 0.0, t12_abs_max = 0.0;
    double r11_tension = 0.0, r11_compression = 0.0, r22_tension = 0.0, r22_compression = 0.0, r12_shear = 0.0;

    void add(const LaminaResponse& r, const Material& m) {
        s11_max = std::max(s11_max, r.s11);
        s11_min = std::min(s11_min, r.s11);
        s22_max = std::max(s22_max, r.s22);
        s22_min = std::min(s22_min, r.s22);
        t12_abs_max = std::max(t12_abs_max, std::abs(r.t12));
        const auto& s = m.strength;
        r11_tension = std::max(r11_tension, std::max(r.s11, 0.0) / s.s11_tension);
        r11_compression = std::max(r11_compression, std::abs(std::min(r.s11, 0.0)) / s.s11_compression);
        r22_tension = std::max(r22_tension, std::max(r.s22, 0.0) / s.s22_tension);
        r22_compression = std::max(r22_compression, std::abs(std::min(r.s22, 0.0)) / s.s22_compression);
        r12_shear = std::max(r12_shear, std::abs(r.t12) / s.t12_shear);
    }
};

struct StationResponse {
    double radius = 0.0;
    SectionResultants resultants;  // chord frame
    double sigma_zz_max = 0.0;     // largest |sigma_zz| on the section
    double tau_zs_max = 0.0;       // largest |tau_zs|
    double buckling_max = 0.0;     // largest panel interaction ratio
};

struct StaticResponse {
    BeamState beam;
    std::vector<StationResponse> stations;
    LaminaExtremes lamina;
    double buckling_max = 0.0;
};

// Stresses, ply responses and panel buckling under one load set.
inline StaticResponse static_response(const BladeStructure& bs, const BeamModel& beam, const LineLoads& loads,
                                      const BucklingExponents& ex) {
    StaticResponse out;
    out.beam = beam.solve(loads);
    const auto res = cantilever_resultants(bs.radii(), loads);
    for (std::size_t i = 0; i < bs.stations().size(); ++i) {
        const auto& st = bs.stations()[i];
        StationResponse sr;
        sr.radius = st.radius;
        // Rotor-frame first moments and shears rotate into the chord frame.
        const Eigen::Matrix2d Rt = rotation2(st.angle).transpose();
        const Eigen::Vector2d q = Rt * Eigen::Vector2d(res[i].Qx, res[i].Qy);
        const Eigen::Vector2d v = Rt * Eigen::Vector2d(res[i].Vx, res[i].Vy);
        sr.resultants = {res[i].N, q.x(), q.y(), v.x(), v.y(), res[i].T};
        if (st.analysis) {
            const auto& an = *st.analysis;
            const auto stresses = an.stresses(sr.resultants);
            const auto& sec = an.section();
            std::vector<double> panel_comp(sec.panels.size(), 0.0), panel_tau(sec.panels.size(), 0.0);
            for (std::size_t e = 0; e < sec.edges.size(); ++e) {
                const auto& es = stresses[e];
                const auto pidx = static_cast<std::size_t>(sec.edges[e].panel);
                const auto& lam = sec.panels[pidx].laminate;
                sr.sigma_zz_max = std::max({sr.sigma_zz_max, std::abs(es.sigma_a), std::abs(es.sigma_b)});
                sr.tau_zs_max = std::max(sr.tau_zs_max, std::abs(es.tau));
                panel_comp[pidx] = std::max({panel_comp[pidx], -es.sigma_a, -es.sigma_b});
                panel_tau[pidx] = std::max(panel_tau[pidx], std::abs(es.tau));
                for (double sig : {es.sigma_a, es.sigma_b}) {
                    const auto plies = lamina_stress_recovery(lam, sig, es.tau);
                    for (std::size_t k = 0; k < plies.size(); ++k) out.lamina.add(plies[k], *lam.plies[k].material);
                }
            }
            for (std::size_t p = 0; p < sec.panels.size(); ++p) {
                const auto& pnl = sec.panels[p];
                sr.buckling_max = std::max(sr.buckling_max,
                                           panel_buckling(pnl.laminate, pnl.extent, panel_comp[p], panel_tau[p], ex));
            }
        }
        out.buckling_max = std::max(out.buckling_max, sr.buckling_max);
        out.stations.push_back(sr);
    }
    return out;
}

} // namespace bladeopt
