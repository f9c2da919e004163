#pragma once

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "bladeopt/aero/bem.hpp"
#include "bladeopt/io/config.hpp"
#include "bladeopt/structures/beam.hpp"
#include "bladeopt/structures/section.hpp"

namespace bladeopt::test {

inline std::filesystem::path data_dir() { return BLADEOPT_TEST_DATA_DIR; }

inline RunConfig example_config() { return io::parse_run_config(data_dir() / "example.cfg"); }

// Thin-airfoil lift over the full circle and no drag.
inline AirfoilPolar drag_free_polar(std::string id = "ideal") {
    AirfoilPolar p;
    p.id = std::move(id);
    for (int a = -180; a <= 180; ++a) {
        const double r = a * std::numbers::pi / 180.0;
        p.rows.push_back({static_cast<double>(a), std::numbers::pi * std::sin(2.0 * r), 0.0, 0.0});
    }
    return p;
}

// Betz-optimum planform for a design tip-speed ratio: phi = 2/3 atan(1/lambda_r),
// chord from the momentum balance at a = 1/3, 6 deg angle of attack.
inline AeroRotor ideal_rotor(double design_tsr = 7.0, int n = 40) {
    BladeDefinition b;
    b.rotor_radius = 10.0;
    b.hub_radius = 0.5;
    b.num_blades = 3;
    const double aoa = 6.0;
    const double cl = std::numbers::pi * std::sin(2.0 * aoa * std::numbers::pi / 180.0);
    for (double r : station_radii(1.0, 9.9, static_cast<std::size_t>(n), StationSpacing::equal)) {
        const double lr = design_tsr * r / b.rotor_radius;
        const double phi = 2.0 / 3.0 * std::atan(1.0 / lr);
        BladeStation s;
        s.radius_m = r;
        s.chord_m = 8.0 * std::numbers::pi * r * (1.0 - std::cos(phi)) / (b.num_blades * cl);
        s.twist_deg = phi * 180.0 / std::numbers::pi - aoa;
        s.airfoil_id = "ideal";
        b.stations.push_back(s);
    }
    return AeroRotor::build(b, {drag_free_polar()});
}

inline BemConfig loss_free_bem() {
    BemConfig c;
    c.tip_loss = false;
    c.hub_loss = false;
    return c;
}

// Thin circular tube of radius r and wall t, discretized into n straight
// segments, one closed cell.
inline ThinWallSection tube_section(const Material& m, double r, double t, int n = 720) {
    ThinWallSection s;
    const double seg = 2.0 * r * std::sin(std::numbers::pi / n);
    s.panels.push_back({PanelRegion::shell, LaminateModel({{&m, t, 0.0}}), seg * n});
    CellLoop cell;
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * std::numbers::pi * i / n;
        s.nodes.emplace_back(r * std::cos(th), r * std::sin(th));
        s.edges.push_back({i, (i + 1) % n, 0});
        cell.edges.emplace_back(i, 1);
    }
    s.cells.push_back(cell);
    return s;
}

// Prismatic beam section with decoupled stiffness about the pitch axis.
inline BeamSection uniform_section(double radius, double EA, double EI_edge, double EI_flap, double GJ, double m) {
    BeamSection s;
    s.radius = radius;
    s.K = Eigen::Vector3d(EA, EI_edge, EI_flap).asDiagonal();
    s.GJ = GJ;
    s.mass_per_length = m;
    return s;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace bladeopt::test
