#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "bladeopt/core/error.hpp"

namespace bladeopt {

struct BladeStation {
    double radius_m = 0.0;             // from rotor axis
    double chord_m = 0.0;
    double twist_deg = 0.0;            // positive toward feather
    double pitch_axis_fraction = 0.25; // pitch axis location, fraction of chord from the leading edge
    std::string airfoil_id;
};

enum class StationSpacing { equal, cosine };

// Rotor blade planform. rotor_radius is the tip radius; the structural beam
// runs from the first station (the blade root) to the last.
struct BladeDefinition {
    double rotor_radius = 10.0;
    double hub_radius = 0.5;
    int num_blades = 3;
    StationSpacing spacing = StationSpacing::cosine;
    std::vector<BladeStation> stations;

    std::size_t num_sections() const { return stations.size(); }
    double root_radius() const { return stations.front().radius_m; }

    void validate() const {
        BLADEOPT_REQUIRE(num_blades >= 1, ConfigError, "blade: number of blades must be >= 1");
        BLADEOPT_REQUIRE(hub_radius >= 0.0 && hub_radius < rotor_radius, ConfigError,
                         "blade: hub radius must lie in [0, rotor radius)");
        BLADEOPT_REQUIRE(stations.size() >= 2, ConfigError, "blade: at least two stations required");
        BLADEOPT_REQUIRE(stations.front().radius_m >= hub_radius - 1e-12, ConfigError,
                         "blade: first station lies inside the hub");
        BLADEOPT_REQUIRE(stations.back().radius_m <= rotor_radius + 1e-9, ConfigError,
                         "blade: last station lies beyond the rotor radius");
        for (std::size_t i = 0; i < stations.size(); ++i) {
            const auto& s = stations[i];
            BLADEOPT_REQUIRE(std::isfinite(s.chord_m) && s.chord_m > 0.0, ConfigError,
                             "blade: chord must be positive at station " + std::to_string(i + 1));
            BLADEOPT_REQUIRE(s.pitch_axis_fraction > 0.0 && s.pitch_axis_fraction < 1.0, ConfigError,
                             "blade: pitch axis fraction must lie in (0, 1) at station " + std::to_string(i + 1));
            if (i > 0)
                BLADEOPT_REQUIRE(s.radius_m > stations[i - 1].radius_m, ConfigError,
                                 "blade: station radii must be strictly increasing");
        }
    }
};

// n radii from r0 to r1 inclusive, clustered at both ends when cosine.
inline std::vector<double> station_radii(double r0, double r1, std::size_t n, StationSpacing spacing) {
    BLADEOPT_REQUIRE(n >= 2 && r1 > r0, ConfigError, "station_radii: need n >= 2 and r1 > r0");
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(n - 1);
        const double f = spacing == StationSpacing::cosine ? 0.5 * (1.0 - std::cos(std::numbers::pi * u)) : u;
        r[i] = r0 + (r1 - r0) * f;
    }
    r.front() = r0;
    r.back() = r1;
    return r;
}

} // namespace bladeopt
