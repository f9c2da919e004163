#pragma once

#include <cmath>
#include <string>

#include "bladeopt/core/error.hpp"

namespace bladeopt {

// Failure strengths, all positive magnitudes [Pa].
struct Strengths {
    double s11_tension = 0.0;
    double s11_compression = 0.0;
    double s22_tension = 0.0;
    double s22_compression = 0.0;
    double t12_shear = 0.0;
};

// Orthotropic lamina material. Axis 1 is the fiber direction.
struct Material {
    std::string name;
    double E11 = 0.0;  // [Pa]
    double E22 = 0.0;  // [Pa]
    double G12 = 0.0;  // [Pa]
    double nu12 = 0.0;
    double rho = 0.0;  // [kg/m^3]
    Strengths strength;

    void validate() const {
        auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
        BLADEOPT_REQUIRE(pos(E11) && pos(E22) && pos(G12), ConfigError,
                         "material '" + name + "': moduli must be positive");
        // 0.5 itself is admitted (the web-shell row of the reference data
        // uses it); orthotropic stability additionally needs nu12^2 < E11/E22.
        BLADEOPT_REQUIRE(nu12 > 0.0 && nu12 <= 0.5 && nu12 * nu12 < E11 / E22, ConfigError,
                         "material '" + name + "': nu12 must lie in (0, 0.5]");
        BLADEOPT_REQUIRE(pos(rho), ConfigError, "material '" + name + "': density must be positive");
        const auto& s = strength;
        BLADEOPT_REQUIRE(pos(s.s11_tension) && pos(s.s11_compression) && pos(s.s22_tension) &&
                             pos(s.s22_compression) && pos(s.t12_shear),
                         ConfigError, "material '" + name + "': all strengths must be positive");
    }
};

// Builds an isotropic material (E11 = E22, G = E / 2(1 + nu)). Used by tests
// and for quick what-if studies.
inline Material isotropic_material(std::string name, double E, double nu, double rho,
                                   double strength = 1e9) {
    Material m;
    m.name = std::move(name);
    m.E11 = E;
    m.E22 = E;
    m.G12 = E / (2.0 * (1.0 + nu));
    m.nu12 = nu;
    m.rho = rho;
    m.strength = {strength, strength, strength, strength, strength};
    return m;
}

} // namespace bladeopt
