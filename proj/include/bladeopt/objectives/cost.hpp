#pragma once

#include "bladeopt/core/error.hpp"

namespace bladeopt {

// Scaling cost model of one turbine component.
struct CostParams {
    double C_ib = 0.0;  // baseline cost
    double c_i = 0.2;   // fixed fraction of the cost (0.2 for blades)
    double P_i = 1.0;   // design parameter
    double P_ib = 1.0;  // baseline parameter
};

// C_i = C_ib (c_i + (1 - c_i) P_i / P_ib).
inline double component_cost(const CostParams& p) {
    BLADEOPT_REQUIRE(p.P_ib != 0.0, DomainError, "component_cost: baseline parameter must be nonzero");
    BLADEOPT_REQUIRE(p.c_i >= 0.0 && p.c_i <= 1.0, DomainError, "component_cost: cost factor must lie in [0, 1]");
    return p.C_ib * (p.c_i + (1.0 - p.c_i) * (p.P_i / p.P_ib));
}

// COE = FCR (TC + BOS) / AEP + OM, per kWh.
inline double cost_of_energy(double TC, double BOS, double FCR, double OM, double aep) {
    BLADEOPT_REQUIRE(aep > 0.0, DomainError, "cost_of_energy: AEP must be positive");
    return FCR * (TC + BOS) / aep + OM;
}

} // namespace bladeopt
