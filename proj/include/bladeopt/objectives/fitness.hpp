#pragma once

#include <cstddef>
#include <vector>

#include "bladeopt/core/error.hpp"

namespace bladeopt {

enum class Sense { minimize, maximize };

struct FitnessConfig {
    double alpha = 0.5;
    double M0 = 1.0;    // reference mass [kg]
    double AEP0 = 1.0;  // reference energy [kWh/yr]

    void validate() const {
        BLADEOPT_REQUIRE(alpha >= 0.0 && alpha <= 1.0, DomainError, "fitness: alpha must lie in [0, 1]");
        BLADEOPT_REQUIRE(M0 > 0.0 && AEP0 > 0.0, DomainError, "fitness: reference mass and energy must be > 0");
    }
};

// alpha M/M0 + (alpha - 1) AEP/AEP0; smaller is better.
inline double scalarized_fitness(double mass, double aep, const FitnessConfig& c) {
    c.validate();
    return c.alpha * (mass / c.M0) + (c.alpha - 1.0) * (aep / c.AEP0);
}

// sum w_i s_i f_i with s = +1 for minimized and -1 for maximized objectives.
inline double weighted_sum(const std::vector<double>& values, const std::vector<double>& weights,
                           const std::vector<Sense>& senses) {
    BLADEOPT_REQUIRE(values.size() == weights.size() && values.size() == senses.size(), DomainError,
                     "weighted_sum: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        BLADEOPT_REQUIRE(weights[i] > 0.0, DomainError, "weighted_sum: weights must be positive");
        s += weights[i] * (senses[i] == Sense::minimize ? 1.0 : -1.0) * values[i];
    }
    return s;
}

} // namespace bladeopt
