#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bladeopt/core/error.hpp"
#include "bladeopt/core/numfmt.hpp"
#include "bladeopt/moo/dominance.hpp"
#include "bladeopt/moo/ga.hpp"
#include "bladeopt/objectives/fitness.hpp"

namespace bladeopt {

// What the sweep needs from one design: the mass entering the fitness
// (penalized), the energy, and the constraint state.
struct DesignObjectives {
    double mass = 0.0;  // [kg]
    double aep = 0.0;   // [kWh/yr]
    std::array<double, 8> penalties{};
    bool feasible = true;
};

using DesignEvaluator = std::function<DesignObjectives(const std::vector<double>&)>;

struct ParetoPoint {
    double alpha = 0.0;
    double mass = 0.0;
    double aep = 0.0;
    double fitness = 0.0;
    std::vector<double> x;
    bool feasible = true;
};

struct AlphaRun {
    double alpha = 0.0;
    GAResult ga;
    ParetoPoint best;
};

struct SweepResult {
    std::vector<AlphaRun> runs;     // in the order optimized, alpha = 0 first
    std::vector<ParetoPoint> front; // non-dominated bests, mass ascending
    double M0 = 1.0, AEP0 = 1.0;
};

// Non-dominated subset under (min mass, max AEP), sorted by mass ascending
// (ties by AEP descending, then alpha).
inline std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& pts) {
    std::vector<std::vector<double>> obj;
    for (const auto& p : pts) obj.push_back({p.mass, p.aep});
    std::vector<ParetoPoint> front;
    for (auto i : nondominated_filter(obj, {Sense::minimize, Sense::maximize})) front.push_back(pts[i]);
    std::stable_sort(front.begin(), front.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
        if (a.mass != b.mass) return a.mass < b.mass;
        if (a.aep != b.aep) return a.aep > b.aep;
        return a.alpha < b.alpha;
    });
    return front;
}

namespace detail {

inline std::uint64_t alpha_seed(std::uint64_t seed, std::size_t k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k), 0x51u};
    std::uint32_t w[2];
    seq.generate(w, w + 2);
    return (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
}

} // namespace detail

// Runs alpha = 0 first to fix the reference mass and energy from its best
// design, then every other alpha, and filters the bests into a front.
// Errors are rethrown with the failing alpha in the message.
inline SweepResult pareto_sweep(std::vector<double> alphas, const DesignEvaluator& eval, const Bounds& bounds,
                                const LinearConstraints& cons, const GAConfig& cfg,
                                const std::function<void(const AlphaRun&)>& on_run = {}) {
    BLADEOPT_REQUIRE(!alphas.empty(), ConfigError, "pareto: no alpha values");
    for (double a : alphas) BLADEOPT_REQUIRE(a >= 0.0 && a <= 1.0, ConfigError, "pareto: alpha outside [0, 1]");
    auto zero = std::find(alphas.begin(), alphas.end(), 0.0);
    BLADEOPT_REQUIRE(zero != alphas.end(), ConfigError, "pareto: alpha = 0 (the reference run) is required");
    alphas.erase(zero);
    alphas.insert(alphas.begin(), 0.0);

    SweepResult out;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        const double alpha = alphas[k];
        const FitnessConfig fc{alpha, out.M0, out.AEP0};
        GAConfig c = cfg;
        c.seed = detail::alpha_seed(cfg.seed, k);
        auto fn = [&](const std::vector<double>& x) {
            const auto d = eval(x);
            return Evaluation{scalarized_fitness(d.mass, d.aep, fc), {d.mass, d.aep, d.penalties, d.feasible}};
        };
        AlphaRun run;
        run.alpha = alpha;
        auto annotate = [&](const std::exception& e) { return "alpha = " + fmt_double(alpha) + ": " + e.what(); };
        try {
            run.ga = ga_minimize(fn, bounds, cons, c);
        } catch (const ConfigError& e) {
            throw ConfigError(annotate(e));
        } catch (const DomainError& e) {
            throw DomainError(annotate(e));
        } catch (const std::exception& e) {
            throw NumericalError(annotate(e));
        }
        const auto& b = run.ga.best;
        run.best = {alpha, b.aux.mass, b.aux.aep, b.fitness, b.x, b.aux.feasible};
        if (k == 0) {
            BLADEOPT_REQUIRE(run.best.mass > 0.0 && run.best.aep > 0.0, NumericalError,
                             "pareto: reference design has non-positive mass or energy");
            out.M0 = run.best.mass;
            out.AEP0 = run.best.aep;
        }
        if (on_run) on_run(run);
        out.runs.push_back(std::move(run));
    }

    // Report every best on the final reference scale.
    std::vector<ParetoPoint> bests;
    for (auto& r : out.runs) {
        r.best.fitness = scalarized_fitness(r.best.mass, r.best.aep, {r.alpha, out.M0, out.AEP0});
        bests.push_back(r.best);
    }
    out.front = pareto_front(bests);
    return out;
}

} // namespace bladeopt
