#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "bladeopt/core/error.hpp"
#include "bladeopt/core/parallel.hpp"

namespace bladeopt {

struct GAConfig {
    int num_gens = 100;
    int pop_size = 100;
    int elite_count = 1;
    double cross_frac = 0.5;
    double ga_tol = 1e-6;
    std::uint64_t seed = 0;
    int stall_gens = 50;
    double mutation_start = 0.10;  // sigma as a fraction of each variable's range
    double mutation_end = 0.01;
    double mutation_rate = 0.0;    // per-gene probability; 0 = 1/n
    unsigned threads = 1;          // 0 = hardware concurrency

    void validate() const {
        BLADEOPT_REQUIRE(num_gens >= 1, ConfigError, "GA: num_gens must be >= 1");
        BLADEOPT_REQUIRE(pop_size >= 2, ConfigError, "GA: pop_size must be >= 2");
        BLADEOPT_REQUIRE(elite_count >= 0 && elite_count < pop_size, ConfigError,
                         "GA: elite_count must lie in [0, pop_size)");
        BLADEOPT_REQUIRE(cross_frac >= 0.0 && cross_frac <= 1.0, ConfigError, "GA: cross_frac must lie in [0, 1]");
        BLADEOPT_REQUIRE(ga_tol >= 0.0, ConfigError, "GA: ga_tol must be >= 0");
        BLADEOPT_REQUIRE(stall_gens >= 1, ConfigError, "GA: stall_gens must be >= 1");
        BLADEOPT_REQUIRE(mutation_start >= 0.0 && mutation_end >= 0.0, ConfigError,
                         "GA: mutation scales must be >= 0");
        BLADEOPT_REQUIRE(mutation_rate >= 0.0 && mutation_rate <= 1.0, ConfigError,
                         "GA: mutation_rate must lie in [0, 1]");
    }

    bool operator==(const GAConfig&) const = default;
};

struct Bounds {
    std::vector<double> lower, upper;
};

// A x <= b. Empty when A has no rows.
struct LinearConstraints {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
};

// Extra per-evaluation data carried for reporting.
struct EvaluationAux {
    double mass = std::numeric_limits<double>::quiet_NaN();
    double aep = std::numeric_limits<double>::quiet_NaN();
    std::array<double, 8> penalties{};
    bool feasible = true;
};

struct Evaluation {
    double fitness = 0.0;
    EvaluationAux aux;
};

struct Individual {
    std::vector<double> x;
    double fitness = std::numeric_limits<double>::infinity();
    EvaluationAux aux;
};

struct GenerationStats {
    int gen = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    std::vector<double> best_x;
};

struct GAResult {
    Individual best;
    std::vector<GenerationStats> history;
    long evaluations = 0;
};

// Makes candidates satisfy the bounds and A x <= b.
//
// Rows of the form x_j - x_i <= 0 (taper chains) are enforced exactly by a
// forward cumulative minimum, so inboard values are never lowered. Any other
// rows are handled by cyclic projection. The result is only trusted after
// feasible() confirms it.
class Repair {
public:
    Repair(Bounds bounds, LinearConstraints cons, double tol = 1e-12)
        : bounds_(std::move(bounds)), cons_(std::move(cons)), tol_(tol) {
        const auto n = bounds_.lower.size();
        BLADEOPT_REQUIRE(n > 0 && bounds_.upper.size() == n, ConfigError, "GA: bounds are empty or mismatched");
        for (std::size_t j = 0; j < n; ++j)
            BLADEOPT_REQUIRE(std::isfinite(bounds_.lower[j]) && std::isfinite(bounds_.upper[j]) &&
                                 bounds_.lower[j] <= bounds_.upper[j],
                             ConfigError, "GA: bound " + std::to_string(j) + " is not a finite interval");
        if (cons_.A.rows() == 0) return;
        BLADEOPT_REQUIRE(cons_.A.cols() == static_cast<Eigen::Index>(n) && cons_.b.size() == cons_.A.rows(),
                         ConfigError, "GA: constraint matrix does not match the bounds");
        for (Eigen::Index r = 0; r < cons_.A.rows(); ++r) {
            int plus = -1, minus = -1, other = 0;
            for (Eigen::Index c = 0; c < cons_.A.cols(); ++c) {
                const double a = cons_.A(r, c);
                if (a == 1.0 && plus < 0) plus = static_cast<int>(c);
                else if (a == -1.0 && minus < 0) minus = static_cast<int>(c);
                else if (a != 0.0) ++other;
            }
            if (other == 0 && plus >= 0 && minus >= 0 && cons_.b(r) == 0.0)
                chain_.push_back({minus, plus});
            else
                general_.push_back(r);
        }
    }

    const Bounds& bounds() const { return bounds_; }
    std::size_t size() const { return bounds_.lower.size(); }

    void operator()(std::vector<double>& x) const {
        clamp(x);
        for (int sweep = 0; sweep < 200; ++sweep) {
            bool changed = false;
            for (int pass = 0; pass < static_cast<int>(chain_.size()) + 1; ++pass) {
                bool moved = false;
                for (auto [i, j] : chain_)
                    if (x[static_cast<std::size_t>(j)] > x[static_cast<std::size_t>(i)]) {
                        x[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(i)];
                        moved = true;
                    }
                if (!moved) break;
                changed = true;
            }
            for (Eigen::Index r : general_) {
                const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
                const double viol = cons_.A.row(r).dot(xv) - cons_.b(r);
                const double nn = cons_.A.row(r).squaredNorm();
                if (viol > 0.0 && nn > 0.0) {
                    for (std::size_t c = 0; c < x.size(); ++c)
                        x[c] -= viol / nn * cons_.A(r, static_cast<Eigen::Index>(c));
                    changed = true;
                }
            }
            clamp(x);
            if (!changed || feasible(x)) break;
        }
    }

    bool feasible(const std::vector<double>& x) const {
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!(x[j] >= bounds_.lower[j] && x[j] <= bounds_.upper[j])) return false;
        if (cons_.A.rows() == 0) return true;
        const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
        return ((cons_.A * xv - cons_.b).array() <= tol_).all();
    }

private:
    void clamp(std::vector<double>& x) const {
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], bounds_.lower[j], bounds_.upper[j]);
    }

    Bounds bounds_;
    LinearConstraints cons_;
    double tol_;
    std::vector<std::pair<int, int>> chain_;  // (i, j): x_j <= x_i
    std::vector<Eigen::Index> general_;
};

namespace detail {

// Independent stream per (seed, generation, slot): results do not depend on
// evaluation order or thread count.
inline std::mt19937_64 stream(std::uint64_t seed, int gen, int slot) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(gen), static_cast<std::uint32_t>(slot)};
    return std::mt19937_64(seq);
}

template <class Fn>
Evaluation evaluate_one(Fn& fn, const std::vector<double>& x) {
    using R = std::invoke_result_t<Fn&, const std::vector<double>&>;
    Evaluation e;
    if constexpr (std::is_convertible_v<R, double>) {
        e.fitness = static_cast<double>(fn(x));
    } else {
        e = fn(x);
    }
    BLADEOPT_REQUIRE(std::isfinite(e.fitness), NumericalError, "GA: fitness is not finite");
    return e;
}

} // namespace detail

// Generational real-coded GA minimizing fn over the repaired feasible set.
// fn maps a design vector to a double or an Evaluation; it may be called
// concurrently when cfg.threads != 1.
template <class Fn>
GAResult ga_minimize(Fn&& fn, const Bounds& bounds, const LinearConstraints& cons, const GAConfig& cfg) {
    cfg.validate();
    const Repair repair(bounds, cons);
    const std::size_t n = repair.size();
    const auto pop_n = static_cast<std::size_t>(cfg.pop_size);

    {
        std::vector<double> probe(n);
        for (std::size_t j = 0; j < n; ++j) probe[j] = 0.5 * (bounds.lower[j] + bounds.upper[j]);
        repair(probe);
        std::vector<double> low = bounds.lower;
        repair(low);
        BLADEOPT_REQUIRE(repair.feasible(probe) || repair.feasible(low), ConfigError,
                         "GA: bounds and linear constraints admit no feasible point");
    }

    std::vector<double> range(n);
    for (std::size_t j = 0; j < n; ++j) range[j] = bounds.upper[j] - bounds.lower[j];

    GAResult res;
    std::vector<Individual> pop(pop_n);
    auto evaluate = [&](std::vector<Individual>& group, std::size_t from) {
        parallel_for(
            group.size() - from,
            [&](std::size_t k) {
                auto& ind = group[from + k];
                auto e = detail::evaluate_one(fn, ind.x);
                ind.fitness = e.fitness;
                ind.aux = e.aux;
            },
            cfg.threads);
        res.evaluations += static_cast<long>(group.size() - from);
    };

    // Initial population: uniform in the box, then repaired. An individual
    // that cannot be repaired is resampled a few times before falling back
    // to the repaired box midpoint.
    for (std::size_t i = 0; i < pop_n; ++i) {
        auto rng = detail::stream(cfg.seed, 0, static_cast<int>(i));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        auto& x = pop[i].x;
        for (int attempt = 0; attempt < 20; ++attempt) {
            x.assign(n, 0.0);
            for (std::size_t j = 0; j < n; ++j) x[j] = bounds.lower[j] + u(rng) * range[j];
            repair(x);
            if (repair.feasible(x)) break;
        }
        if (!repair.feasible(x)) {
            for (std::size_t j = 0; j < n; ++j) x[j] = 0.5 * (bounds.lower[j] + bounds.upper[j]);
            repair(x);
            if (!repair.feasible(x)) {
                x = bounds.lower;
                repair(x);
            }
        }
    }
    evaluate(pop, 0);

    auto rank = [](std::vector<Individual>& p) {
        std::stable_sort(p.begin(), p.end(),
                         [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; });
    };
    auto record = [&](int gen, const std::vector<Individual>& p) {
        double sum = 0.0;
        for (const auto& ind : p) sum += ind.fitness;
        res.history.push_back({gen, p.front().fitness, sum / static_cast<double>(p.size()), p.front().x});
    };
    rank(pop);
    record(0, pop);

    const auto elites = static_cast<std::size_t>(cfg.elite_count);
    const std::size_t n_children = pop_n - elites;
    const auto n_cross = static_cast<std::size_t>(std::lround(cfg.cross_frac * static_cast<double>(n_children)));

    for (int gen = 1; gen < cfg.num_gens; ++gen) {
        const double t = cfg.num_gens > 1 ? static_cast<double>(gen) / static_cast<double>(cfg.num_gens - 1) : 1.0;
        const double sigma = cfg.mutation_start + (cfg.mutation_end - cfg.mutation_start) * t;

        std::vector<Individual> next(pop_n);
        for (std::size_t e = 0; e < elites; ++e) next[e] = pop[e];
        for (std::size_t c = 0; c < n_children; ++c) {
            auto rng = detail::stream(cfg.seed, gen, static_cast<int>(c));
            std::uniform_int_distribution<std::size_t> pick(0, pop_n - 1);
            auto tournament = [&]() -> const Individual& {
                const auto a = pick(rng);
                auto b = pick(rng);
                while (b == a) b = pick(rng);
                return pop[a].fitness <= pop[b].fitness ? pop[a] : pop[b];
            };
            const Individual& p1 = tournament();
            std::vector<double> x = p1.x;
            if (c < n_cross) {
                // BLX-0.5
                const Individual& p2 = tournament();
                std::uniform_real_distribution<double> u(-0.5, 1.5);
                for (std::size_t j = 0; j < n; ++j) x[j] = p1.x[j] + u(rng) * (p2.x[j] - p1.x[j]);
            } else {
                // Each gene mutates independently with probability
                // mutation_rate (default 1/n).
                const double rate = cfg.mutation_rate > 0.0 ? cfg.mutation_rate : 1.0 / static_cast<double>(n);
                std::normal_distribution<double> g(0.0, 1.0);
                std::uniform_real_distribution<double> u(0.0, 1.0);
                for (std::size_t j = 0; j < n; ++j) {
                    const double z = g(rng);
                    if (u(rng) < rate) x[j] += sigma * range[j] * z;
                }
            }
            repair(x);
            if (!repair.feasible(x)) x = p1.x;
            next[elites + c].x = std::move(x);
        }
        evaluate(next, elites);
        rank(next);
        pop = std::move(next);
        record(gen, pop);

        const auto h = res.history.size();
        if (h > static_cast<std::size_t>(cfg.stall_gens)) {
            const double before = res.history[h - 1 - static_cast<std::size_t>(cfg.stall_gens)].best_fitness;
            if (before - res.history.back().best_fitness < cfg.ga_tol) break;
        }
    }
    res.best = pop.front();
    return res;
}

} // namespace bladeopt
