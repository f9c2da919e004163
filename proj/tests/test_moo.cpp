#include <gtest/gtest.h>

#include <mutex>
#include <numeric>
#include <random>

#include "bladeopt/moo/dominance.hpp"
#include "bladeopt/moo/ga.hpp"
#include "bladeopt/moo/pareto.hpp"
#include "bladeopt/io/pipeline.hpp"

using namespace bladeopt;

namespace {

const std::vector<Sense> kMinMin{Sense::minimize, Sense::minimize};

std::vector<std::size_t> brute_force(const std::vector<std::vector<double>>& pts, const std::vector<Sense>& s) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size() && !dominated; ++j) dominated = j != i && dominates(pts[j], pts[i], s);
        if (!dominated) out.push_back(i);
    }
    return out;
}

std::vector<std::vector<double>> random_points(std::uint64_t seed, std::size_t n, std::size_t k, bool coarse) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> pts(n, std::vector<double>(k));
    for (auto& p : pts)
        for (auto& v : p) v = coarse ? std::round(10.0 * u(rng)) : u(rng);
    return pts;
}

double sphere(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

Bounds box(std::size_t n, double lo, double hi) { return {std::vector<double>(n, lo), std::vector<double>(n, hi)}; }

} // namespace

TEST(Dominance, Basics) {
    EXPECT_TRUE(dominates({1, 1}, {2, 2}, kMinMin));
    EXPECT_FALSE(dominates({1, 2}, {2, 1}, kMinMin));
    EXPECT_FALSE(dominates({2, 1}, {1, 2}, kMinMin));
    EXPECT_FALSE(dominates({1, 1}, {1, 1}, kMinMin));
    EXPECT_TRUE(dominates({1, 3}, {2, 2}, {Sense::minimize, Sense::maximize}));
    EXPECT_THROW(dominates({1}, {1, 2}, kMinMin), DomainError);
}

TEST(Dominance, OrderProperties) {
    const std::vector<Sense> s{Sense::minimize, Sense::maximize, Sense::minimize};
    const auto pts = random_points(1, 60, 3, true);
    for (const auto& u : pts) {
        EXPECT_FALSE(dominates(u, u, s));
        for (const auto& v : pts) {
            if (dominates(u, v, s)) EXPECT_FALSE(dominates(v, u, s));
            for (const auto& w : pts)
                if (dominates(u, v, s) && dominates(v, w, s)) EXPECT_TRUE(dominates(u, w, s));
        }
    }
}

TEST(Filter, HandExamples) {
    EXPECT_EQ(nondominated_filter({{1, 1}}, kMinMin), std::vector<std::size_t>{0});
    EXPECT_EQ(nondominated_filter({{1, 3}, {2, 2}, {3, 1}, {2, 3}}, kMinMin), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(nondominated_filter({{1, 1}, {1, 1}}, kMinMin), (std::vector<std::size_t>{0, 1}));
    EXPECT_TRUE(nondominated_filter({}, kMinMin).empty());
}

TEST(Filter, MatchesBruteForce) {
    const std::vector<Sense> s{Sense::minimize, Sense::maximize, Sense::minimize};
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        for (bool coarse : {false, true}) {
            const auto pts = random_points(seed, 1000, 3, coarse);
            ASSERT_EQ(nondominated_filter(pts, s), brute_force(pts, s)) << seed;
        }
}

TEST(Filter, IdempotentAndScaleInvariant) {
    const std::vector<Sense> s{Sense::minimize, Sense::maximize, Sense::minimize};
    auto pts = random_points(42, 300, 3, false);
    const auto keep = nondominated_filter(pts, s);
    std::vector<std::vector<double>> front;
    for (auto i : keep) front.push_back(pts[i]);
    std::vector<std::size_t> all(front.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    EXPECT_EQ(nondominated_filter(front, s), all);
    for (auto& p : pts) p[1] = 3.0 * p[1] + 7.0;
    EXPECT_EQ(nondominated_filter(pts, s), keep);
}

TEST(GA, SphereConverges) {
    const auto r = ga_minimize(sphere, box(10, -5.0, 5.0), {}, GAConfig{});
    EXPECT_LT(r.best.fitness, 1e-3);
    EXPECT_LE(r.history.size(), 100u);
}

TEST(GA, Deterministic) {
    GAConfig c;
    c.num_gens = 30;
    c.seed = 17;
    const auto a = ga_minimize(sphere, box(10, -5.0, 5.0), {}, c);
    const auto b = ga_minimize(sphere, box(10, -5.0, 5.0), {}, c);
    ASSERT_EQ(a.history.size(), b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        EXPECT_EQ(a.history[i].best_fitness, b.history[i].best_fitness);
        EXPECT_EQ(a.history[i].mean_fitness, b.history[i].mean_fitness);
        EXPECT_EQ(a.history[i].best_x, b.history[i].best_x);
    }
    EXPECT_EQ(a.best.x, b.best.x);
    c.seed = 18;
    EXPECT_NE(ga_minimize(sphere, box(10, -5.0, 5.0), {}, c).best.x, a.best.x);
}

TEST(GA, ThreadCountDoesNotChangeResult) {
    GAConfig c;
    c.num_gens = 15;
    c.pop_size = 40;
    const auto a = ga_minimize(sphere, box(6, -5.0, 5.0), {}, c);
    c.threads = 4;
    const auto b = ga_minimize(sphere, box(6, -5.0, 5.0), {}, c);
    EXPECT_EQ(a.best.x, b.best.x);
    EXPECT_EQ(a.history.back().mean_fitness, b.history.back().mean_fitness);
}

TEST(GA, ElitismKeepsBestNonIncreasing) {
    GAConfig c;
    c.num_gens = 40;
    c.pop_size = 20;
    c.stall_gens = 100;
    const auto r = ga_minimize([](const std::vector<double>& x) { return sphere(x) + std::sin(20.0 * x[0]); },
                               box(5, -3.0, 3.0), {}, c);
    for (std::size_t i = 1; i < r.history.size(); ++i)
        EXPECT_LE(r.history[i].best_fitness, r.history[i - 1].best_fitness);
}

TEST(GA, ConstantFitnessKeepsInitialIndividual) {
    GAConfig c;
    c.num_gens = 10;
    c.pop_size = 12;
    std::vector<std::vector<double>> seen;
    std::mutex mu;
    const auto r = ga_minimize(
        [&](const std::vector<double>& x) {
            std::lock_guard lock(mu);
            seen.push_back(x);
            return 1.0;
        },
        box(3, 0.0, 1.0), {}, c);
    for (const auto& h : r.history) EXPECT_EQ(h.best_fitness, 1.0);
    ASSERT_GE(seen.size(), 12u);
    const std::vector<std::vector<double>> initial(seen.begin(), seen.begin() + 12);
    EXPECT_NE(std::find(initial.begin(), initial.end(), r.best.x), initial.end());
}

TEST(GA, RespectsBoundsAndTaper) {
    // x0 >= x1 >= x2 >= x3 encoded as x_{k+1} - x_k <= 0.
    const std::size_t n = 4;
    LinearConstraints cons;
    cons.A = Eigen::MatrixXd::Zero(3, n);
    cons.b = Eigen::VectorXd::Zero(3);
    for (Eigen::Index k = 0; k < 3; ++k) {
        cons.A(k, k) = -1.0;
        cons.A(k, k + 1) = 1.0;
    }
    const auto b = box(n, 0.0, 1.0);
    std::mutex mu;
    bool ok = true;
    GAConfig c;
    c.num_gens = 30;
    c.pop_size = 30;
    const auto r = ga_minimize(
        [&](const std::vector<double>& x) {
            Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(n));
            std::lock_guard lock(mu);
            for (std::size_t j = 0; j < n; ++j) ok = ok && x[j] >= b.lower[j] && x[j] <= b.upper[j];
            ok = ok && ((cons.A * v - cons.b).array() <= 1e-12).all();
            // Rewards a reversed taper the constraints forbid.
            return -x[3] + 0.1 * x[0];
        },
        b, cons, c);
    EXPECT_TRUE(ok);
    EXPECT_LE(r.best.x[3], r.best.x[0] + 1e-12);
}

TEST(GA, InfeasibleConstraintsRejected) {
    LinearConstraints cons;
    cons.A = Eigen::MatrixXd::Ones(1, 2);
    cons.b = Eigen::VectorXd::Constant(1, -1.0);
    EXPECT_THROW(ga_minimize(sphere, box(2, 0.0, 1.0), cons, GAConfig{}), ConfigError);
}

TEST(GA, ConfigValidation) {
    GAConfig c;
    c.pop_size = 1;
    EXPECT_THROW(ga_minimize(sphere, box(2, 0.0, 1.0), {}, c), ConfigError);
}

TEST(Pareto, FrontSortedAndNonDominated) {
    std::vector<ParetoPoint> pts{{0.0, 200.0, 10.0, 0, {}, true}, {0.5, 120.0, 8.0, 0, {}, true},
                                 {0.7, 150.0, 7.0, 0, {}, true}, {1.0, 90.0, 5.0, 0, {}, true}};
    const auto f = pareto_front(pts);
    ASSERT_EQ(f.size(), 3u);
    EXPECT_EQ(f[0].mass, 90.0);
    EXPECT_EQ(f[2].alpha, 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) {
        EXPECT_GT(f[i].mass, f[i - 1].mass);
        EXPECT_GE(f[i].aep, f[i - 1].aep);
    }
}

TEST(Pareto, ToySweep) {
    // Mass grows and energy saturates with a single "thickness" knob.
    const DesignEvaluator eval = [](const std::vector<double>& x) {
        DesignObjectives o;
        o.mass = 10.0 + 100.0 * x[0] + x[1] * x[1];
        o.aep = 1000.0 * (1.0 - std::exp(-3.0 * x[0]));
        return o;
    };
    GAConfig c;
    c.num_gens = 30;
    c.pop_size = 30;
    const auto r = pareto_sweep({1.0, 0.5, 0.0}, eval, box(2, 0.0, 1.0), {}, c);
    ASSERT_EQ(r.runs.size(), 3u);
    EXPECT_EQ(r.runs[0].alpha, 0.0);
    EXPECT_EQ(r.M0, r.runs[0].best.mass);
    EXPECT_LE(r.front.size(), 3u);
    double max_aep = 0.0;
    for (const auto& p : r.front) max_aep = std::max(max_aep, p.aep);
    EXPECT_EQ(r.runs[0].best.aep, max_aep);
    for (std::size_t i = 1; i < r.front.size(); ++i) EXPECT_GE(r.front[i].aep, r.front[i - 1].aep);
    EXPECT_THROW(pareto_sweep({0.5, 1.0}, eval, box(2, 0.0, 1.0), {}, c), ConfigError);
}

TEST(Taper, ConstraintRowsMatchLayout) {
    const DesignLayout layout;
    const auto cons = taper_constraints(layout);
    EXPECT_EQ(cons.A.cols(), static_cast<Eigen::Index>(layout.vector_size()));
    EXPECT_EQ(cons.A.rows(), 5 * 3 + 2);
    EXPECT_TRUE((cons.A.rowwise().sum().array() == 0.0).all());
    // A tapered design is admissible, a reversed one is not.
    auto x = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(layout.vector_size()), 1.0, 0.0).eval();
    EXPECT_TRUE(((cons.A * x - cons.b).array() <= 0.0).all());
    x.reverseInPlace();
    EXPECT_FALSE(((cons.A * x - cons.b).array() <= 0.0).all());
}
