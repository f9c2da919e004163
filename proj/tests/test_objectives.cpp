#include <gtest/gtest.h>

#include <random>

#include "bladeopt/io/inputs.hpp"
#include "bladeopt/io/pipeline.hpp"
#include "bladeopt/objectives/cost.hpp"
#include "bladeopt/objectives/fitness.hpp"
#include "bladeopt/objectives/penalty.hpp"
#include "support.hpp"

using namespace bladeopt;

namespace {

PenaltySet with(std::initializer_list<std::pair<std::size_t, double>> set, double rest = 0.5) {
    PenaltySet s;
    s.p.fill(rest);
    for (auto [i, v] : set) s.p[i] = v;
    return s;
}

ResponseSummary half_limits(const PenaltyLimits& lim) {
    ResponseSummary r;
    r.lamina.r11_tension = r.lamina.r11_compression = r.lamina.r22_tension = 0.5;
    r.lamina.r22_compression = r.lamina.r12_shear = 0.5;
    r.buckling_max = 0.5;
    r.tip_deflection = 0.5 * lim.max_tip_deflection;
    r.frequencies = {lim.omega_rotor + 2.0 * lim.freq_gap_allow, lim.omega_rotor - 2.0 * lim.freq_gap_allow};
    return r;
}

struct Example {
    RunConfig config;
    std::unique_ptr<BladeEvaluator> eval;
    std::vector<double> x;
};

const Example& example() {
    static const Example e = [] {
        auto c = test::example_config();
        auto ev = make_evaluator(c);
        auto x = io::parse_design_file(c.opt.initx_file);
        return Example{std::move(c), std::move(ev), std::move(x)};
    }();
    return e;
}

} // namespace

TEST(Penalty, RatiosAtHalfLimits) {
    const PenaltyLimits lim{1.0, 0.84, 8.4};
    const auto s = penalty_factors(half_limits(lim), lim);
    for (double p : s.p) EXPECT_DOUBLE_EQ(p, 0.5);
    EXPECT_TRUE(s.feasible());
}

TEST(Penalty, TensionRatio) {
    Material m = isotropic_material("m", 1e10, 0.3, 1000.0, 1e8);
    LaminaExtremes ex;
    ex.add({2e8, 0.0, 0.0, 0, 0, 0}, m);
    ex.add({-5e7, -3e7, 1e7, 0, 0, 0}, m);
    EXPECT_DOUBLE_EQ(ex.r11_tension, 2.0);
    EXPECT_DOUBLE_EQ(ex.r11_compression, 0.5);
    EXPECT_DOUBLE_EQ(ex.r22_compression, 0.3);
    EXPECT_DOUBLE_EQ(ex.r22_tension, 0.0);
    EXPECT_DOUBLE_EQ(ex.r12_shear, 0.1);
    const PenaltyLimits lim{1.0, 0.84, 8.4};
    auto r = half_limits(lim);
    r.lamina = ex;
    EXPECT_DOUBLE_EQ(penalty_factors(r, lim)[0], 2.0);
}

TEST(Penalty, ResonanceIsCapped) {
    const PenaltyLimits lim{1.0, 0.84, 8.4};
    auto r = half_limits(lim);
    r.frequencies = {8.4, 30.0};
    EXPECT_EQ(penalty_factors(r, lim)[7], kFrequencyPenaltyCap);
    r.frequencies.clear();
    EXPECT_THROW(penalty_factors(r, lim), DomainError);
}

TEST(PenalizedMass, Identities) {
    const double m = 123.4;
    EXPECT_EQ(penalized_mass(m, with({})), m);
    EXPECT_EQ(penalized_mass(m, with({}, 1.0)), m);
    EXPECT_EQ(penalized_mass(m, with({{6, 2.0}})), 4.0 * m);
    EXPECT_EQ(penalized_mass(m, with({{0, 2.0}, {4, 3.0}})), 36.0 * m);
}

TEST(PenalizedMass, RandomizedProperties) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> p(0.0, 3.0), bump(0.0, 1.0), mass(1.0, 1e3);
    std::uniform_int_distribution<std::size_t> idx(0, 7);
    for (int t = 0; t < 10000; ++t) {
        PenaltySet s;
        for (auto& v : s.p) v = p(rng);
        const double m = mass(rng);
        const double f = penalized_mass(m, s);
        ASSERT_GE(f, m);
        ASSERT_EQ(f == m, s.feasible());
        auto up = s;
        up.p[idx(rng)] += bump(rng);
        ASSERT_GE(penalized_mass(m, up), f);
    }
}

TEST(Fitness, Endpoints) {
    const double m = 150.0, aep = 2.2e5;
    const FitnessConfig base{0.0, 120.0, 2.3e5};
    EXPECT_EQ(scalarized_fitness(m, aep, {1.0, base.M0, base.AEP0}), m / base.M0);
    EXPECT_EQ(scalarized_fitness(m, aep, base), -aep / base.AEP0);
    EXPECT_EQ(scalarized_fitness(base.M0, base.AEP0, {0.5, base.M0, base.AEP0}), 0.0);
}

TEST(Fitness, AffineInAlpha) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double M0 = 140.0, A0 = 2.3e5;
    for (int t = 0; t < 1000; ++t) {
        const double m = 50.0 + 200.0 * u(rng), aep = 1e5 + 2e5 * u(rng), a = 0.01 + 0.98 * u(rng), h = 1e-3;
        const double f = scalarized_fitness(m, aep, {a, M0, A0});
        const double lo = scalarized_fitness(m, aep, {a - h, M0, A0});
        const double hi = scalarized_fitness(m, aep, {a + h, M0, A0});
        ASSERT_NEAR((hi - lo) / (2.0 * h), m / M0 + aep / A0, 1e-9);
        ASSERT_NEAR(hi - 2.0 * f + lo, 0.0, 1e-12);
    }
}

TEST(Fitness, EqualMassLowerFitnessMeansMoreEnergy) {
    const FitnessConfig c{0.3, 100.0, 2e5};
    EXPECT_LT(scalarized_fitness(100.0, 2.1e5, c), scalarized_fitness(100.0, 2.0e5, c));
}

TEST(Fitness, RejectsBadConfig) {
    EXPECT_THROW(scalarized_fitness(1.0, 1.0, {1.5, 1.0, 1.0}), DomainError);
    EXPECT_THROW(scalarized_fitness(1.0, 1.0, {0.5, 0.0, 1.0}), DomainError);
}

TEST(WeightedSum, Arithmetic) {
    EXPECT_EQ(weighted_sum({4.5}, {1.0}, {Sense::minimize}), 4.5);
    EXPECT_EQ(weighted_sum({4.5}, {1.0}, {Sense::maximize}), -4.5);
    EXPECT_EQ(weighted_sum({2.0, 3.0}, {1.0, 2.0}, {Sense::minimize, Sense::minimize}), 8.0);
    EXPECT_THROW(weighted_sum({1.0}, {0.0}, {Sense::minimize}), DomainError);
    EXPECT_THROW(weighted_sum({1.0, 2.0}, {1.0}, {Sense::minimize}), DomainError);
}

TEST(WeightedSum, ScaleInvariantArgmin) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    const std::vector<Sense> senses{Sense::minimize, Sense::maximize, Sense::minimize};
    const std::vector<double> w{0.3, 1.2, 0.7};
    std::vector<std::vector<double>> cand(50, std::vector<double>(3));
    for (auto& c : cand)
        for (auto& v : c) v = u(rng);
    auto argmin = [&](double scale) {
        std::vector<double> ws;
        for (double x : w) ws.push_back(scale * x);
        std::size_t best = 0;
        for (std::size_t i = 1; i < cand.size(); ++i)
            if (weighted_sum(cand[i], ws, senses) < weighted_sum(cand[best], ws, senses)) best = i;
        return best;
    };
    EXPECT_EQ(argmin(1.0), argmin(37.5));
    EXPECT_NEAR(weighted_sum(cand[0], {0.6, 2.4, 1.4}, senses), 2.0 * weighted_sum(cand[0], w, senses), 1e-12);
}

TEST(Cost, ComponentScaling) {
    EXPECT_DOUBLE_EQ(component_cost({1000.0, 0.2, 2.0, 1.0}), 1800.0);
    EXPECT_EQ(component_cost({1000.0, 1.0, 7.0, 1.0}), 1000.0);
    EXPECT_EQ(component_cost({1000.0, 0.2, 3.0, 3.0}), 1000.0);
    EXPECT_THROW(component_cost({1000.0, 0.2, 1.0, 0.0}), DomainError);
}

TEST(Cost, CostOfEnergy) {
    EXPECT_DOUBLE_EQ(cost_of_energy(1e6, 2e5, 0.1, 0.01, 4e6), 0.04);
    EXPECT_EQ(cost_of_energy(0.0, 0.0, 0.1, 0.01, 4e6), 0.01);
    const double a = cost_of_energy(1e6, 2e5, 0.1, 0.0, 4e6);
    EXPECT_DOUBLE_EQ(cost_of_energy(1e6, 2e5, 0.1, 0.0, 8e6), 0.5 * a);
    EXPECT_THROW(cost_of_energy(1.0, 1.0, 0.1, 0.0, 0.0), DomainError);
}

TEST(Evaluator, DesignLoadCaseIsPeakRootFlapMoment) {
    const auto& e = example();
    double best = -1.0, v_best = 0.0;
    for (const auto& p : e.eval->rigid_curve())
        if (p.root_flap_moment > best) {
            best = p.root_flap_moment;
            v_best = p.wind_speed;
        }
    EXPECT_EQ(e.eval->design_wind_speed(), v_best);
}

TEST(Evaluator, ReportIsConsistent) {
    const auto& e = example();
    const auto r = e.eval->evaluate(e.x);
    EXPECT_GT(r.mass, 0.0);
    EXPECT_EQ(r.penalized_mass, penalized_mass(r.mass, r.penalties));
    EXPECT_GT(r.aep, 0.0);
    EXPECT_LT(test::rel_err(r.aep, e.eval->rigid_aep()), 0.5);
    EXPECT_EQ(r.modes.flap.size(), 3u);
    EXPECT_EQ(r.penalties[6], std::abs(r.response.beam.tip_deflection) / e.config.tip_deflection_limit());
    const auto o = e.eval->objectives(e.x);
    EXPECT_EQ(o.mass, r.penalized_mass);
    EXPECT_EQ(o.aep, r.aep);
    EXPECT_EQ(o.feasible, r.feasible());
}

TEST(Evaluator, RigidSettingReproducesRigidEnergy) {
    const auto& e = example();
    auto s = e.eval->settings();
    s.aeroelastic = false;
    const BladeEvaluator rigid(e.eval->rotor(), MaterialSet::from_named(io::parse_materials(e.config.files.materials)),
                               e.eval->layout(), s);
    EXPECT_EQ(rigid.evaluate(e.x).aep, e.eval->rigid_aep());
}

TEST(Evaluator, StifferBladeDeflectsLess) {
    const auto& e = example();
    auto thick = e.x;
    for (std::size_t i = 2; i < thick.size(); ++i) thick[i] *= 2.0;
    const auto a = e.eval->evaluate(e.x), b = e.eval->evaluate(thick);
    EXPECT_GT(b.mass, a.mass);
    EXPECT_LT(std::abs(b.response.beam.tip_deflection), std::abs(a.response.beam.tip_deflection));
}

TEST(CpMass, CompositionAndZeroRotation) {
    const auto& e = example();
    const auto& s = e.eval->settings();
    const auto o = cp_mass_objectives(e.eval->rotor(), s.op, s.env, s.bem, 42.0);
    OperatingPoint op = s.op;
    op.wind_speed = 9.0;
    EXPECT_EQ(o[0], rotor_performance(e.eval->rotor(), op, s.env, s.bem).cp);
    EXPECT_EQ(o[1], 42.0);
    op.rotor_speed_rpm = 0.0;
    EXPECT_EQ(cp_mass_objectives(e.eval->rotor(), op, s.env, s.bem, 0.0)[0], 0.0);
}
