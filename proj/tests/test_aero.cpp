#include <gtest/gtest.h>

#include <random>

#include "bladeopt/aero/bem.hpp"
#include "bladeopt/aero/energy.hpp"
#include "bladeopt/io/pipeline.hpp"
#include "support.hpp"

using namespace bladeopt;

namespace {

constexpr double kBetz = 16.0 / 27.0;

OperatingPoint at_tsr(double tsr, double v = 8.0, double R = 10.0) {
    OperatingPoint op;
    op.wind_speed = v;
    op.rotor_speed_rpm = tsr * v / R * 60.0 / (2.0 * std::numbers::pi);
    return op;
}

struct Example {
    AeroRotor rotor;
    EvaluationSettings s;
};

const Example& example() {
    static const Example e = [] {
        const auto c = test::example_config();
        return Example{make_rotor(c), evaluation_settings(c)};
    }();
    return e;
}

std::vector<PowerCurvePoint> constant_curve(double p0, double v0 = 3.0, double v1 = 25.0) {
    std::vector<PowerCurvePoint> c;
    for (double v = v0; v <= v1 + 1e-12; v += 1.0) c.push_back({v, p0, 0, 0, 0, 0, true});
    return c;
}

} // namespace

TEST(Prandtl, MatchesIndependentEvaluation) {
    EXPECT_NEAR(prandtl_factor(3, 5.0, 10.0, 0.5, 0.2, true, true), 0.9996651463477977, 1e-14);
    EXPECT_NEAR(prandtl_factor(3, 0.8, 10.0, 0.5, 0.2, true, true), 0.9931376404064999, 1e-14);
    EXPECT_NEAR(prandtl_factor(3, 9.5, 10.0, 0.5, 0.3, true, true), 0.44492358504167834, 1e-14);
}

TEST(Prandtl, Limits) {
    EXPECT_NEAR(prandtl_factor(3, 10.0, 10.0, 0.5, 0.2, true, false), 0.0, 1e-12);
    EXPECT_NEAR(prandtl_factor(3, 0.5, 10.0, 0.5, 0.2, false, true), 0.0, 1e-12);
    EXPECT_EQ(prandtl_factor(3, 0.5, 10.0, 0.5, 0.2, false, false), 1.0);
    // sin(phi) = 0 is guarded.
    EXPECT_TRUE(std::isfinite(prandtl_factor(3, 5.0, 10.0, 0.5, 0.0, true, true)));
}

TEST(Prandtl, BoundedForRandomArguments) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> r(0.5, 10.0), phi(-3.1, 3.1);
    for (int i = 0; i < 10000; ++i) {
        const double F = prandtl_factor(3, r(rng), 10.0, 0.5, phi(rng), true, true);
        ASSERT_GE(F, 0.0);
        ASSERT_LE(F, 1.0);
    }
}

TEST(Buhl, ContinuousWithMomentumTheoryAtTransition) {
    for (double F : {1.0, 0.8, 0.5}) EXPECT_NEAR(buhl_induction(0.96 * F, F), 0.4, 1e-12) << F;
    EXPECT_NEAR(buhl_induction(2.0, 1.0), 1.0, 1e-12);
}

TEST(Annulus, ZeroForcePolarGivesZeroInduction) {
    AirfoilPolar p;
    p.id = "zero";
    p.rows = {{-180.0, 0.0, 0.0, 0.0}, {180.0, 0.0, 0.0, 0.0}};
    const AnnulusInput in{5.0, 0.5, 2.0, &p, 0.0};
    const auto s = solve_annulus(in, {}, at_tsr(6.0), 1.225, {});
    EXPECT_TRUE(s.converged);
    EXPECT_EQ(s.a, 0.0);
    EXPECT_EQ(s.a_prime, 0.0);
    EXPECT_EQ(s.dT_dr, 0.0);
}

TEST(Annulus, DragFreeThrustMatchesMomentum) {
    const auto rotor = test::ideal_rotor();
    BemConfig cfg;
    cfg.adv_brake = false;
    cfg.a_tol = 1e-11;
    for (double tsr : {4.0, 7.0, 9.0}) {
        const auto op = at_tsr(tsr);
        for (std::size_t i = 0; i < rotor.blade.stations.size(); i += 5) {
            const auto& st = rotor.blade.stations[i];
            const AnnulusInput in{st.radius_m, st.chord_m, st.twist_deg, &rotor.polar_at(i), 0.0};
            const auto s = solve_annulus(in, rotor.geometry(), op, 1.225, cfg);
            ASSERT_TRUE(s.converged);
            const double ct = s.dT_dr / (0.5 * 1.225 * op.wind_speed * op.wind_speed * 2.0 * std::numbers::pi * in.r);
            EXPECT_NEAR(ct, 4.0 * s.a * s.F * (1.0 - s.a), 1e-8) << "tsr " << tsr << " r " << in.r;
        }
    }
}

TEST(Annulus, ConvergedResidualBelowTolerance) {
    const auto& e = example();
    for (double v : {3.0, 9.0, 17.0, 25.0}) {
        OperatingPoint op = e.s.op;
        op.wind_speed = v;
        const auto p = rotor_performance(e.rotor, op, e.s.env, e.s.bem);
        for (const auto& a : p.annuli) {
            EXPECT_TRUE(a.converged);
            EXPECT_LT(a.residual, e.s.bem.a_tol);
        }
    }
}

TEST(Annulus, InvalidStationThrows) {
    const auto p = test::drag_free_polar();
    EXPECT_THROW(solve_annulus({5.0, 0.0, 0.0, &p, 0.0}, {}, at_tsr(5.0), 1.225, {}), DomainError);
    EXPECT_THROW(solve_annulus({5.0, 0.5, 0.0, nullptr, 0.0}, {}, at_tsr(5.0), 1.225, {}), DomainError);
}

TEST(Rotor, NoRotationNoPower) {
    const auto& e = example();
    OperatingPoint op = e.s.op;
    op.wind_speed = 8.0;
    op.rotor_speed_rpm = 0.0;
    const auto p = rotor_performance(e.rotor, op, e.s.env, e.s.bem);
    EXPECT_EQ(p.power, 0.0);
    EXPECT_EQ(p.cp, 0.0);
}

TEST(Rotor, LinearInDensity) {
    const auto& e = example();
    OperatingPoint op = e.s.op;
    op.wind_speed = 9.0;
    Environment env = e.s.env;
    const auto p1 = rotor_performance(e.rotor, op, env, e.s.bem);
    env.fluid_density *= 2.0;
    const auto p2 = rotor_performance(e.rotor, op, env, e.s.bem);
    EXPECT_NEAR(p2.power, 2.0 * p1.power, 1e-9 * std::abs(p1.power));
    EXPECT_NEAR(p2.thrust, 2.0 * p1.thrust, 1e-9 * p1.thrust);
    EXPECT_NEAR(p2.cp, p1.cp, 1e-12);
}

TEST(Rotor, LossFactorsOffGiveUnitF) {
    const auto rotor = test::ideal_rotor();
    const auto p = rotor_performance(rotor, at_tsr(7.0), {}, test::loss_free_bem());
    for (const auto& a : p.annuli) EXPECT_EQ(a.F, 1.0);
}

TEST(Rotor, BetzBoundOverTipSpeedRatios) {
    const auto rotor = test::ideal_rotor();
    double best = 0.0;
    for (double tsr = 1.0; tsr <= 15.0 + 1e-9; tsr += 0.25) {
        const auto p = rotor_performance(rotor, at_tsr(tsr), {}, test::loss_free_bem());
        EXPECT_TRUE(p.all_converged()) << tsr;
        EXPECT_LE(p.cp, kBetz + 1e-9) << tsr;
        best = std::max(best, p.cp);
    }
    // The optimum planform gets close to the bound.
    EXPECT_GT(best, 0.5);
}

TEST(Rotor, ExampleBladeConvergesEverywhere) {
    const auto& e = example();
    for (double v = 3.0; v <= 25.0; v += 1.0) {
        OperatingPoint op = e.s.op;
        op.wind_speed = v;
        EXPECT_TRUE(rotor_performance(e.rotor, op, e.s.env, e.s.bem).all_converged()) << v;
    }
}

TEST(Rotor, StallRegulatedCpFallsAtHighWind) {
    const auto& e = example();
    const auto curve = power_curve(e.rotor, e.s.wind_speeds, e.s.op, e.s.env, e.s.bem);
    const auto peak = std::max_element(curve.begin(), curve.end(), [](auto& a, auto& b) { return a.cp < b.cp; });
    ASSERT_NE(peak, curve.end() - 1);
    for (auto it = peak + 1; it != curve.end(); ++it) EXPECT_LT(it->cp, peak->cp);
    EXPECT_LT(curve.back().cp, 0.5 * peak->cp);
}

TEST(PowerCurve, SingleSpeedAndCutIn) {
    const auto& e = example();
    OperatingPoint op = e.s.op;
    op.wind_speed = 11.0;
    const auto ref = rotor_performance(e.rotor, op, e.s.env, e.s.bem);
    const auto one = power_curve(e.rotor, {11.0}, e.s.op, e.s.env, e.s.bem);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].power, ref.power);
    EXPECT_EQ(one[0].thrust, ref.thrust);
    const auto low = power_curve(e.rotor, {2.0, 2.5}, e.s.op, e.s.env, e.s.bem);
    EXPECT_EQ(low[0].power, 0.0);
    EXPECT_EQ(low[1].power, 0.0);
    EXPECT_THROW(power_curve(e.rotor, {5.0, 4.0}, e.s.op, e.s.env, e.s.bem), DomainError);
}

TEST(Energy, ZeroPowerZeroEnergy) { EXPECT_EQ(annual_energy(constant_curve(0.0), {}), 0.0); }

TEST(Energy, ConstantPowerMatchesClosedForm) {
    const Environment env;
    const double p0 = 100e3;
    const double exact = 8760.0 * p0 / 1000.0 * (weibull_cdf(25.0, 1.91, 6.8) - weibull_cdf(3.0, 1.91, 6.8));
    EXPECT_NEAR(exact, 710412.90354659385, 1e-6);
    EXPECT_LT(test::rel_err(annual_energy(constant_curve(p0), env, 0.25), exact), 1e-3);
}

TEST(Energy, RaisingCutInToMedianHalves) {
    Environment env;
    env.v_cut_out = 200.0;
    env.v_cut_in = 0.0;
    const double median = 6.8 * std::pow(std::log(2.0), 1.0 / 1.91);
    const auto curve = constant_curve(1000.0, 0.0, 200.0);
    const double full = annual_energy(curve, env, 0.01);
    env.v_cut_in = median;
    EXPECT_NEAR(annual_energy(curve, env, 0.01), 0.5 * full, 1e-4 * full);
}

TEST(Energy, MonotoneAndGridConverged) {
    const auto& e = example();
    auto curve = power_curve(e.rotor, e.s.wind_speeds, e.s.op, e.s.env, e.s.bem);
    const double coarse = annual_energy(curve, e.s.env, 0.25);
    const double fine = annual_energy(curve, e.s.env, 0.125);
    EXPECT_LT(test::rel_err(coarse, fine), 5e-4);
    for (auto& p : curve) p.power = std::max(p.power, 0.0) * 1.01 + 1.0;
    EXPECT_GE(annual_energy(curve, e.s.env, 0.25), coarse);
}

TEST(Energy, PowerOutsideCurveIsZero) {
    const auto c = constant_curve(5.0, 4.0, 6.0);
    EXPECT_EQ(interpolate_power(c, 3.9), 0.0);
    EXPECT_EQ(interpolate_power(c, 5.5), 5.0);
    EXPECT_EQ(interpolate_power(c, 6.1), 0.0);
}
