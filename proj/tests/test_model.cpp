#include <gtest/gtest.h>

#include <random>

#include "bladeopt/model/design.hpp"
#include "bladeopt/model/environment.hpp"
#include "bladeopt/model/material.hpp"
#include "bladeopt/model/polar.hpp"
#include "bladeopt/io/inputs.hpp"
#include "support.hpp"

using namespace bladeopt;

namespace {

AirfoilPolar two_row_polar() {
    AirfoilPolar p;
    p.id = "p";
    p.rows = {{0.0, 0.5, 0.01, -0.02}, {4.0, 0.9, 0.03, -0.06}};
    return p;
}

BladeDefinition straight_blade(int n = 30) {
    BladeDefinition b;
    for (double r : station_radii(0.5, 10.0, static_cast<std::size_t>(n), StationSpacing::cosine))
        b.stations.push_back({r, 0.8, 0.0, 0.375, "af"});
    return b;
}

DesignVector uniform_design(double t, int n_cp = 4) {
    DesignVector d;
    d.w_cap_inb = d.w_cap_oub = 0.3;
    d.t_blade_root = t;
    for (auto* v : {&d.t_blade_skin, &d.t_cap_uni, &d.t_cap_core, &d.t_lep_core, &d.t_tep_core})
        v->assign(static_cast<std::size_t>(n_cp), t);
    d.t_web_skin = {t, t};
    d.t_web_core = {t, t};
    return d;
}

} // namespace

TEST(Polar, ExactAtNodes) {
    const auto p = two_row_polar();
    EXPECT_EQ(interpolate_polar(p, 0.0).cl, 0.5);
    EXPECT_EQ(interpolate_polar(p, 4.0).cd, 0.03);
}

TEST(Polar, LinearMidpoint) {
    const auto c = interpolate_polar(two_row_polar(), 2.0);
    EXPECT_NEAR(c.cl, 0.7, 1e-15);
    EXPECT_NEAR(c.cd, 0.02, 1e-15);
    EXPECT_NEAR(c.cm, -0.04, 1e-15);
}

TEST(Polar, OutOfRangeThrows) {
    const auto p = two_row_polar();
    EXPECT_THROW(interpolate_polar(p, 5.0), DomainError);
    EXPECT_THROW(interpolate_polar(p, 181.0), DomainError);
    EXPECT_THROW(interpolate_polar(p, std::nan("")), DomainError);
}

TEST(Polar, ValidationRejectsBadTables) {
    auto p = two_row_polar();
    p.rows[1].alpha_deg = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = two_row_polar();
    p.rows[0].cd = -0.1;
    EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Polar, WrapAngle) {
    EXPECT_DOUBLE_EQ(wrap_angle_deg(190.0), -170.0);
    EXPECT_DOUBLE_EQ(wrap_angle_deg(-190.0), 170.0);
    EXPECT_DOUBLE_EQ(wrap_angle_deg(45.0), 45.0);
    EXPECT_DOUBLE_EQ(wrap_angle_deg(720.0 + 10.0), 10.0);
}

TEST(Polar, ViternaCoversCircleWithNonNegativeDrag) {
    const auto raw = io::parse_polar_file(test::data_dir() / "af18.dat");
    const auto ext = extend_viterna(raw);
    ASSERT_TRUE(ext.covers_full_circle());
    EXPECT_NO_THROW(ext.validate());
    for (double a = -180.0; a <= 180.0; a += 0.7) EXPECT_GE(interpolate_polar(ext, a).cd, 0.0) << a;
    // Measured rows are kept verbatim.
    for (const auto& r : raw.rows) EXPECT_EQ(interpolate_polar(ext, r.alpha_deg).cl, r.cl);
    // Deep stall approaches the flat-plate drag maximum near 90 deg.
    EXPECT_NEAR(interpolate_polar(ext, 90.0).cd, 1.47, 0.1);
}

TEST(Polar, FullCirclePolarUnchanged) {
    const auto p = test::drag_free_polar();
    EXPECT_EQ(extend_viterna(p).rows.size(), p.rows.size());
}

TEST(Weibull, ValuesAtOriginAndScale) {
    EXPECT_EQ(weibull_pdf(0.0, 1.91, 6.8), 0.0);
    // Independent evaluation of (k/c) e^-1.
    EXPECT_NEAR(weibull_pdf(6.8, 1.91, 6.8), 0.10333084303491984, 1e-15);
    EXPECT_EQ(weibull_cdf(0.0, 1.91, 6.8), 0.0);
    EXPECT_EQ(weibull_cdf(HUGE_VAL, 1.91, 6.8), 1.0);
}

TEST(Weibull, IntegratesToOne) {
    const double k = 1.91, c = 6.8, hi = 10.0 * c;
    const int n = 200000;
    const double h = hi / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += weibull_pdf((i + 0.5) * h, k, c) * h;
    EXPECT_NEAR(s, 1.0, 1e-6);
}

TEST(Weibull, RejectsInvalid) {
    EXPECT_THROW(weibull_pdf(-1.0, 1.91, 6.8), DomainError);
    EXPECT_THROW(weibull_cdf(1.0, 0.0, 6.8), DomainError);
}

TEST(Environment, Validation) {
    Environment e;
    EXPECT_NO_THROW(e.validate());
    e.v_cut_in = 30.0;
    EXPECT_THROW(e.validate(), ConfigError);
}

TEST(Material, IsotropicAndBounds) {
    auto m = isotropic_material("al", 70e9, 0.3, 2700.0);
    EXPECT_NO_THROW(m.validate());
    EXPECT_DOUBLE_EQ(m.G12, 70e9 / 2.6);
    m.nu12 = 0.6;
    EXPECT_THROW(m.validate(), ConfigError);
    m.nu12 = 0.5;
    EXPECT_NO_THROW(m.validate());
    m.strength.t12_shear = 0.0;
    EXPECT_THROW(m.validate(), ConfigError);
}

TEST(Blade, StationRadiiSpacing) {
    const auto eq = station_radii(1.0, 3.0, 5, StationSpacing::equal);
    EXPECT_DOUBLE_EQ(eq[2], 2.0);
    const auto cs = station_radii(0.0, 1.0, 5, StationSpacing::cosine);
    EXPECT_EQ(cs.front(), 0.0);
    EXPECT_EQ(cs.back(), 1.0);
    EXPECT_NEAR(cs[1], 0.5 * (1.0 - std::cos(std::numbers::pi / 4.0)), 1e-15);
    EXPECT_NEAR(cs[2], 0.5, 1e-15);
}

TEST(Blade, ValidationCatchesBadGeometry) {
    auto b = straight_blade();
    EXPECT_NO_THROW(b.validate());
    b.stations[3].chord_m = 0.0;
    EXPECT_THROW(b.validate(), ConfigError);
    b = straight_blade();
    std::swap(b.stations[3], b.stations[4]);
    EXPECT_THROW(b.validate(), ConfigError);
    b = straight_blade();
    b.stations.back().radius_m = 10.5;
    EXPECT_THROW(b.validate(), ConfigError);
}

TEST(Design, FlatRoundTrip) {
    DesignLayout layout;
    std::vector<double> x(layout.vector_size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.001 * static_cast<double>(i + 1);
    x[0] = 0.3;
    x[1] = 0.2;
    const auto d = DesignVector::from_flat(x, layout);
    EXPECT_EQ(d.to_flat(), x);
    EXPECT_EQ(d.t_cap_uni.front(), x[3 + 4]);
    EXPECT_EQ(d.t_web_core[1], x.back());
    EXPECT_THROW(DesignVector::from_flat(std::vector<double>(5, 0.0), layout), ConfigError);
}

TEST(Design, ValidationRejectsNegativeThickness) {
    auto d = uniform_design(0.002);
    d.t_cap_core[2] = -1e-3;
    EXPECT_THROW(d.validate(DesignLayout{}), ConfigError);
    d = uniform_design(0.002);
    d.w_cap_inb = 1.2;
    EXPECT_THROW(d.validate(DesignLayout{}), ConfigError);
}

TEST(Layup, EqualControlPointsGiveUniformPanels) {
    const auto blade = straight_blade();
    const DesignLayout layout;
    const auto lay = design_vector_to_layup(uniform_design(0.003), blade, layout);
    for (std::size_t i = static_cast<std::size_t>(layout.inb_stn - 1); i < static_cast<std::size_t>(layout.oub_stn);
         ++i) {
        EXPECT_TRUE(lay[i].has_spar);
        EXPECT_NEAR(lay[i].t_cap_uni, 0.003, 1e-15);
        EXPECT_NEAR(lay[i].t_lep_core, 0.003, 1e-15);
        EXPECT_NEAR(lay[i].t_web_core, 0.003, 1e-15);
    }
    EXPECT_FALSE(lay.front().has_spar);
    EXPECT_FALSE(lay.back().has_spar);
}

TEST(Layup, ZeroLepCoreOmitsLayer) {
    auto d = uniform_design(0.003);
    d.t_lep_core.assign(4, 0.0);
    for (const auto& s : design_vector_to_layup(d, straight_blade(), DesignLayout{}))
        for (const auto& l : s.lep) EXPECT_NE(l.role, MaterialRole::lep_core);
}

TEST(Layup, MidpointBetweenControlPoints) {
    const auto blade = straight_blade();
    const DesignLayout layout;
    auto d = uniform_design(0.002);
    d.t_cap_uni = {0.004, 0.003, 0.002, 0.001};
    const LayupMap map(d, blade, layout);
    const auto& cp = map.control_radii();
    ASSERT_EQ(cp.size(), 4u);
    EXPECT_NEAR(map.at(0.5 * (cp[0] + cp[1])).t_cap_uni, 0.0035, 1e-15);
}

TEST(Layup, ControlPointRoundTrip) {
    const auto blade = straight_blade();
    const DesignLayout layout;
    auto d = uniform_design(0.002);
    d.t_cap_uni = {0.007, 0.004, 0.0025, 0.001};
    d.t_blade_skin = {0.003, 0.0022, 0.0017, 0.001};
    const LayupMap map(d, blade, layout);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_EQ(map.at(map.control_radii()[k]).t_cap_uni, d.t_cap_uni[k]);
        // The skin is fully blended in beyond the transition station.
        EXPECT_EQ(map.at(map.skin_control_radii()[k]).t_skin, d.t_blade_skin[k]);
    }
}

TEST(Layup, RootBlend) {
    const auto blade = straight_blade();
    const DesignLayout layout;
    const auto d = uniform_design(0.002);
    const auto lay = design_vector_to_layup(d, blade, layout);
    EXPECT_EQ(lay[0].root_blend, 0.0);
    EXPECT_EQ(lay[0].t_root, d.t_blade_root);
    EXPECT_EQ(lay[0].t_skin, 0.0);
    const auto tr = static_cast<std::size_t>(layout.tran_stn - 1);
    EXPECT_EQ(lay[tr].root_blend, 1.0);
    EXPECT_EQ(lay[tr].t_root, 0.0);
    const double mid = 0.5 * (blade.stations[2].radius_m + blade.stations[tr].radius_m);
    const auto s = LayupMap(d, blade, layout).at(mid);
    EXPECT_NEAR(s.root_blend, 0.5, 1e-12);
    EXPECT_NEAR(s.t_root + s.t_skin, d.t_blade_root * 0.5 + 0.5 * d.t_blade_skin[0], 1e-15);
}

TEST(Layup, MonotoneInEveryThickness) {
    const auto blade = straight_blade();
    const DesignLayout layout;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.001, 0.01);
    auto total = [](const StationLayup& s) {
        return std::vector<double>{s.t_root,     s.t_skin,     s.t_cap_uni,  s.t_cap_core,
                                   s.t_lep_core, s.t_tep_core, s.t_web_skin, s.t_web_core};
    };
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(layout.vector_size());
        for (auto& v : x) v = u(rng);
        x[0] = 0.3;
        x[1] = 0.2;
        const auto base = design_vector_to_layup(DesignVector::from_flat(x, layout), blade, layout);
        for (std::size_t j = 2; j < x.size(); ++j) {
            auto y = x;
            y[j] += 0.002;
            const auto up = design_vector_to_layup(DesignVector::from_flat(y, layout), blade, layout);
            for (std::size_t i = 0; i < base.size(); ++i) {
                const auto a = total(base[i]), b = total(up[i]);
                for (std::size_t k = 0; k < a.size(); ++k) EXPECT_GE(b[k], a[k] - 1e-15) << "var " << j << " station " << i;
            }
        }
    }
}

TEST(Layup, ExplicitControlPointStations) {
    const auto blade = straight_blade();
    DesignLayout layout;
    layout.cp_index = {3, 9, 19, 26};
    const LayupMap map(uniform_design(0.002), blade, layout);
    EXPECT_EQ(map.control_radii()[1], blade.stations[8].radius_m);
    layout.cp_index = {3, 19, 9, 26};
    EXPECT_THROW(LayupMap(uniform_design(0.002), blade, layout), ConfigError);
}

TEST(Layup, LayoutValidation) {
    DesignLayout l;
    l.tran_stn = 2;
    EXPECT_THROW(l.validate(30), ConfigError);
    l = DesignLayout{};
    l.oub_stn = 31;
    EXPECT_THROW(l.validate(30), ConfigError);
}
