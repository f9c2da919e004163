#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bladeopt/core/error.hpp"
#include "bladeopt/model/blade.hpp"

namespace bladeopt {

// The eight material roles a layup draws from.
enum class MaterialRole { blade_root, blade_shell, spar_uni, spar_core, lep_core, tep_core, web_shell, web_core };

inline constexpr std::array<const char*, 8> kRoleNames = {"blade-root", "blade-shell", "spar-uni", "spar-core",
                                                          "LEP-core",   "TEP-core",    "web-shell", "web-core"};

inline const char* role_name(MaterialRole r) { return kRoleNames[static_cast<std::size_t>(r)]; }

// Where the layup regions sit along the blade. Station indices are 1-based,
// matching the input deck.
struct DesignLayout {
    int inb_stn = 3;
    int tran_stn = 8;
    int oub_stn = 28;
    int num_cp = 4;
    // Optional explicit control-point stations (1-based). Used only when its
    // length equals num_cp; otherwise control points are equally spaced.
    std::vector<int> cp_index;

    bool operator==(const DesignLayout&) const = default;

    std::size_t vector_size() const { return 3 + 5 * static_cast<std::size_t>(num_cp) + 4; }

    void validate(std::size_t num_sections) const {
        BLADEOPT_REQUIRE(num_cp >= 1, ConfigError, "layout: NUM_CP must be >= 1");
        BLADEOPT_REQUIRE(inb_stn >= 1 && inb_stn < tran_stn && tran_stn < oub_stn &&
                             oub_stn <= static_cast<int>(num_sections),
                         ConfigError, "layout: need 1 <= INB_STN < TRAN_STN < OUB_STN <= NUM_SEC");
    }
};

// The layup design vector: spar-cap widths, root thickness, and panel
// thicknesses at the control points. Thicknesses in meters.
struct DesignVector {
    double w_cap_inb = 0.2;
    double w_cap_oub = 0.2;
    double t_blade_root = 0.0;
    std::vector<double> t_blade_skin, t_cap_uni, t_cap_core, t_lep_core, t_tep_core;
    std::array<double, 2> t_web_skin{};
    std::array<double, 2> t_web_core{};

    // Flat order: w_cap_inb, w_cap_oub, t_blade_root, skin[N], cap_uni[N],
    // cap_core[N], lep_core[N], tep_core[N], web_skin[2], web_core[2].
    static DesignVector from_flat(std::span<const double> x, const DesignLayout& layout) {
        BLADEOPT_REQUIRE(x.size() == layout.vector_size(), ConfigError,
                         "design vector has " + std::to_string(x.size()) + " entries, expected " +
                             std::to_string(layout.vector_size()));
        const auto n = static_cast<std::size_t>(layout.num_cp);
        DesignVector d;
        d.w_cap_inb = x[0];
        d.w_cap_oub = x[1];
        d.t_blade_root = x[2];
        std::size_t k = 3;
        for (auto* v : {&d.t_blade_skin, &d.t_cap_uni, &d.t_cap_core, &d.t_lep_core, &d.t_tep_core}) {
            v->assign(x.begin() + static_cast<std::ptrdiff_t>(k), x.begin() + static_cast<std::ptrdiff_t>(k + n));
            k += n;
        }
        d.t_web_skin = {x[k], x[k + 1]};
        d.t_web_core = {x[k + 2], x[k + 3]};
        return d;
    }

    std::vector<double> to_flat() const {
        std::vector<double> x{w_cap_inb, w_cap_oub, t_blade_root};
        for (const auto* v : {&t_blade_skin, &t_cap_uni, &t_cap_core, &t_lep_core, &t_tep_core})
            x.insert(x.end(), v->begin(), v->end());
        x.insert(x.end(), {t_web_skin[0], t_web_skin[1], t_web_core[0], t_web_core[1]});
        return x;
    }

    void validate(const DesignLayout& layout) const {
        const auto n = static_cast<std::size_t>(layout.num_cp);
        for (const auto* v : {&t_blade_skin, &t_cap_uni, &t_cap_core, &t_lep_core, &t_tep_core})
            BLADEOPT_REQUIRE(v->size() == n, ConfigError, "design vector: control-point array length != NUM_CP");
        BLADEOPT_REQUIRE(w_cap_inb > 0.0 && w_cap_inb < 1.0 && w_cap_oub > 0.0 && w_cap_oub < 1.0, ConfigError,
                         "design vector: spar-cap widths must lie in (0, 1)");
        const auto flat = to_flat();
        for (std::size_t i = 2; i < flat.size(); ++i)
            BLADEOPT_REQUIRE(std::isfinite(flat[i]) && flat[i] >= 0.0, ConfigError,
                             "design vector: thicknesses must be >= 0");
    }
};

struct Layer {
    MaterialRole role;
    double thickness = 0.0;   // [m]
    double fiber_angle_deg = 0.0;
};

using LayerStack = std::vector<Layer>;

// Laminate schedule at one radius. Empty stacks mean the region is absent.
struct StationLayup {
    double radius_m = 0.0;
    bool has_spar = false;     // caps, webs, LEP and TEP present
    double w_cap = 0.0;        // spar-cap width, chord fraction
    double root_blend = 0.0;   // 0 = all root material, 1 = all shell

    // Raw interpolated thicknesses, before stacking.
    double t_root = 0.0, t_skin = 0.0, t_cap_uni = 0.0, t_cap_core = 0.0, t_lep_core = 0.0, t_tep_core = 0.0;
    double t_web_skin = 0.0, t_web_core = 0.0;

    LayerStack shell;      // whole periphery when has_spar is false
    LayerStack lep, spar_cap, tep, web;
};

namespace detail {

inline double interp_clamped(double r, std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() == 1 || r <= xs.front()) return ys.front();
    if (r >= xs.back()) return ys.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), r);
    const auto i = static_cast<std::size_t>(it - xs.begin());
    const double t = (r - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

inline void push_layer(LayerStack& s, MaterialRole role, double t) {
    if (t > 0.0) s.push_back({role, t, 0.0});
}

// Outer skin, optional core, inner skin; skins are split evenly around the core.
inline LayerStack sandwich(double t_root, MaterialRole skin_role, double t_skin,
                           std::initializer_list<std::pair<MaterialRole, double>> cores) {
    LayerStack s;
    push_layer(s, MaterialRole::blade_root, t_root);
    double core_total = 0.0;
    for (auto& c : cores) core_total += c.second;
    if (core_total > 0.0) {
        push_layer(s, skin_role, 0.5 * t_skin);
        for (auto& c : cores) push_layer(s, c.first, c.second);
        push_layer(s, skin_role, 0.5 * t_skin);
    } else {
        push_layer(s, skin_role, t_skin);
    }
    return s;
}

} // namespace detail

// Interpolates a design vector onto arbitrary radii.
class LayupMap {
public:
    LayupMap(const DesignVector& x, const BladeDefinition& blade, const DesignLayout& layout) : x_(x) {
        layout.validate(blade.num_sections());
        x.validate(layout);
        const auto& st = blade.stations;
        r_inb_ = st[static_cast<std::size_t>(layout.inb_stn - 1)].radius_m;
        r_tran_ = st[static_cast<std::size_t>(layout.tran_stn - 1)].radius_m;
        r_oub_ = st[static_cast<std::size_t>(layout.oub_stn - 1)].radius_m;
        const auto n = static_cast<std::size_t>(layout.num_cp);
        if (layout.cp_index.size() == n) {
            for (int idx : layout.cp_index) {
                BLADEOPT_REQUIRE(idx >= 1 && idx <= static_cast<int>(st.size()), ConfigError,
                                 "layout: CP_Index entry out of range");
                cp_r_.push_back(st[static_cast<std::size_t>(idx - 1)].radius_m);
            }
            BLADEOPT_REQUIRE(std::is_sorted(cp_r_.begin(), cp_r_.end()), ConfigError,
                             "layout: CP_Index must be increasing");
            skin_r_ = cp_r_;
        } else {
            cp_r_ = equally_spaced(r_inb_, r_oub_, n);
            skin_r_ = equally_spaced(r_tran_, r_oub_, n);
        }
    }

    const std::vector<double>& control_radii() const { return cp_r_; }
    const std::vector<double>& skin_control_radii() const { return skin_r_; }
    double inboard_radius() const { return r_inb_; }
    double transition_radius() const { return r_tran_; }
    double outboard_radius() const { return r_oub_; }

    StationLayup at(double r) const {
        constexpr double eps = 1e-9;
        StationLayup s;
        s.radius_m = r;
        s.root_blend = std::clamp((r - r_inb_) / (r_tran_ - r_inb_), 0.0, 1.0);
        s.t_root = (1.0 - s.root_blend) * x_.t_blade_root;
        s.t_skin = s.root_blend * detail::interp_clamped(r, skin_r_, x_.t_blade_skin);
        s.has_spar = r >= r_inb_ - eps && r <= r_oub_ + eps;
        if (!s.has_spar) {
            s.shell = detail::sandwich(s.t_root, MaterialRole::blade_shell, s.t_skin, {});
            return s;
        }
        const double u = std::clamp((r - r_inb_) / (r_oub_ - r_inb_), 0.0, 1.0);
        s.w_cap = x_.w_cap_inb + u * (x_.w_cap_oub - x_.w_cap_inb);
        s.t_cap_uni = detail::interp_clamped(r, cp_r_, x_.t_cap_uni);
        s.t_cap_core = detail::interp_clamped(r, cp_r_, x_.t_cap_core);
        s.t_lep_core = detail::interp_clamped(r, cp_r_, x_.t_lep_core);
        s.t_tep_core = detail::interp_clamped(r, cp_r_, x_.t_tep_core);
        s.t_web_skin = x_.t_web_skin[0] + u * (x_.t_web_skin[1] - x_.t_web_skin[0]);
        s.t_web_core = x_.t_web_core[0] + u * (x_.t_web_core[1] - x_.t_web_core[0]);

        using R = MaterialRole;
        s.lep = detail::sandwich(s.t_root, R::blade_shell, s.t_skin, {{R::lep_core, s.t_lep_core}});
        s.tep = detail::sandwich(s.t_root, R::blade_shell, s.t_skin, {{R::tep_core, s.t_tep_core}});
        s.spar_cap = detail::sandwich(s.t_root, R::blade_shell, s.t_skin,
                                      {{R::spar_uni, s.t_cap_uni}, {R::spar_core, s.t_cap_core}});
        s.web = detail::sandwich(0.0, R::web_shell, s.t_web_skin, {{R::web_core, s.t_web_core}});
        return s;
    }

private:
    static std::vector<double> equally_spaced(double a, double b, std::size_t n) {
        std::vector<double> r(n, a);
        for (std::size_t i = 1; i < n; ++i) r[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
        return r;
    }

    DesignVector x_;
    double r_inb_ = 0.0, r_tran_ = 0.0, r_oub_ = 0.0;
    std::vector<double> cp_r_, skin_r_;
};

// Laminate schedule at every blade station.
inline std::vector<StationLayup> design_vector_to_layup(const DesignVector& x, const BladeDefinition& blade,
                                                        const DesignLayout& layout) {
    const LayupMap map(x, blade, layout);
    std::vector<StationLayup> out;
    out.reserve(blade.stations.size());
    for (const auto& st : blade.stations) out.push_back(map.at(st.radius_m));
    return out;
}

inline double stack_thickness(const LayerStack& s) {
    double t = 0.0;
    for (const auto& l : s) t += l.thickness;
    return t;
}

} // namespace bladeopt
