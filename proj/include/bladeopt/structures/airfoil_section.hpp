#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bladeopt/core/error.hpp"
#include "bladeopt/model/design.hpp"
#include "bladeopt/model/material.hpp"
#include "bladeopt/structures/section.hpp"

namespace bladeopt {

// One material per layup role.
struct MaterialSet {
    std::array<Material, 8> by_role;

    const Material& operator[](MaterialRole r) const { return by_role[static_cast<std::size_t>(r)]; }

    // Picks the materials named after the eight roles (case-insensitive).
    static MaterialSet from_named(const std::vector<Material>& mats) {
        MaterialSet s;
        auto lower = [](std::string v) {
            std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
            return v;
        };
        for (std::size_t i = 0; i < kRoleNames.size(); ++i) {
            auto it = std::find_if(mats.begin(), mats.end(),
                                   [&](const Material& m) { return lower(m.name) == lower(kRoleNames[i]); });
            BLADEOPT_REQUIRE(it != mats.end(), ConfigError,
                             std::string("materials: missing required material '") + kRoleNames[i] + "'");
            s.by_role[i] = *it;
        }
        return s;
    }
};

inline Laminate make_laminate(const LayerStack& stack, const MaterialSet& mats) {
    Laminate lam;
    lam.reserve(stack.size());
    for (const auto& l : stack) lam.push_back({&mats[l.role], l.thickness, l.fiber_angle_deg});
    return lam;
}

// Half-thickness of the outline at chord fraction x, per unit chord. NACA
// 4-digit symmetric thickness with a closed trailing edge; near-round
// sections (t/c >= 0.95) use an ellipse so the root cylinder is exact.
inline double outline_half_thickness(double x, double tc) {
    x = std::clamp(x, 0.0, 1.0);
    if (tc >= 0.95) return tc * std::sqrt(x * (1.0 - x));
    return 5.0 * tc *
           (0.2969 * std::sqrt(x) - 0.1260 * x - 0.3516 * x * x + 0.2843 * x * x * x - 0.1036 * x * x * x * x);
}

struct SectionGeometry {
    double chord = 1.0;
    double pitch_axis_fraction = 0.25;
    double thickness_ratio = 0.18;
    int points_per_surface = 40;
};

namespace detail {

// Interior chord fractions of one surface: cosine-clustered at both ends,
// with the given break points inserted and near-duplicates dropped.
inline std::vector<double> surface_stations(int n, std::initializer_list<double> breaks) {
    std::vector<double> xs;
    for (int i = 1; i < n; ++i)
        xs.push_back(0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(n))));
    const double min_gap = 0.25 * (1.0 - std::cos(std::numbers::pi / static_cast<double>(n)));
    for (double b : breaks) {
        xs.erase(std::remove_if(xs.begin(), xs.end(), [&](double x) { return std::abs(x - b) < std::max(min_gap, 2e-3); }),
                 xs.end());
        xs.push_back(b);
    }
    std::sort(xs.begin(), xs.end());
    return xs;
}

} // namespace detail

// Builds the thin-wall model of one blade station. Returns nullopt when the
// station carries no material at all.
//
// With a spar the wall has six regions: LEP (leading edge to the fore web),
// spar caps on both surfaces between the webs, TEP (aft web to the trailing
// edge), and the two webs, which sit at the cap edges, centered on the pitch
// axis. Without webs the periphery is a single cell.
inline std::optional<ThinWallSection> build_station_section(const StationLayup& lay, const SectionGeometry& g,
                                                            const MaterialSet& mats) {
    BLADEOPT_REQUIRE(g.chord > 0.0 && g.points_per_surface >= 4, StructuralError, "section: invalid geometry");
    const bool empty = lay.has_spar ? lay.lep.empty() && lay.spar_cap.empty() && lay.tep.empty() && lay.web.empty()
                                    : lay.shell.empty();
    if (empty) return std::nullopt;

    ThinWallSection s;
    const double pa = g.pitch_axis_fraction;
    double xw1 = 0.0, xw2 = 1.0;
    std::vector<double> xs;
    if (lay.has_spar) {
        xw1 = std::clamp(pa - 0.5 * lay.w_cap, 0.01, 0.99);
        xw2 = std::clamp(pa + 0.5 * lay.w_cap, 0.01, 0.99);
        BLADEOPT_REQUIRE(xw2 > xw1, StructuralError, "section: spar cap has no width");
        xs = detail::surface_stations(g.points_per_surface, {xw1, xw2});
    } else {
        xs = detail::surface_stations(g.points_per_surface, {});
    }
    const int m = static_cast<int>(xs.size());

    // Nodes: 0 = LE, 1..m upper, m+1 = TE, m+2..2m+1 lower.
    auto at = [&](double x, double sign) {
        return Eigen::Vector2d((x - pa) * g.chord, sign * g.chord * outline_half_thickness(x, g.thickness_ratio));
    };
    s.nodes.push_back(at(0.0, 0.0));
    for (double x : xs) s.nodes.push_back(at(x, 1.0));
    s.nodes.push_back(at(1.0, 0.0));
    for (double x : xs) s.nodes.push_back(at(x, -1.0));
    const int le = 0, te = m + 1;
    auto upper = [&](int i) { return i < 0 ? le : i >= m ? te : 1 + i; };
    auto lower = [&](int i) { return i < 0 ? le : i >= m ? te : m + 2 + i; };

    auto add_panel = [&](PanelRegion region, const LayerStack& stack) {
        BLADEOPT_REQUIRE(!stack.empty(), TopologyError,
                         std::string("section: open periphery, region ") + region_name(region) + " has no material");
        s.panels.push_back({region, LaminateModel(make_laminate(stack, mats)), 0.0});
        return static_cast<int>(s.panels.size()) - 1;
    };

    std::vector<int> up_edges, lo_edges;  // indexed by segment, LE -> TE
    if (!lay.has_spar) {
        const int pu = add_panel(PanelRegion::shell, lay.shell);
        const int pl = add_panel(PanelRegion::shell, lay.shell);
        for (int i = -1; i < m; ++i) {
            up_edges.push_back(static_cast<int>(s.edges.size()));
            s.edges.push_back({upper(i), upper(i + 1), pu});
            lo_edges.push_back(static_cast<int>(s.edges.size()));
            s.edges.push_back({lower(i), lower(i + 1), pl});
        }
        CellLoop c;
        for (int e : up_edges) c.edges.push_back({e, 1});
        for (auto it = lo_edges.rbegin(); it != lo_edges.rend(); ++it) c.edges.push_back({*it, -1});
        s.cells.push_back(std::move(c));
        return s;
    }

    const int p_lep_u = add_panel(PanelRegion::lep, lay.lep);
    const int p_lep_l = add_panel(PanelRegion::lep, lay.lep);
    const int p_cap_u = add_panel(PanelRegion::spar_cap_upper, lay.spar_cap);
    const int p_cap_l = add_panel(PanelRegion::spar_cap_lower, lay.spar_cap);
    const int p_tep_u = add_panel(PanelRegion::tep, lay.tep);
    const int p_tep_l = add_panel(PanelRegion::tep, lay.tep);
    const int iw1 = static_cast<int>(std::find(xs.begin(), xs.end(), xw1) - xs.begin());
    const int iw2 = static_cast<int>(std::find(xs.begin(), xs.end(), xw2) - xs.begin());
    for (int i = -1; i < m; ++i) {
        // Segment i runs from interior point i to i + 1.
        const bool fore = i < iw1, aft = i >= iw2;
        up_edges.push_back(static_cast<int>(s.edges.size()));
        s.edges.push_back({upper(i), upper(i + 1), fore ? p_lep_u : aft ? p_tep_u : p_cap_u});
        lo_edges.push_back(static_cast<int>(s.edges.size()));
        s.edges.push_back({lower(i), lower(i + 1), fore ? p_lep_l : aft ? p_tep_l : p_cap_l});
    }
    // Segment index k covers points k-1 -> k.
    auto seg = [](int i) { return static_cast<std::size_t>(i + 1); };

    if (lay.web.empty()) {
        CellLoop c;
        for (int e : up_edges) c.edges.push_back({e, 1});
        for (auto it = lo_edges.rbegin(); it != lo_edges.rend(); ++it) c.edges.push_back({*it, -1});
        s.cells.push_back(std::move(c));
        return s;
    }

    const int p_web1 = add_panel(PanelRegion::web_fore, lay.web);
    const int p_web2 = add_panel(PanelRegion::web_aft, lay.web);
    const int w1 = static_cast<int>(s.edges.size());
    s.edges.push_back({upper(iw1), lower(iw1), p_web1});
    const int w2 = static_cast<int>(s.edges.size());
    s.edges.push_back({upper(iw2), lower(iw2), p_web2});

    CellLoop lec, box, tec;
    // LE cell: lower (fore web -> LE), upper (LE -> fore web), down the fore web.
    for (int k = iw1; k >= 0; --k) lec.edges.push_back({lo_edges[static_cast<std::size_t>(k)], -1});
    for (int k = 0; k <= iw1; ++k) lec.edges.push_back({up_edges[static_cast<std::size_t>(k)], 1});
    lec.edges.push_back({w1, 1});
    // Box: upper cap forward, down the aft web, lower cap back, up the fore web.
    for (int i = iw1; i < iw2; ++i) box.edges.push_back({up_edges[seg(i)], 1});
    box.edges.push_back({w2, 1});
    for (int i = iw2 - 1; i >= iw1; --i) box.edges.push_back({lo_edges[seg(i)], -1});
    box.edges.push_back({w1, -1});
    // TE cell: upper (aft web -> TE), lower back, up the aft web.
    for (int i = iw2; i < m; ++i) tec.edges.push_back({up_edges[seg(i)], 1});
    for (int i = m - 1; i >= iw2; --i) tec.edges.push_back({lo_edges[seg(i)], -1});
    tec.edges.push_back({w2, -1});
    s.cells = {std::move(lec), std::move(box), std::move(tec)};
    return s;
}

} // namespace bladeopt
