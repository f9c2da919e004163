#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "bladeopt/core/error.hpp"
#include "bladeopt/core/numfmt.hpp"
#include "bladeopt/io/text.hpp"
#include "bladeopt/model/blade.hpp"
#include "bladeopt/model/design.hpp"
#include "bladeopt/model/material.hpp"
#include "bladeopt/model/polar.hpp"

namespace bladeopt::io {

namespace detail {

inline double number(const std::string& tok, const std::filesystem::path& p, std::size_t line_no,
                     const std::string& what) {
    const auto v = parse_double(tok);
    BLADEOPT_REQUIRE(v && std::isfinite(*v), ConfigError, where(p, line_no) + what + " '" + tok + "' is not a number");
    return *v;
}

inline bool is_comment(const std::string& l) {
    const auto t = trim(l);
    return t.empty() || t[0] == '#';
}

} // namespace detail

// Station lines `r_m chord_m twist_deg pitch_axis_frac airfoil_id`; `#`
// starts a comment line. Rotor-level data comes from the caller.
inline BladeDefinition parse_blade_file(const std::filesystem::path& p, double rotor_radius, double hub_radius,
                                        int num_blades, StationSpacing spacing) {
    BladeDefinition b;
    b.rotor_radius = rotor_radius;
    b.hub_radius = hub_radius;
    b.num_blades = num_blades;
    b.spacing = spacing;
    const auto lines = read_lines(p);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (detail::is_comment(lines[i])) continue;
        const auto t = tokenize(lines[i]);
        BLADEOPT_REQUIRE(t.size() == 5, ConfigError, where(p, i + 1) + "expected 5 columns, found " + std::to_string(t.size()));
        BladeStation s;
        s.radius_m = detail::number(t[0], p, i + 1, "radius");
        s.chord_m = detail::number(t[1], p, i + 1, "chord");
        s.twist_deg = detail::number(t[2], p, i + 1, "twist");
        s.pitch_axis_fraction = detail::number(t[3], p, i + 1, "pitch axis");
        s.airfoil_id = t[4];
        b.stations.push_back(std::move(s));
    }
    b.validate();
    return b;
}

// `alpha_deg Cl Cd [Cm]` rows after `#` comment lines. A comment of the form
// `# thickness_ratio = 0.25` sets t/c (default 0.18). The airfoil id is the
// file stem.
inline AirfoilPolar parse_polar_file(const std::filesystem::path& p) {
    AirfoilPolar polar;
    polar.id = p.stem().string();
    const auto lines = read_lines(p);
    bool all_cm = true, any_row = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto t = trim(lines[i]);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const auto body = trim(std::string_view(t).substr(1));
            const auto eq = body.find('=');
            if (eq != std::string::npos && lower(trim(std::string_view(body).substr(0, eq))) == "thickness_ratio")
                polar.thickness_ratio = detail::number(trim(std::string_view(body).substr(eq + 1)), p, i + 1, "thickness ratio");
            continue;
        }
        const auto tok = tokenize(t);
        BLADEOPT_REQUIRE(tok.size() == 3 || tok.size() == 4, ConfigError, where(p, i + 1) + "expected 3 or 4 columns");
        PolarRow r;
        r.alpha_deg = detail::number(tok[0], p, i + 1, "alpha");
        r.cl = detail::number(tok[1], p, i + 1, "Cl");
        r.cd = detail::number(tok[2], p, i + 1, "Cd");
        if (tok.size() == 4) r.cm = detail::number(tok[3], p, i + 1, "Cm");
        all_cm = all_cm && tok.size() == 4;
        any_row = true;
        polar.rows.push_back(r);
    }
    polar.has_cm = any_row && all_cm;
    polar.validate();
    return polar;
}

// CSV with header `name,E11,E22,G12,nu12,rho,s11T,s11C,s22T,s22C,t12y` in
// any column order (names case-insensitive).
inline std::vector<Material> parse_materials(const std::filesystem::path& p) {
    const auto lines = read_lines(p);
    std::size_t first = 0;
    while (first < lines.size() && detail::is_comment(lines[first])) ++first;
    BLADEOPT_REQUIRE(first < lines.size(), ConfigError, p.string() + ": missing header row");
    const auto header = split_csv(lines[first]);
    const std::vector<std::string> cols{"name", "e11", "e22", "g12", "nu12", "rho", "s11t", "s11c", "s22t", "s22c", "t12y"};
    std::vector<int> idx(cols.size(), -1);
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto it = std::find(cols.begin(), cols.end(), lower(header[c]));
        if (it != cols.end()) idx[static_cast<std::size_t>(it - cols.begin())] = static_cast<int>(c);
    }
    for (std::size_t k = 0; k < 6; ++k)
        BLADEOPT_REQUIRE(idx[k] >= 0, ConfigError, where(p, first + 1) + "missing column '" + cols[k] + "'");
    for (std::size_t k = 6; k < cols.size(); ++k)
        BLADEOPT_REQUIRE(idx[k] >= 0, ConfigError,
                         where(p, first + 1) + "strengths required: missing column '" + cols[k] + "'");

    std::vector<Material> out;
    std::set<std::string> seen;
    for (std::size_t i = first + 1; i < lines.size(); ++i) {
        if (detail::is_comment(lines[i])) continue;
        const auto f = split_csv(lines[i]);
        auto field = [&](std::size_t k) -> const std::string& {
            const auto c = static_cast<std::size_t>(idx[k]);
            BLADEOPT_REQUIRE(c < f.size(), ConfigError, where(p, i + 1) + "missing field '" + cols[k] + "'");
            return f[c];
        };
        Material m;
        m.name = field(0);
        BLADEOPT_REQUIRE(!m.name.empty(), ConfigError, where(p, i + 1) + "empty material name");
        BLADEOPT_REQUIRE(seen.insert(lower(m.name)).second, ConfigError,
                         where(p, i + 1) + "duplicate material '" + m.name + "'");
        double* dst[] = {&m.E11, &m.E22, &m.G12, &m.nu12, &m.rho, &m.strength.s11_tension,
                         &m.strength.s11_compression, &m.strength.s22_tension, &m.strength.s22_compression,
                         &m.strength.t12_shear};
        for (std::size_t k = 1; k < cols.size(); ++k) {
            const auto& s = field(k);
            if (k >= 6)
                BLADEOPT_REQUIRE(!s.empty(), ConfigError,
                                 where(p, i + 1) + "strengths required: '" + cols[k] + "' is empty for '" + m.name + "'");
            *dst[k - 1] = detail::number(s, p, i + 1, cols[k]);
        }
        try {
            m.validate();
        } catch (const ConfigError& e) {
            throw ConfigError(where(p, i + 1) + e.what());
        }
        out.push_back(std::move(m));
    }
    BLADEOPT_REQUIRE(!out.empty(), ConfigError, p.string() + ": no materials");
    return out;
}

// Flat design vector: whitespace- or comma-separated numbers, `#` comments.
inline std::vector<double> parse_design_file(const std::filesystem::path& p) {
    std::vector<double> x;
    const auto lines = read_lines(p);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (detail::is_comment(lines[i])) continue;
        std::string l = lines[i];
        std::replace(l.begin(), l.end(), ',', ' ');
        for (const auto& t : tokenize(l)) x.push_back(detail::number(t, p, i + 1, "design value"));
    }
    return x;
}

} // namespace bladeopt::io
