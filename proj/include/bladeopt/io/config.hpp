#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include "bladeopt/aero/bem.hpp"
#include "bladeopt/core/error.hpp"
#include "bladeopt/core/numfmt.hpp"
#include "bladeopt/io/text.hpp"
#include "bladeopt/model/design.hpp"
#include "bladeopt/model/environment.hpp"
#include "bladeopt/moo/ga.hpp"

namespace bladeopt {

struct SweepRange {
    double start = 0.0, end = 0.0, delta = 0.0;
    bool operator==(const SweepRange&) const = default;
};

struct Interval {
    double lo = 0.0, hi = 0.0;
    bool operator==(const Interval&) const = default;
};

// Box bounds for each design-variable family.
struct DesignBounds {
    Interval w_cap{0.15, 0.40};
    Interval root{0.01, 0.04};
    Interval skin{0.001, 0.004};
    Interval cap_uni{0.002, 0.025};
    Interval cap_core{0.0, 0.01};
    Interval lep_core{0.002, 0.015};
    Interval tep_core{0.002, 0.015};
    Interval web_skin{0.001, 0.004};
    Interval web_core{0.002, 0.01};
    bool operator==(const DesignBounds&) const = default;
};

// Every key of the input deck, grouped by purpose. Paths are absolute once
// parsed.
struct RunConfig {
    struct Input {
        bool echo = false, dimen_inp = true, metric = true;
        bool operator==(const Input&) const = default;
    } input;
    BemConfig bem;
    double sw_tol = 1e-6;
    struct Turbine {
        int num_blades = 3;
        double rotor_radius = 10.0, hub_radius = 0.5, precone_deg = 0.0, tilt_deg = 0.0, yaw_deg = 0.0;
        double hub_height = 30.0;
        int num_seg = 30;
        bool operator==(const Turbine&) const = default;
    } turbine;
    struct Output {
        bool use_cm = false, tab_del = true, k_fact = true, write_bed = true, input_tsr = true;
        std::string spd_units = "mps";
        int num_cases = 0, par_row = 3, par_col = 1, par_tab = 2;
        bool out_pwr = true, out_cp = true, out_trq = true, out_flp = true, out_thr = true;
        bool operator==(const Output&) const = default;
    } output;
    SweepRange pitch{0.0, 0.0, 0.0};
    SweepRange rotor_speed{80.0, 80.0, 0.0};
    SweepRange wind{3.0, 25.0, 1.0};
    Environment env;
    struct Analysis {
        bool self_weight = true, buoyancy = true, centrif = true, disp_cf = true;
        int n_modes = 0;  // 0 = default (3 per bending family)
        int n_elems = 50;
        bool operator==(const Analysis&) const = default;
    } analysis;
    struct Optimization {
        bool optimize = true;
        std::string method = "GA";
        bool opt_pitaxis = false;
        double pitaxis_val = 0.375;
        DesignLayout layout;
        bool read_initx = false;
        std::string initx_file = "none";
        bool write_str = false, write_f_all = false, write_x_all = false, write_x_iter = false;
        GAConfig ga;
        std::vector<double> alphas{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
        DesignBounds bounds;
        bool operator==(const Optimization&) const = default;
    } opt;
    struct Blade {
        int num_sec = 30;
        double bld_length = 10.0, hub_rad = 0.5, shaft_tilt = 0.0, pre_cone = 0.0, azim = 180.0;
        double max_rot = 100.0, min_rot = 10.0;
        std::string interp_af = "cosine";
        int elm_spc = 1, n_af = 60;
        double root_tran_st = 0.13;
        int root_tran_st_index = 3;
        double root_tran_end = 0.288;
        int root_tran_end_index = 8;
        bool operator==(const Blade&) const = default;
    } blade;
    struct Files {
        std::string materials, blade;
        std::vector<std::string> polars;
        bool operator==(const Files&) const = default;
    } files;
    struct Limits {
        double max_tip_deflection = 0.0;  // 0 = 10% of BLD_LENGTH
        double buckle_alpha = 1.0, buckle_beta = 2.0;
        double freq_gap_frac = 0.1;
        double safety_factor = 1.35;
        bool operator==(const Limits&) const = default;
    } limits;

    bool operator==(const RunConfig&) const = default;

    int modes() const { return analysis.n_modes > 0 ? analysis.n_modes : 3; }
    double tip_deflection_limit() const {
        return limits.max_tip_deflection > 0.0 ? limits.max_tip_deflection : 0.1 * blade.bld_length;
    }
    std::vector<double> wind_speeds() const {
        std::vector<double> v;
        const auto n = static_cast<int>(std::floor((wind.end - wind.start) / wind.delta + 1e-9));
        for (int i = 0; i <= n; ++i) v.push_back(wind.start + wind.delta * i);
        return v;
    }
};

struct ParsedConfig {
    RunConfig config;
    std::vector<std::string> defaulted;  // keys absent from the file
    std::vector<std::string> warnings;
};

namespace io {
namespace detail {

enum class Kind { boolean, integer, seed, real, text, path, reals, paths, integers, interval };

struct KeyDef {
    std::string name;
    std::string help;
    Kind kind;
    void* target;
};

inline std::vector<KeyDef> key_table(RunConfig& c) {
    using K = Kind;
    auto& b = c.bem;
    auto& t = c.turbine;
    auto& o = c.output;
    auto& e = c.env;
    auto& a = c.analysis;
    auto& op = c.opt;
    auto& g = c.opt.ga;
    auto& bl = c.blade;
    auto& bd = c.opt.bounds;
    return {
        {"Echo", "Echo input parameters to '<rootname>.ech'?", K::boolean, &c.input.echo},
        {"DimenInp", "Turbine parameters are dimensional?", K::boolean, &c.input.dimen_inp},
        {"Metric", "Turbine parameters are Metric (MKS vs FPS)?", K::boolean, &c.input.metric},
        {"NumSect", "Number of circumferential sectors.", K::integer, &b.num_sectors},
        {"MaxIter", "Maximum number of iterations for induction factor.", K::integer, &b.max_iter},
        {"ATol", "Error tolerance for induction iteration.", K::real, &b.a_tol},
        {"SWTol", "Error tolerance for skewed-wake iteration.", K::real, &c.sw_tol},
        {"TipLoss", "Use the Prandtl tip-loss model?", K::boolean, &b.tip_loss},
        {"HubLoss", "Use the Prandtl hub-loss model?", K::boolean, &b.hub_loss},
        {"Swirl", "Include Swirl effects?", K::boolean, &b.swirl},
        {"SkewWake", "Apply skewed-wake correction?", K::boolean, &b.skewed_wake},
        {"AdvBrake", "Use the advanced brake-state model?", K::boolean, &b.adv_brake},
        {"IndProp", "Use PROP-PC instead of PROPX induction algorithm?", K::boolean, &b.ind_prop},
        {"AIDrag", "Use the drag term in the axial induction calculation?", K::boolean, &b.ai_drag},
        {"TIDrag", "Use the drag term in the tangential induction calculation?", K::boolean, &b.ti_drag},
        {"NumBlade", "Number of blades.", K::integer, &t.num_blades},
        {"RotorRad", "Rotor radius (length).", K::real, &t.rotor_radius},
        {"HubRad", "Hub radius (length or div by radius).", K::real, &t.hub_radius},
        {"PreCone", "Precone angle, positive downstream (deg).", K::real, &t.precone_deg},
        {"Tilt", "Shaft tilt (deg).", K::real, &t.tilt_deg},
        {"Yaw", "Yaw error (deg).", K::real, &t.yaw_deg},
        {"HubHt", "Hub height (length or div by radius).", K::real, &t.hub_height},
        {"NumSeg", "Number of blade segments (entire rotor radius).", K::integer, &t.num_seg},
        {"KinVisc", "Kinematic air viscosity", K::real, &e.kinematic_viscosity},
        {"ShearExp", "Wind-shear exponent (1/7 law = 0.143).", K::real, &e.shear_exponent},
        {"UseCm", "Are Cm data included in the airfoil tables?", K::boolean, &o.use_cm},
        {"TabDel", "Make output tab-delimited (fixed-width otherwise).", K::boolean, &o.tab_del},
        {"KFact", "Output dimensional parameters in K (e.g. kN instead of N)", K::boolean, &o.k_fact},
        {"WriteBED", "Write out blade-element data to '<rootname>.bed'?", K::boolean, &o.write_bed},
        {"InputTSR", "Input speeds as TSRs?", K::boolean, &o.input_tsr},
        {"SpdUnits", "Wind-speed units (mps, fps, mph)", K::text, &o.spd_units},
        {"NumCases", "Number of cases to run. Enter zero for parametric analysis.", K::integer, &o.num_cases},
        {"ParRow", "Row parameter (1-rpm, 2-pitch, 3-tsr/speed).", K::integer, &o.par_row},
        {"ParCol", "Column parameter (1-rpm, 2-pitch, 3-tsr/speed).", K::integer, &o.par_col},
        {"ParTab", "Table parameter (1-rpm, 2-pitch, 3-tsr/speed).", K::integer, &o.par_tab},
        {"OutPwr", "Request output of rotor power?", K::boolean, &o.out_pwr},
        {"OutCp", "Request output of Cp?", K::boolean, &o.out_cp},
        {"OutTrq", "Request output of shaft torque?", K::boolean, &o.out_trq},
        {"OutFlp", "Request output of flap-bending moment?", K::boolean, &o.out_flp},
        {"OutThr", "Request output of rotor thrust?", K::boolean, &o.out_thr},
        {"PitSt", "First blade pitch (deg).", K::real, &c.pitch.start},
        {"PitEnd", "Last blade pitch (deg).", K::real, &c.pitch.end},
        {"PitDel", "Delta blade pitch (deg).", K::real, &c.pitch.delta},
        {"OmgSt", "First rotor speed (rpm).", K::real, &c.rotor_speed.start},
        {"OmgEnd", "Last rotor speed (rpm).", K::real, &c.rotor_speed.end},
        {"OmgDel", "Delta rotor speed (rpm).", K::real, &c.rotor_speed.delta},
        {"WindSt", "First wind speed of the power curve (m/s).", K::real, &c.wind.start},
        {"WindEnd", "Last wind speed of the power curve (m/s).", K::real, &c.wind.end},
        {"WindDel", "Wind speed step of the power curve (m/s).", K::real, &c.wind.delta},
        {"CutIn", "Cut-in wind speed (m/s).", K::real, &e.v_cut_in},
        {"CutOut", "Cut-out wind speed (m/s).", K::real, &e.v_cut_out},
        {"SELF_WEIGHT", "Include self-weight as a body force?", K::boolean, &a.self_weight},
        {"BUOYANCY", "Include buoyancy as a body force?", K::boolean, &a.buoyancy},
        {"CENTRIF", "Include centrifugal force as a body force?", K::boolean, &a.centrif},
        {"DISP_CF", "Apply correction factors to the beam displacements?", K::boolean, &a.disp_cf},
        {"N_MODES", "Number of modes to be computed", K::integer, &a.n_modes},
        {"N_ELEMS", "Number of blade finite elements to be used in the modal analysis", K::integer, &a.n_elems},
        {"OPTIMIZE", "Perform optimization of composite layup?", K::boolean, &op.optimize},
        {"OPT_METHOD", "Optimization algorithm for the optimization of composite layup", K::text, &op.method},
        {"OPT_PITAXIS", "Optimize the pitch axis?", K::boolean, &op.opt_pitaxis},
        {"PITAXIS_VAL", "Pitch axis value outboard of max chord (ignored if OPT_PITAXIS = false)", K::real,
         &op.pitaxis_val},
        {"INB_STN", "Inboard station where the leading- and trailing-edge panels, spar caps and shear webs begin",
         K::integer, &op.layout.inb_stn},
        {"TRAN_STN", "Station where the root transition ends", K::integer, &op.layout.tran_stn},
        {"OUB_STN", "Outboard station where the leading- and trailing-edge panels, spar caps and shear webs end",
         K::integer, &op.layout.oub_stn},
        {"NUM_CP", "Number of control points between INB_STN and OUB_STN", K::integer, &op.layout.num_cp},
        {"READ_INITX", "Read the initial values for the design variables from INITX_FILE?", K::boolean,
         &op.read_initx},
        {"INITX_FILE", "Input file for the initial values of the design variables.", K::path, &op.initx_file},
        {"WRITE_STR", "Write structural input files at each function evaluation?", K::boolean, &op.write_str},
        {"WRITE_F_ALL", "Write the fitness value and penalty factors at each function evaluation?", K::boolean,
         &op.write_f_all},
        {"WRITE_X_ALL", "Write the design variables at each function evaluation?", K::boolean, &op.write_x_all},
        {"WRITE_X_ITER", "Write the design variables at each iteration?", K::boolean, &op.write_x_iter},
        {"NumGens", "Maximum number of generations for GA iterations", K::integer, &g.num_gens},
        {"PopSize", "Number of individuals per generation", K::integer, &g.pop_size},
        {"EliteCount", "Number of elite individuals per generation", K::integer, &g.elite_count},
        {"CrossFrc", "Fraction of individuals created by crossover", K::real, &g.cross_frac},
        {"GATol", "Error tolerance for the GA fitness value", K::real, &g.ga_tol},
        {"StallGens", "Generations without GATol improvement before the GA stops", K::integer, &g.stall_gens},
        {"Seed", "Random seed of the GA", K::seed, &g.seed},
        {"Alphas", "Weights of the Pareto sweep (must include 0)", K::reals, &op.alphas},
        {"FLUID_DEN", "Fluid density (kg/m^3)", K::real, &e.fluid_density},
        {"GRAV", "Gravitational acceleration (m/s^2)", K::real, &e.gravity},
        {"U_mean", "Long-term mean flow (m/s)", K::real, &e.u_mean},
        {"Weib_k", "Shape factor", K::real, &e.weibull_k},
        {"Weib_c", "Scale factor", K::real, &e.weibull_c},
        {"NUM_SEC", "Number of blade cross sections", K::integer, &bl.num_sec},
        {"BLD_LENGTH", "Blade length (m)", K::real, &bl.bld_length},
        {"HUB_RAD", "Hub radius (m)", K::real, &bl.hub_rad},
        {"SHAFT_TILT", "Shaft tilt angle (deg)", K::real, &bl.shaft_tilt},
        {"PRE_CONE", "Precone angle (deg)", K::real, &bl.pre_cone},
        {"AZIM", "Azimuth angle (deg)", K::real, &bl.azim},
        {"MAX_ROT", "Maximum rotational speed (rpm)", K::real, &bl.max_rot},
        {"MIN_ROT", "Minimum rotational speed (rpm)", K::real, &bl.min_rot},
        {"INTERP_AF", "Interpolate airfoil coordinates? (none, cosine or equal)", K::text, &bl.interp_af},
        {"ElmSpc", "Blade-element radial spacing (0 equal, 1 cosine)", K::integer, &bl.elm_spc},
        {"N_AF", "Number of points in interpolated airfoil coordinates (ignored)", K::integer, &bl.n_af},
        {"MATS_FILE", "Input file for material properties", K::path, &c.files.materials},
        {"BLADE_FILE", "Blade geometry file (r chord twist pitch-axis airfoil per line)", K::path, &c.files.blade},
        {"POLAR_FILES", "Airfoil polar files; the file stem is the airfoil id", K::paths, &c.files.polars},
        {"RootTranSt", "Start of root transition region", K::real, &bl.root_tran_st},
        {"RootTranSt_index", "Index of start of root transition region", K::integer, &bl.root_tran_st_index},
        {"RootTranEnd", "End of root transition region", K::real, &bl.root_tran_end},
        {"RootTranEnd_index", "Index of end of root transition region", K::integer, &bl.root_tran_end_index},
        {"CP_Index", "Index of control points", K::integers, &op.layout.cp_index},
        {"MaxTipDefl", "Maximum tip deflection (m); 0 = 10% of BLD_LENGTH", K::real, &c.limits.max_tip_deflection},
        {"BuckleAlpha", "Exponent of the compression term in the buckling interaction", K::real,
         &c.limits.buckle_alpha},
        {"BuckleBeta", "Exponent of the shear term in the buckling interaction", K::real, &c.limits.buckle_beta},
        {"FreqGapFrac", "Allowed frequency gap as a fraction of the rotor speed", K::real, &c.limits.freq_gap_frac},
        {"SafetyFactor", "Partial safety factor on the design load", K::real, &c.limits.safety_factor},
        {"BND_W_CAP", "Bounds of the spar-cap width (chord fraction)", K::interval, &bd.w_cap},
        {"BND_ROOT", "Bounds of the blade-root thickness (m)", K::interval, &bd.root},
        {"BND_SKIN", "Bounds of the blade-shell thickness (m)", K::interval, &bd.skin},
        {"BND_CAP_UNI", "Bounds of the spar-uni thickness (m)", K::interval, &bd.cap_uni},
        {"BND_CAP_CORE", "Bounds of the spar-core thickness (m)", K::interval, &bd.cap_core},
        {"BND_LEP_CORE", "Bounds of the LEP-core thickness (m)", K::interval, &bd.lep_core},
        {"BND_TEP_CORE", "Bounds of the TEP-core thickness (m)", K::interval, &bd.tep_core},
        {"BND_WEB_SKIN", "Bounds of the web-shell thickness (m)", K::interval, &bd.web_skin},
        {"BND_WEB_CORE", "Bounds of the web-core thickness (m)", K::interval, &bd.web_core},
    };
}

inline bool parse_bool(const std::string& s, bool& out) {
    const auto l = lower(s);
    if (l == "true" || l == "t") return out = true, true;
    if (l == "false" || l == "f") return out = false, true;
    return false;
}

inline std::string unquote(const std::string& s) {
    if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front())
        return s.substr(1, s.size() - 2);
    return s;
}

inline bool value_like(const std::string& s) {
    bool b;
    return parse_double(s).has_value() || parse_bool(s, b) || s.front() == '\'' || s.front() == '"';
}

inline std::string strip_key(std::string s) {
    while (!s.empty() && (s.back() == ':' || s.back() == ',')) s.pop_back();
    return s;
}

inline std::string resolve_path(const std::string& raw, const std::filesystem::path& base) {
    if (raw.empty() || lower(raw) == "none") return raw;
    std::filesystem::path p(raw);
    if (p.is_relative()) p = base / p;
    return std::filesystem::absolute(p).lexically_normal().string();
}

inline std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
    return s;
}

inline void assign(const KeyDef& k, const std::vector<std::string>& vals, const std::filesystem::path& base,
                   const std::string& at) {
    auto fail = [&](const std::string& why) { throw ConfigError(at + k.name + ": " + why); };
    auto one = [&]() -> const std::string& {
        if (vals.size() != 1) fail("expected one value, found " + std::to_string(vals.size()));
        return vals.front();
    };
    auto real = [&](const std::string& s) {
        const auto v = parse_double(s);
        if (!v || !std::isfinite(*v)) fail("'" + s + "' is not a number");
        return *v;
    };
    auto integer = [&](const std::string& s) {
        const auto v = parse_int(s);
        if (!v) fail("'" + s + "' is not an integer");
        return *v;
    };
    switch (k.kind) {
    case Kind::boolean:
        if (!parse_bool(one(), *static_cast<bool*>(k.target))) fail("'" + vals.front() + "' is not a boolean");
        break;
    case Kind::integer: *static_cast<int*>(k.target) = static_cast<int>(integer(one())); break;
    case Kind::seed: {
        const auto v = integer(one());
        if (v < 0) fail("must be >= 0");
        *static_cast<std::uint64_t*>(k.target) = static_cast<std::uint64_t>(v);
        break;
    }
    case Kind::real: *static_cast<double*>(k.target) = real(one()); break;
    case Kind::text: {
        std::vector<std::string> u;
        for (const auto& v : vals) u.push_back(unquote(v));
        *static_cast<std::string*>(k.target) = join(u);
        break;
    }
    case Kind::path: {
        std::vector<std::string> u;
        for (const auto& v : vals) u.push_back(unquote(v));
        *static_cast<std::string*>(k.target) = resolve_path(join(u), base);
        break;
    }
    case Kind::reals: {
        auto& dst = *static_cast<std::vector<double>*>(k.target);
        dst.clear();
        for (const auto& v : vals) dst.push_back(real(v));
        break;
    }
    case Kind::integers: {
        auto& dst = *static_cast<std::vector<int>*>(k.target);
        dst.clear();
        for (const auto& v : vals) dst.push_back(static_cast<int>(integer(v)));
        break;
    }
    case Kind::paths: {
        auto& dst = *static_cast<std::vector<std::string>*>(k.target);
        dst.clear();
        for (const auto& v : vals) dst.push_back(resolve_path(unquote(v), base));
        break;
    }
    case Kind::interval: {
        if (vals.size() != 2) fail("expected two values (lower upper)");
        *static_cast<Interval*>(k.target) = {real(vals[0]), real(vals[1])};
        break;
    }
    }
}

inline std::string quoted(const std::string& s) { return "\"" + s + "\""; }

inline std::string format_value(const KeyDef& k) {
    switch (k.kind) {
    case Kind::boolean: return *static_cast<const bool*>(k.target) ? "True" : "False";
    case Kind::integer: return std::to_string(*static_cast<const int*>(k.target));
    case Kind::seed: return std::to_string(*static_cast<const std::uint64_t*>(k.target));
    case Kind::real: return fmt_double(*static_cast<const double*>(k.target));
    case Kind::text: return "'" + *static_cast<const std::string*>(k.target) + "'";
    case Kind::path: return quoted(*static_cast<const std::string*>(k.target));
    case Kind::reals: {
        std::vector<std::string> s;
        for (double v : *static_cast<const std::vector<double>*>(k.target)) s.push_back(fmt_double(v));
        return join(s);
    }
    case Kind::integers: {
        std::vector<std::string> s;
        for (int v : *static_cast<const std::vector<int>*>(k.target)) s.push_back(std::to_string(v));
        return join(s);
    }
    case Kind::paths: {
        std::vector<std::string> s;
        for (const auto& v : *static_cast<const std::vector<std::string>*>(k.target)) s.push_back(quoted(v));
        return join(s);
    }
    case Kind::interval: {
        const auto& v = *static_cast<const Interval*>(k.target);
        return fmt_double(v.lo) + " " + fmt_double(v.hi);
    }
    }
    return {};
}

} // namespace detail

// Checks the invariants that span several keys. Messages name the keys.
inline std::vector<std::string> validate_run_config(const RunConfig& c) {
    std::vector<std::string> warnings;
    c.bem.validate();
    c.env.validate();
    c.opt.ga.validate();
    auto req = [](bool ok, const std::string& msg) { BLADEOPT_REQUIRE(ok, ConfigError, msg); };
    req(c.turbine.num_blades >= 1, "NumBlade must be >= 1");
    req(c.turbine.rotor_radius > c.turbine.hub_radius && c.turbine.hub_radius >= 0.0,
        "RotorRad must exceed HubRad >= 0");
    req(std::abs(c.turbine.hub_radius - c.blade.hub_rad) <= 1e-9, "HubRad and HUB_RAD disagree");
    req(c.wind.delta > 0.0 && c.wind.end >= c.wind.start && c.wind.start >= 0.0,
        "WindSt, WindEnd, WindDel must describe an increasing grid");
    req(c.rotor_speed.start == c.rotor_speed.end && c.rotor_speed.start >= 0.0,
        "OmgSt and OmgEnd must be equal: the rotor runs at one fixed speed");
    req(c.rotor_speed.start >= c.blade.min_rot && c.rotor_speed.start <= c.blade.max_rot,
        "rotor speed OmgSt lies outside [MIN_ROT, MAX_ROT]");
    req(c.pitch.start == c.pitch.end, "PitSt and PitEnd must be equal: the blade runs at one fixed pitch");
    req(c.analysis.n_modes >= 0, "N_MODES must be >= 0");
    req(c.analysis.n_elems >= 10, "N_ELEMS must be >= 10");
    req(c.blade.num_sec >= 2, "NUM_SEC must be >= 2");
    req(c.blade.bld_length > 0.0, "BLD_LENGTH must be > 0");
    req(c.blade.elm_spc == 0 || c.blade.elm_spc == 1, "ElmSpc must be 0 or 1");
    c.opt.layout.validate(static_cast<std::size_t>(c.blade.num_sec));
    if (!c.opt.layout.cp_index.empty() &&
        c.opt.layout.cp_index.size() != static_cast<std::size_t>(c.opt.layout.num_cp))
        warnings.push_back("CP_Index lists " + std::to_string(c.opt.layout.cp_index.size()) +
                           " stations but NUM_CP = " + std::to_string(c.opt.layout.num_cp) +
                           "; control points are equally spaced instead");
    req(c.limits.max_tip_deflection >= 0.0, "MaxTipDefl must be >= 0");
    req(c.limits.buckle_alpha > 0.0 && c.limits.buckle_beta > 0.0, "BuckleAlpha and BuckleBeta must be > 0");
    req(c.limits.freq_gap_frac >= 0.0, "FreqGapFrac must be >= 0");
    req(c.limits.safety_factor > 0.0, "SafetyFactor must be > 0");
    req(!c.opt.alphas.empty() && std::find(c.opt.alphas.begin(), c.opt.alphas.end(), 0.0) != c.opt.alphas.end(),
        "Alphas must include 0");
    for (double a : c.opt.alphas) req(a >= 0.0 && a <= 1.0, "Alphas must lie in [0, 1]");
    const auto& bd = c.opt.bounds;
    for (const auto* iv : {&bd.w_cap, &bd.root, &bd.skin, &bd.cap_uni, &bd.cap_core, &bd.lep_core, &bd.tep_core,
                           &bd.web_skin, &bd.web_core})
        req(iv->lo >= 0.0 && iv->lo <= iv->hi, "BND_* bounds need 0 <= lower <= upper");
    req(bd.w_cap.lo > 0.0 && bd.w_cap.hi < 1.0, "BND_W_CAP must lie inside (0, 1)");
    req(!c.files.blade.empty(), "BLADE_FILE is required");
    req(!c.files.materials.empty(), "MATS_FILE is required");
    req(!c.files.polars.empty(), "POLAR_FILES is required");
    if (c.opt.read_initx) req(lower(c.opt.initx_file) != "none", "READ_INITX is set but INITX_FILE is none");
    return warnings;
}

// Line-oriented deck: `<values> <Key>: <comment>`. Keys are matched
// case-insensitively; a line whose first token is not a value and which
// names no key is a section header.
inline ParsedConfig parse_run_config_detailed(const std::filesystem::path& path) {
    ParsedConfig out;
    auto& c = out.config;
    const auto table = detail::key_table(c);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < table.size(); ++i) index[lower(table[i].name)] = i;
    std::map<std::size_t, std::size_t> seen_at;  // key -> line
    const auto base = std::filesystem::absolute(path).parent_path();
    const auto lines = read_lines(path);
    static const std::regex ident("[A-Za-z_][A-Za-z0-9_]*");

    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const auto at = where(path, ln + 1);
        const auto body = trim(lines[ln]);
        if (body.empty() || body[0] == '#' || body[0] == '!') continue;
        const auto tok = tokenize(body);

        // First recognized key after at least one value.
        std::size_t k = 0;
        for (std::size_t i = 1; i < tok.size(); ++i) {
            const auto name = lower(detail::strip_key(tok[i]));
            if (!index.count(name)) continue;
            const bool marked = tok[i].back() == ':' || tok[i].back() == ',';
            const bool values_only = std::all_of(tok.begin(), tok.begin() + static_cast<std::ptrdiff_t>(i),
                                                 [](const std::string& s) { return detail::value_like(s); });
            if (marked || values_only) {
                k = i;
                break;
            }
        }
        if (k == 0) {
            if (auto it = index.find(lower(detail::strip_key(tok[0]))); it != index.end()) {
                // Only list keys may be given empty.
                const auto& def = table[it->second];
                const bool list = def.kind == detail::Kind::reals || def.kind == detail::Kind::integers ||
                                  def.kind == detail::Kind::paths;
                BLADEOPT_REQUIRE(list, ConfigError, at + "key '" + def.name + "' has no value");
                BLADEOPT_REQUIRE(!seen_at.count(it->second), ConfigError, at + "duplicate key '" + def.name + "'");
                seen_at[it->second] = ln + 1;
                detail::assign(def, {}, base, at);
                continue;
            }
            // `value Name:` with an unrecognized name; titles such as
            // `Some words: ...` stay headers.
            for (std::size_t i = 1; i < tok.size(); ++i) {
                const bool values_only = i == 1 || std::all_of(tok.begin(), tok.begin() + static_cast<std::ptrdiff_t>(i),
                                                               [](const std::string& s) { return detail::value_like(s); });
                if (tok[i].back() == ':' && values_only && std::regex_match(detail::strip_key(tok[i]), ident))
                    throw ConfigError(at + "unknown key '" + detail::strip_key(tok[i]) + "' in: " + body);
            }
            if (detail::value_like(tok[0])) {
                std::size_t i = 0;
                while (i < tok.size() && detail::value_like(tok[i])) ++i;
                throw ConfigError(at + "unknown key '" + (i < tok.size() ? detail::strip_key(tok[i]) : "") +
                                  "' in: " + body);
            }
            continue;  // section header
        }

        std::vector<std::size_t> keys{index[lower(detail::strip_key(tok[k]))]};
        for (std::size_t i = k; tok[i].back() == ',' && i + 1 < tok.size(); ++i) {
            const auto name = lower(detail::strip_key(tok[i + 1]));
            BLADEOPT_REQUIRE(index.count(name), ConfigError, at + "unknown key '" + detail::strip_key(tok[i + 1]) + "'");
            keys.push_back(index[name]);
            if (tok[i + 1].back() != ',') break;
        }
        const std::vector<std::string> vals(tok.begin(), tok.begin() + static_cast<std::ptrdiff_t>(k));
        if (keys.size() > 1)
            BLADEOPT_REQUIRE(vals.size() == keys.size(), ConfigError,
                             at + std::to_string(keys.size()) + " keys need as many values, found " +
                                 std::to_string(vals.size()));
        for (std::size_t j = 0; j < keys.size(); ++j) {
            const auto& def = table[keys[j]];
            if (auto it = seen_at.find(keys[j]); it != seen_at.end())
                throw ConfigError(at + "duplicate key '" + def.name + "' (first set on line " +
                                  std::to_string(it->second) + ")");
            seen_at[keys[j]] = ln + 1;
            detail::assign(def, keys.size() > 1 ? std::vector<std::string>{vals[j]} : vals, base, at);
        }
    }
    for (std::size_t i = 0; i < table.size(); ++i)
        if (!seen_at.count(i)) out.defaulted.push_back(table[i].name);
    try {
        out.warnings = validate_run_config(c);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return out;
}

inline RunConfig parse_run_config(const std::filesystem::path& path) { return parse_run_config_detailed(path).config; }

// Every key with its resolved value; keys that took their default are
// marked. Reparsing the echo yields an equal configuration.
inline std::string echo_run_config(const RunConfig& config, const std::vector<std::string>& defaulted = {}) {
    RunConfig c = config;
    std::string s = "# Resolved input deck\n";
    for (const auto& k : detail::key_table(c)) {
        const bool dflt = std::find(defaulted.begin(), defaulted.end(), k.name) != defaulted.end();
        s += detail::format_value(k) + "\t" + k.name + ":\t" + k.help + (dflt ? " [default]" : "") + "\n";
    }
    return s;
}

} // namespace io
} // namespace bladeopt
