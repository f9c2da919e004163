#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "bladeopt/aero/bem.hpp"
#include "bladeopt/core/error.hpp"
#include "bladeopt/core/numfmt.hpp"
#include "bladeopt/moo/ga.hpp"
#include "bladeopt/moo/pareto.hpp"
#include "bladeopt/objectives/evaluator.hpp"

namespace bladeopt::io {

// Comma-separated rows; every double goes through fmt_double so values
// round-trip exactly.
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& p) : path_(p) {
        std::error_code ec;
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
        out_.open(p, std::ios::binary);
        BLADEOPT_REQUIRE(out_, ConfigError, "cannot write '" + p.string() + "'");
    }

    CsvWriter& cell(double v) { return raw(fmt_double(v)); }
    CsvWriter& cell(long long v) { return raw(std::to_string(v)); }
    CsvWriter& cell(int v) { return raw(std::to_string(v)); }
    CsvWriter& cell(const std::string& s) { return raw(s); }
    CsvWriter& cell(const char* s) { return raw(s); }
    CsvWriter& cell(bool b) { return raw(b ? "1" : "0"); }
    CsvWriter& line(const std::string& s) {
        out_ << s << '\n';
        return *this;
    }
    void end_row() {
        out_ << '\n';
        first_ = true;
    }
    void flush() { out_.flush(); }
    ~CsvWriter() {
        if (!first_) out_ << '\n';
    }

private:
    CsvWriter& raw(const std::string& s) {
        if (!first_) out_ << ',';
        out_ << s;
        first_ = false;
        return *this;
    }

    std::filesystem::path path_;
    std::ofstream out_;
    bool first_ = true;
};

inline void write_performance_csv(const std::filesystem::path& p, const std::vector<PowerCurvePoint>& curve) {
    CsvWriter w(p);
    w.line("V_mps,P_kW,Cp,thrust_kN,torque_kNm,root_flap_kNm");
    for (const auto& c : curve) {
        w.cell(c.wind_speed).cell(c.power / 1e3).cell(c.cp).cell(c.thrust / 1e3).cell(c.torque / 1e3)
            .cell(c.root_flap_moment / 1e3);
        w.end_row();
    }
}

// Blade-element data, one row per station and wind speed.
inline void write_bed_csv(const std::filesystem::path& p, const std::vector<RotorPerformance>& perf,
                          const BladeDefinition& blade) {
    CsvWriter w(p);
    w.line("V_mps,r_m,a,a_prime,phi_deg,alpha_deg,Cl,Cd,Cm,F,W_mps,dT_dr_N_per_m,dQ_dr_Nm_per_m,converged,"
           "iterations,residual");
    for (const auto& rp : perf)
        for (std::size_t i = 0; i < rp.annuli.size(); ++i) {
            const auto& a = rp.annuli[i];
            w.cell(rp.wind_speed).cell(blade.stations[i].radius_m).cell(a.a).cell(a.a_prime)
                .cell(a.phi * 180.0 / std::numbers::pi).cell(a.alpha).cell(a.cl).cell(a.cd).cell(a.cm).cell(a.F)
                .cell(a.w).cell(a.dT_dr).cell(a.dQ_dr).cell(a.converged).cell(a.iterations).cell(a.residual);
            w.end_row();
        }
}

inline void write_structure_csv(const std::filesystem::path& p, const DesignReport& r) {
    CsvWriter w(p);
    w.line("r_m,mass_per_m,EA,EI_flap,EI_edge,GJ,sigma_zz_max,tau_zs_max");
    const auto& st = r.structure->stations();
    for (std::size_t i = 0; i < st.size(); ++i) {
        const auto& b = st[i].beam;
        const auto& s = r.response.stations[i];
        w.cell(st[i].radius).cell(st[i].props.mass_per_length).cell(st[i].props.EA).cell(b.EI_flap())
            .cell(b.EI_edge()).cell(st[i].props.GJ).cell(s.sigma_zz_max).cell(s.tau_zs_max);
        w.end_row();
    }
}

inline void write_structure_summary(const std::filesystem::path& p, const DesignReport& r) {
    CsvWriter w(p);
    w.line("quantity,value");
    w.cell("mass_kg").cell(r.mass).end_row();
    w.cell("tip_deflection_m").cell(r.response.beam.tip_deflection).end_row();
    w.cell("design_wind_speed_mps").cell(r.design_wind_speed).end_row();
    for (std::size_t k = 0; k < std::min<std::size_t>(3, r.modes.flap.size()); ++k)
        w.cell("flap_freq_" + std::to_string(k + 1) + "_Hz").cell(r.modes.flap[k] / (2.0 * std::numbers::pi)).end_row();
    for (std::size_t k = 0; k < std::min<std::size_t>(3, r.modes.edge.size()); ++k)
        w.cell("edge_freq_" + std::to_string(k + 1) + "_Hz").cell(r.modes.edge[k] / (2.0 * std::numbers::pi)).end_row();
}

inline const char* kPenaltyHeader = "eval_id,mass,p1,p2,p3,p4,p5,p6,p7,p8,fitness";

inline void write_penalty_row(CsvWriter& w, long long id, double mass, const std::array<double, 8>& p, double fitness) {
    w.cell(id).cell(mass);
    for (double v : p) w.cell(v);
    w.cell(fitness);
    w.end_row();
}

inline void write_history_csv(const std::filesystem::path& p, const std::vector<GenerationStats>& h) {
    CsvWriter w(p);
    w.line("gen,best_fitness,mean_fitness");
    for (const auto& g : h) w.cell(g.gen).cell(g.best_fitness).cell(g.mean_fitness).end_row();
}

inline void write_points_csv(const std::filesystem::path& p, const std::vector<ParetoPoint>& pts) {
    CsvWriter w(p);
    w.line("alpha,mass_kg,aep_kWh,fitness,feasible");
    for (const auto& q : pts) w.cell(q.alpha).cell(q.mass).cell(q.aep).cell(q.fitness).cell(q.feasible).end_row();
}

inline void write_points_x_csv(const std::filesystem::path& p, const std::vector<ParetoPoint>& pts) {
    CsvWriter w(p);
    std::size_t n = 0;
    for (const auto& q : pts) n = std::max(n, q.x.size());
    std::string h = "alpha";
    for (std::size_t j = 0; j < n; ++j) h += ",x" + std::to_string(j + 1);
    w.line(h);
    for (const auto& q : pts) {
        w.cell(q.alpha);
        for (double v : q.x) w.cell(v);
        w.end_row();
    }
}

// Two whitespace-separated columns sorted by mass, for direct plotting.
inline void write_front_dat(const std::filesystem::path& p, std::vector<ParetoPoint> pts) {
    std::stable_sort(pts.begin(), pts.end(), [](const ParetoPoint& a, const ParetoPoint& b) { return a.mass < b.mass; });
    CsvWriter w(p);
    w.line("# mass_kg aep_kWh");
    for (const auto& q : pts) w.line(fmt_double(q.mass) + " " + fmt_double(q.aep));
}

inline void write_design_csv(const std::filesystem::path& p, const std::vector<double>& x) {
    CsvWriter w(p);
    w.line("# flat design vector");
    for (double v : x) w.line(fmt_double(v));
}

} // namespace bladeopt::io
