#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bladeopt/aero/energy.hpp"
#include "bladeopt/core/error.hpp"
#include "bladeopt/core/numfmt.hpp"
#include "bladeopt/io/config.hpp"
#include "bladeopt/io/inputs.hpp"
#include "bladeopt/io/output.hpp"
#include "bladeopt/io/pipeline.hpp"
#include "bladeopt/io/text.hpp"
#include "bladeopt/moo/dominance.hpp"
#include "bladeopt/moo/pareto.hpp"

namespace fs = std::filesystem;
using namespace bladeopt;

namespace {

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    int threads = 1;
};

RunConfig load(const Globals& g) {
    BLADEOPT_REQUIRE(!g.config.empty(), ConfigError, "--config is required");
    auto parsed = io::parse_run_config_detailed(g.config);
    for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << '\n';
    auto c = parsed.config;
    if (g.seed) c.opt.ga.seed = *g.seed;
    c.opt.ga.threads = g.threads;
    if (c.input.echo) {
        fs::create_directories(g.out);
        const auto p = fs::path(g.out) / (fs::path(g.config).stem().string() + ".ech");
        std::ofstream f(p, std::ios::binary);
        BLADEOPT_REQUIRE(f, ConfigError, "cannot write '" + p.string() + "'");
        f << io::echo_run_config(c, parsed.defaulted);
    }
    return c;
}

std::vector<double> load_design(const RunConfig& c, const std::string& path) {
    if (!path.empty()) return io::parse_design_file(path);
    BLADEOPT_REQUIRE(c.opt.read_initx && c.opt.initx_file != "none", ConfigError,
                     "no design given: pass --design or set READ_INITX with INITX_FILE");
    return io::parse_design_file(c.opt.initx_file);
}

fs::path out_file(const Globals& g, const std::string& name) { return fs::path(g.out) / name; }

void print(const std::string& key, double v) { std::cout << key << ' ' << fmt_double(v) << '\n'; }

int run_aero(const Globals& g) {
    const auto c = load(g);
    const auto rotor = make_rotor(c);
    const auto s = evaluation_settings(c);
    std::vector<PowerCurvePoint> curve;
    std::vector<RotorPerformance> bed;
    for (double v : s.wind_speeds) {
        if (v < s.env.v_cut_in || v > s.env.v_cut_out) {
            curve.push_back({v, 0, 0, 0, 0, 0, true});
            continue;
        }
        OperatingPoint op = s.op;
        op.wind_speed = v;
        bed.push_back(rotor_performance(rotor, op, s.env, s.bem));
        curve.push_back(to_curve_point(bed.back()));
    }
    io::write_performance_csv(out_file(g, "performance.csv"), curve);
    if (c.output.write_bed) io::write_bed_csv(out_file(g, "bed.csv"), bed, rotor.blade);
    int failed = 0;
    for (const auto& p : bed) failed += p.failed_annuli;
    print("aep_kWh", annual_energy(curve, s.env));
    std::cout << "unconverged_annuli " << failed << '\n';
    return 0;
}

int run_structure(const Globals& g, const std::string& design) {
    const auto c = load(g);
    const auto ev = make_evaluator(c);
    const auto r = ev->evaluate(load_design(c, design));
    io::write_structure_csv(out_file(g, "structure.csv"), r);
    io::write_structure_summary(out_file(g, "structure_summary.csv"), r);
    print("mass_kg", r.mass);
    print("tip_deflection_m", r.response.beam.tip_deflection);
    return 0;
}

int run_evaluate(const Globals& g, const std::string& design, double alpha, double m0, double aep0) {
    const auto c = load(g);
    const auto ev = make_evaluator(c);
    const auto x = load_design(c, design);
    const auto r = ev->evaluate(x);
    const double fitness = scalarized_fitness(r.penalized_mass, r.aep, {alpha, m0, aep0});
    {
        io::CsvWriter w(out_file(g, "penalties.csv"));
        w.line(io::kPenaltyHeader);
        io::write_penalty_row(w, 0, r.mass, r.penalties.p, fitness);
    }
    io::write_performance_csv(out_file(g, "performance.csv"), r.curve);
    print("mass_kg", r.mass);
    for (std::size_t i = 0; i < 8; ++i) print("p" + std::to_string(i + 1), r.penalties.p[i]);
    print("penalized_mass_kg", r.penalized_mass);
    print("aep_kWh", r.aep);
    print("fitness", fitness);
    std::cout << "feasible " << (r.feasible() ? 1 : 0) << '\n';
    return 0;
}

// Per-evaluation logs requested by WRITE_F_ALL / WRITE_X_ALL. Rows carry a
// running id; with more than one thread the row order follows completion.
class EvaluationLog {
public:
    EvaluationLog(const Globals& g, const RunConfig& c, const std::string& tag) {
        if (c.opt.write_f_all) {
            f_.emplace(out_file(g, "evals_" + tag + ".csv"));
            f_->line(io::kPenaltyHeader);
        }
        if (c.opt.write_x_all) {
            x_.emplace(out_file(g, "evals_x_" + tag + ".csv"));
            std::string h = "eval_id";
            for (std::size_t j = 0; j < c.opt.layout.vector_size(); ++j) h += ",x" + std::to_string(j + 1);
            x_->line(h);
        }
    }

    bool active() const { return f_ || x_; }

    void add(const std::vector<double>& x, const DesignObjectives& d, double fitness) {
        std::lock_guard lock(mu_);
        const long long id = next_++;
        if (f_) io::write_penalty_row(*f_, id, d.mass, d.penalties, fitness);
        if (x_) {
            x_->cell(id);
            for (double v : x) x_->cell(v);
            x_->end_row();
        }
    }

private:
    std::optional<io::CsvWriter> f_, x_;
    std::mutex mu_;
    long long next_ = 0;
};

void write_run(const Globals& g, const RunConfig& c, const AlphaRun& run, const std::string& tag) {
    io::write_history_csv(out_file(g, "history_" + tag + ".csv"), run.ga.history);
    io::write_design_csv(out_file(g, "best_x_" + tag + ".csv"), run.best.x);
    if (c.opt.write_x_iter) {
        io::CsvWriter w(out_file(g, "iter_x_" + tag + ".csv"));
        std::string h = "gen";
        for (std::size_t j = 0; j < run.best.x.size(); ++j) h += ",x" + std::to_string(j + 1);
        w.line(h);
        for (const auto& s : run.ga.history) {
            w.cell(s.gen);
            for (double v : s.best_x) w.cell(v);
            w.end_row();
        }
    }
}

std::string alpha_tag(std::size_t k, double alpha) { return std::to_string(k) + "_a" + fmt_double(alpha); }

int run_optimize(const Globals& g, double alpha, std::optional<double> m0, std::optional<double> aep0) {
    const auto c = load(g);
    const auto ev = make_evaluator(c);
    const auto bounds = design_bounds(c.opt.bounds, c.opt.layout);
    const auto cons = taper_constraints(c.opt.layout);
    EvaluationLog log(g, c, "a" + fmt_double(alpha));
    FitnessConfig fc{alpha, m0.value_or(1.0), aep0.value_or(1.0)};
    DesignEvaluator eval = [&](const std::vector<double>& x) {
        auto d = ev->objectives(x);
        if (log.active()) log.add(x, d, scalarized_fitness(d.mass, d.aep, fc));
        return d;
    };

    AlphaRun run;
    if (alpha == 0.0 || (m0 && aep0)) {
        // References given (or not needed): a single GA run.
        auto fn = [&](const std::vector<double>& x) {
            const auto d = eval(x);
            return Evaluation{scalarized_fitness(d.mass, d.aep, fc), {d.mass, d.aep, d.penalties, d.feasible}};
        };
        run.alpha = alpha;
        run.ga = ga_minimize(fn, bounds, cons, c.opt.ga);
        const auto& b = run.ga.best;
        run.best = {alpha, b.aux.mass, b.aux.aep, b.fitness, b.x, b.aux.feasible};
    } else {
        // The references come from an alpha = 0 run first.
        BLADEOPT_REQUIRE(!m0 && !aep0, ConfigError, "--m0 and --aep0 must be given together");
        const auto sweep = pareto_sweep({0.0, alpha}, eval, bounds, cons, c.opt.ga);
        fc = {alpha, sweep.M0, sweep.AEP0};
        run = sweep.runs.back();
        print("M0", sweep.M0);
        print("AEP0", sweep.AEP0);
    }
    write_run(g, c, run, "a" + fmt_double(alpha));
    io::write_points_csv(out_file(g, "best.csv"), {run.best});
    print("alpha", alpha);
    print("mass_kg", run.best.mass);
    print("aep_kWh", run.best.aep);
    print("fitness", run.best.fitness);
    std::cout << "generations " << run.ga.history.size() << "\nevaluations " << run.ga.evaluations << '\n';
    return 0;
}

int run_pareto(const Globals& g) {
    const auto c = load(g);
    const auto ev = make_evaluator(c);
    const auto bounds = design_bounds(c.opt.bounds, c.opt.layout);
    const auto cons = taper_constraints(c.opt.layout);
    EvaluationLog log(g, c, "sweep");
    DesignEvaluator eval = [&](const std::vector<double>& x) {
        auto d = ev->objectives(x);
        if (log.active()) log.add(x, d, std::numeric_limits<double>::quiet_NaN());
        return d;
    };
    std::size_t k = 0;
    const auto sweep = pareto_sweep(c.opt.alphas, eval, bounds, cons, c.opt.ga, [&](const AlphaRun& r) {
        write_run(g, c, r, alpha_tag(k++, r.alpha));
        std::cerr << "alpha " << fmt_double(r.alpha) << ": mass " << fmt_double(r.best.mass) << " aep "
                  << fmt_double(r.best.aep) << '\n';
    });
    std::vector<ParetoPoint> bests;
    for (const auto& r : sweep.runs) bests.push_back(r.best);
    io::write_points_csv(out_file(g, "bests.csv"), bests);
    io::write_points_csv(out_file(g, "front.csv"), sweep.front);
    io::write_points_x_csv(out_file(g, "front_x.csv"), sweep.front);
    io::write_front_dat(out_file(g, "front.dat"), sweep.front);
    print("M0", sweep.M0);
    print("AEP0", sweep.AEP0);
    std::cout << "front_points " << sweep.front.size() << '\n';
    return 0;
}

int run_front(const Globals& g, const std::string& input, const std::string& senses_arg) {
    const auto lines = io::read_lines(input);
    std::vector<std::string> rows;
    std::optional<std::vector<std::string>> header;
    for (const auto& l : lines) {
        const auto t = io::trim(l);
        if (t.empty() || t[0] == '#') continue;
        if (!header) {
            header = io::split_csv(t);
            continue;
        }
        rows.push_back(t);
    }
    BLADEOPT_REQUIRE(header, ConfigError, "'" + input + "' has no header row");
    const auto& h = *header;

    // Columns and senses: explicit `col:min,col:max,...`, else mass/AEP when
    // present, else every column minimized.
    std::vector<std::size_t> cols;
    std::vector<Sense> senses;
    auto column = [&](const std::string& name) {
        auto it = std::find(h.begin(), h.end(), name);
        BLADEOPT_REQUIRE(it != h.end(), ConfigError, "'" + input + "' has no column '" + name + "'");
        return static_cast<std::size_t>(it - h.begin());
    };
    if (!senses_arg.empty()) {
        for (const auto& item : io::split_csv(senses_arg)) {
            const auto colon = item.rfind(':');
            BLADEOPT_REQUIRE(colon != std::string::npos, ConfigError, "--senses expects column:min|max, got '" + item + "'");
            const auto s = io::lower(item.substr(colon + 1));
            BLADEOPT_REQUIRE(s == "min" || s == "max", ConfigError, "--senses: '" + s + "' is not min or max");
            cols.push_back(column(item.substr(0, colon)));
            senses.push_back(s == "min" ? Sense::minimize : Sense::maximize);
        }
    } else if (std::count(h.begin(), h.end(), "mass_kg") && std::count(h.begin(), h.end(), "aep_kWh")) {
        cols = {column("mass_kg"), column("aep_kWh")};
        senses = {Sense::minimize, Sense::maximize};
    } else {
        for (std::size_t j = 0; j < h.size(); ++j) {
            cols.push_back(j);
            senses.push_back(Sense::minimize);
        }
    }

    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto f = io::split_csv(rows[i]);
        BLADEOPT_REQUIRE(f.size() == h.size(), ConfigError,
                         "'" + input + "': data row " + std::to_string(i + 1) + " has " + std::to_string(f.size()) +
                             " fields, header has " + std::to_string(h.size()));
        std::vector<double> p;
        for (auto j : cols) {
            const auto v = parse_double(io::trim(f[j]));
            BLADEOPT_REQUIRE(v, ConfigError,
                             "'" + input + "': data row " + std::to_string(i + 1) + ": '" + f[j] + "' is not a number");
            p.push_back(*v);
        }
        pts.push_back(std::move(p));
    }
    std::vector<std::size_t> keep;
    if (!pts.empty()) keep = nondominated_filter(pts, senses);
    io::CsvWriter w(out_file(g, "front_filtered.csv"));
    std::string hl;
    for (std::size_t j = 0; j < h.size(); ++j) hl += (j ? "," : "") + h[j];
    w.line(hl);
    for (auto i : keep) w.line(rows[i]);
    std::cout << "rows " << rows.size() << "\nfront_points " << keep.size() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-objective layup optimization of wind-turbine blades (mass vs. annual energy)"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "Run configuration deck");
    app.add_option("--seed", g.seed, "Override the GA seed");
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--threads", g.threads, "Evaluation threads per generation")->capture_default_str()->check(
        CLI::PositiveNumber);

    std::string design;
    double alpha = 1.0, m0 = 1.0, aep0 = 1.0;
    std::optional<double> opt_m0, opt_aep0;
    std::string input, senses;

    auto* aero = app.add_subcommand("aero", "Rigid power curve and AEP");
    auto* structure = app.add_subcommand("structure", "Structural report for one design vector");
    structure->add_option("--design", design, "Design vector file (default: INITX_FILE)");
    auto* evaluate = app.add_subcommand("evaluate", "Penalized mass, AEP and fitness of one design vector");
    evaluate->add_option("--design", design, "Design vector file (default: INITX_FILE)");
    evaluate->add_option("--alpha", alpha, "Weight of the mass objective")->capture_default_str()->check(
        CLI::Range(0.0, 1.0));
    evaluate->add_option("--m0", m0, "Reference mass [kg]")->capture_default_str();
    evaluate->add_option("--aep0", aep0, "Reference AEP [kWh/yr]")->capture_default_str();
    auto* optimize = app.add_subcommand("optimize", "Single GA run at one alpha");
    optimize->add_option("--alpha", alpha, "Weight of the mass objective")->required()->check(CLI::Range(0.0, 1.0));
    optimize->add_option("--m0", opt_m0, "Reference mass [kg]; with --aep0 skips the alpha = 0 reference run");
    optimize->add_option("--aep0", opt_aep0, "Reference AEP [kWh/yr]");
    auto* pareto = app.add_subcommand("pareto", "Alpha sweep and Pareto front");
    auto* front = app.add_subcommand("front", "Non-dominated rows of an objectives CSV");
    front->add_option("--input", input, "CSV with a header row")->required();
    front->add_option("--senses", senses, "Objectives as column:min|max,... (default mass_kg:min,aep_kWh:max)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*aero) return run_aero(g);
        if (*structure) return run_structure(g, design);
        if (*evaluate) return run_evaluate(g, design, alpha, m0, aep0);
        if (*optimize) return run_optimize(g, alpha, opt_m0, opt_aep0);
        if (*pareto) return run_pareto(g);
        if (*front) return run_front(g, input, senses);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
