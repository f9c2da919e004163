#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "bladeopt/core/numfmt.hpp"
#include "bladeopt/io/config.hpp"
#include "bladeopt/io/inputs.hpp"
#include "bladeopt/io/output.hpp"
#include "bladeopt/io/pipeline.hpp"
#include "support.hpp"

using namespace bladeopt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("bladeopt_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
}

// Copy of the example inputs with some deck lines rewritten.
fs::path copy_example(const std::string& name, const std::vector<std::pair<std::string, std::string>>& edits = {},
                      const std::string& extra = "") {
    const auto d = scratch(name);
    for (const auto& e : fs::directory_iterator(test::data_dir())) fs::copy_file(e.path(), d / e.path().filename());
    auto deck = slurp(d / "example.cfg");
    for (const auto& [from, to] : edits) {
        const auto at = deck.find(from);
        EXPECT_NE(at, std::string::npos) << from;
        if (at != std::string::npos) deck.replace(at, from.size(), to);
    }
    spit(d / "example.cfg", deck + extra);
    return d;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + BLADEOPT_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* kMaterialsHeader = "name,E11,E22,G12,nu12,rho,s11T,s11C,s22T,s22C,t12y\n";

} // namespace

TEST(Config, ExampleDeckValues) {
    const auto c = test::example_config();
    EXPECT_EQ(c.opt.ga.num_gens, 100);
    EXPECT_EQ(c.opt.ga.pop_size, 100);
    EXPECT_EQ(c.opt.ga.ga_tol, 1e-6);
    EXPECT_EQ(c.rotor_speed.start, 80.0);
    EXPECT_EQ(c.rotor_speed.end, 80.0);
    EXPECT_EQ(c.opt.alphas.size(), 11u);
    EXPECT_EQ(c.files.polars.size(), 4u);
    EXPECT_TRUE(fs::path(c.files.blade).is_absolute());
    EXPECT_TRUE(fs::exists(c.files.materials));
}

TEST(Config, EchoReparsesToTheSameConfig) {
    const auto d = scratch("echo");
    const auto parsed = io::parse_run_config_detailed(test::data_dir() / "example.cfg");
    spit(d / "echo.cfg", io::echo_run_config(parsed.config, parsed.defaulted));
    const auto again = io::parse_run_config(d / "echo.cfg");
    EXPECT_TRUE(again == parsed.config);
    // A second echo is byte-identical.
    EXPECT_EQ(io::echo_run_config(again), io::echo_run_config(parsed.config));
}

TEST(Config, UnknownKeyIsRejected) {
    const auto d = copy_example("unknown", {}, "1\tBogus:\tnot a key\n");
    try {
        io::parse_run_config(d / "example.cfg");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("unknown key"), std::string::npos) << e.what();
    }
}

TEST(Config, DuplicateKeyIsRejected) {
    const auto d = copy_example("duplicate", {}, "50\tNumGens\tagain\n");
    EXPECT_THROW(io::parse_run_config(d / "example.cfg"), ConfigError);
}

TEST(Config, MissingFileIsConfigError) {
    EXPECT_THROW(io::parse_run_config(test::data_dir() / "no_such.cfg"), ConfigError);
}

TEST(Materials, ExampleRows) {
    const auto mats = io::parse_materials(test::data_dir() / "materials.csv");
    ASSERT_EQ(mats.size(), 8u);
    const auto& m = mats.front();
    EXPECT_EQ(m.name, "blade-root");
    EXPECT_EQ(m.E11, 2.8e10);
    EXPECT_EQ(m.E22, 1.4e10);
    EXPECT_EQ(m.G12, 7e9);
    EXPECT_EQ(m.nu12, 0.4);
    EXPECT_EQ(m.rho, 1850.0);
    EXPECT_EQ(m.strength.s11_tension, 6e8);
}

TEST(Materials, RejectsUnphysicalPoisson) {
    const auto d = scratch("mat_nu");
    spit(d / "m.csv", std::string(kMaterialsHeader) + "x,2.8e10,1.4e10,7e9,0.6,1850,6e8,4e8,4e7,1.2e8,5e7\n");
    EXPECT_THROW(io::parse_materials(d / "m.csv"), ConfigError);
}

TEST(Materials, StrengthsRequired) {
    const auto d = scratch("mat_strength");
    spit(d / "m.csv", std::string(kMaterialsHeader) + "x,2.8e10,1.4e10,7e9,0.3,1850,6e8,,4e7,1.2e8,5e7\n");
    try {
        io::parse_materials(d / "m.csv");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("strengths required"), std::string::npos) << e.what();
    }
    spit(d / "n.csv", "name,E11,E22,G12,nu12,rho\nx,2.8e10,1.4e10,7e9,0.3,1850\n");
    EXPECT_THROW(io::parse_materials(d / "n.csv"), ConfigError);
}

TEST(Inputs, ExamplePolarsAndDesign) {
    const auto c = test::example_config();
    for (const auto& p : c.files.polars) EXPECT_NO_THROW(io::parse_polar_file(p)) << p;
    const auto blade = load_blade(c);
    EXPECT_EQ(blade.stations.size(), static_cast<std::size_t>(c.blade.num_sec));
    const auto x = io::parse_design_file(c.opt.initx_file);
    EXPECT_EQ(x.size(), c.opt.layout.vector_size());
}

TEST(Inputs, MalformedPolarRow) {
    const auto d = scratch("polar");
    spit(d / "bad.dat", "# alpha cl cd\n0 0.5\n");
    EXPECT_THROW(io::parse_polar_file(d / "bad.dat"), ConfigError);
}

TEST(Output, NumbersRoundTrip) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 10000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        ASSERT_EQ(*parse_double(fmt_double(v)), v);
    }
    EXPECT_EQ(*parse_double(fmt_double(0.1)), 0.1);
}

TEST(Output, FrontFileOrderedByMass) {
    const auto d = scratch("front");
    io::write_front_dat(d / "empty.dat", {});
    EXPECT_EQ(slurp(d / "empty.dat"), "# mass_kg aep_kWh\n");
    std::vector<ParetoPoint> pts(3);
    pts[0].mass = 300.0, pts[0].aep = 3e5;
    pts[1].mass = 100.0, pts[1].aep = 1e5;
    pts[2].mass = 200.0, pts[2].aep = 2.5e5;
    io::write_front_dat(d / "three.dat", pts);
    EXPECT_EQ(slurp(d / "three.dat"), "# mass_kg aep_kWh\n100 1e+05\n200 250000\n300 3e+05\n");
}

TEST(Output, DesignFileRoundTrip) {
    const auto d = scratch("design");
    const std::vector<double> x{0.25, 0.1 + 0.2, 1e-3 / 3.0, 0.0};
    io::write_design_csv(d / "x.csv", x);
    EXPECT_EQ(io::parse_design_file(d / "x.csv"), x);
}

TEST(Cli, BadConfigExitsWithTwo) {
    const auto d = copy_example("cli_bad", {}, "1\tBogus:\tx\n");
    EXPECT_EQ(run_cli("--config \"" + (d / "example.cfg").string() + "\" --out \"" + (d / "o").string() + "\" aero"), 2);
}

TEST(Cli, AeroWritesPerformance) {
    const auto d = copy_example("cli_aero");
    const auto out = d / "o";
    ASSERT_EQ(run_cli("--config \"" + (d / "example.cfg").string() + "\" --out \"" + out.string() + "\" aero"), 0);
    EXPECT_TRUE(fs::exists(out / "performance.csv"));
}

TEST(Cli, OptimizeRerunIsByteIdentical) {
    const auto d = copy_example("cli_rerun", {{"100\tNumGens", "3\tNumGens"}, {"100\tPopSize", "6\tPopSize"}});
    const std::string deck = "--config \"" + (d / "example.cfg").string() + "\"";
    const std::string tail = " optimize --alpha 0.5 --m0 100 --aep0 200000";
    ASSERT_EQ(run_cli(deck + " --out \"" + (d / "a").string() + "\"" + tail), 0);
    ASSERT_EQ(run_cli(deck + " --out \"" + (d / "b").string() + "\"" + tail), 0);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(d / "a")) {
        const auto other = d / "b" / e.path().filename();
        ASSERT_TRUE(fs::exists(other)) << other;
        EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path().filename();
        ++files;
    }
    EXPECT_GT(files, 0u);
}
