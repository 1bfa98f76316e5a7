#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "experiments.hpp"
#include "output.hpp"

namespace fs = std::filesystem;
using namespace opexp::cli;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::vector<std::string>* header = nullptr)
{
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    if (header != nullptr) {
        std::stringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) {
            header->push_back(cell);
        }
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) {
            row.push_back(std::stod(cell));
        }
        rows.push_back(row);
    }
    return rows;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("opexp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        unsetenv("OPEXP_OUT_DIR");
    }
    void TearDown() override
    {
        unsetenv("OPEXP_OUT_DIR");
        fs::remove_all(dir_);
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

} // namespace

TEST(Format, ShortestRoundTrip)
{
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(3.0), "3");
    EXPECT_EQ(format_double(-0.0), "0");
    EXPECT_EQ(format_double(1e-20), "1e-20");
    const double x = 0.1 + 0.2;
    EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Registry, PresetsResolveAndValidate)
{
    for (const auto& def : registry()) {
        EXPECT_NO_THROW(validate(base_spec(def, ""), def)) << def.name;
        for (const auto& [name, _] : def.presets) {
            EXPECT_NO_THROW(validate(base_spec(def, name), def)) << def.name << " " << name;
        }
    }
    EXPECT_THROW(find_experiment("nope"), UsageError);
    EXPECT_THROW(base_spec(find_experiment("decay-thermal"), "fig1a"), UsageError);
    const ExperimentSpec fig1b = base_spec(find_experiment("decay-coherent"), "fig1b");
    EXPECT_EQ(fig1b.parameters.at("alpha"), 4.0);
    EXPECT_EQ(fig1b.parameters.at("gamma"), 0.9);
}

TEST(Registry, SchemaViolations)
{
    const ExperimentDef& def = find_experiment("decay-coherent");
    ExperimentSpec spec = base_spec(def, "fig1a");
    spec.parameters["steps"] = 2.5;
    EXPECT_THROW(validate(spec, def), UsageError);
    spec = base_spec(def, "fig1a");
    spec.parameters["bogus"] = 1.0;
    EXPECT_THROW(validate(spec, def), UsageError);
    spec = base_spec(def, "fig1a");
    spec.parameters["gamma"] = -1.0;
    EXPECT_THROW(validate(spec, def), UsageError);
}

TEST_F(CliTest, DecayCoherentFig1a)
{
    const CliRun r = run({"decay-coherent", "--preset", "fig1a", "--out", path("c.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    std::vector<std::string> header;
    const auto rows = read_csv(path("c.csv"), &header);
    EXPECT_EQ(header, (std::vector<std::string>{"t", "nbar_analytic", "nbar_rk4"}));
    ASSERT_EQ(rows.size(), 101u);
    EXPECT_NEAR(rows[0][1], 9.0, 1e-12);
    EXPECT_NEAR(rows[0][2], 9.0, 1e-12);
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        worst = std::max(worst, std::abs(rows[i][1] - rows[i][2]));
        if (i > 0) {
            EXPECT_LT(rows[i][1], rows[i - 1][1]);
        }
    }
    EXPECT_LT(worst, 1e-3);
    EXPECT_TRUE(fs::exists(path("c.csv.manifest.json")));
}

TEST_F(CliTest, DecayThermalHalfLife)
{
    for (auto [preset, nbar0, gamma] : {std::tuple{"fig2a", 3.0, 0.45}, std::tuple{"fig2b", 2.0, 0.6}}) {
        const CliRun r = run({"decay-thermal", "--preset", preset, "--out", path("t.csv")});
        ASSERT_EQ(r.code, 0) << r.err;
        const auto rows = read_csv(path("t.csv"));
        EXPECT_NEAR(rows[0][1], nbar0, 1e-15);
        double worst = 0.0;
        double t_half = -1.0;
        for (const auto& row : rows) {
            worst = std::max(worst, std::abs(row[1] - row[2]));
            if (t_half < 0.0 && row[2] <= nbar0 / 2.0) {
                t_half = row[0];
            }
        }
        EXPECT_LT(worst, 1e-4);
        const double spacing = rows[1][0] - rows[0][0];
        EXPECT_NEAR(t_half, (nbar0 + 1.0) * std::log(2.0) / (2.0 * gamma), spacing) << preset;
    }
}

TEST_F(CliTest, LatticeContinuumFig3b)
{
    const CliRun r = run({"lattice-continuum", "--preset", "fig3b", "--out", path("p.csv"), "--z_steps", "20"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_csv(path("p.csv"));
    ASSERT_EQ(rows.size(), 21u * 1201u);
    for (const auto& row : rows) {
        if (row[1] == 0.0) {
            EXPECT_LT(row[2], 1e-6);
        }
    }
}

TEST_F(CliTest, LatticeWaveguidesInitialRows)
{
    ASSERT_EQ(run({"lattice-waveguides", "--preset", "fig4a", "--z_steps", "2", "--out", path("a.csv")}).code, 0);
    auto rows = read_csv(path("a.csv"));
    for (std::size_t m = 0; m <= 80; ++m) {
        EXPECT_NEAR(rows[m][2], m == 3 ? 1.0 : 0.0, 1e-8);
    }
    ASSERT_EQ(run({"lattice-waveguides", "--preset", "fig4b", "--z_steps", "2", "--out", path("b.csv")}).code, 0);
    rows = read_csv(path("b.csv"));
    EXPECT_NEAR(rows[3][2], 0.5, 1e-8);
    EXPECT_NEAR(rows[6][2], 0.5, 1e-8);
    ASSERT_EQ(run({"lattice-waveguides", "--preset", "fig4c", "--z_steps", "2", "--out", path("c.csv")}).code, 0);
    rows = read_csv(path("c.csv"));
    double mean = 0.0;
    for (std::size_t m = 0; m <= 100; ++m) {
        EXPECT_EQ(rows[m][0], 0.0);
        mean += rows[m][1] * rows[m][2];
    }
    EXPECT_NEAR(mean, 40.0, 0.5);
}

TEST_F(CliTest, JsonSchemaAndDeterminism)
{
    const std::vector<std::string> base{"decay-coherent", "--preset", "fig1b", "--steps", "20", "--format", "json"};
    auto a = base;
    a.insert(a.end(), {"--out", path("a.json")});
    auto b = base;
    b.insert(b.end(), {"--out", path("b.json"), "--threads", "3"});
    ASSERT_EQ(run(a).code, 0);
    ASSERT_EQ(run(b).code, 0);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    const auto j = nlohmann::json::parse(slurp(path("a.json")));
    EXPECT_EQ(j.at("manifest").at("experiment"), "decay-coherent");
    EXPECT_EQ(j.at("manifest").at("preset"), "fig1b");
    EXPECT_TRUE(j.at("manifest").at("tolerance_report").contains("max_abs_analytic_minus_rk4"));
    EXPECT_EQ(j.at("columns").size(), 3u);
    EXPECT_EQ(j.at("rows").size(), 21u);
    const auto m = nlohmann::json::parse(slurp(path("a.json.manifest.json")));
    EXPECT_TRUE(m.contains("wall_seconds"));
    EXPECT_EQ(m.at("threads"), 1);
}

TEST_F(CliTest, ConfigFileUnderFlags)
{
    {
        std::ofstream cfg(path("run.cfg"));
        cfg << "# recipe\nalpha = 2\nsteps=4\n";
    }
    ASSERT_EQ(run({"decay-coherent", "--preset", "fig1a", "--config", path("run.cfg"), "--steps", "2",
                   "--out", path("o.csv")})
                  .code,
              0);
    const auto rows = read_csv(path("o.csv"));
    EXPECT_EQ(rows.size(), 3u);
    EXPECT_NEAR(rows[0][1], 4.0, 1e-12);
    {
        std::ofstream cfg(path("bad.cfg"));
        cfg << "bogus = 1\n";
    }
    EXPECT_EQ(run({"decay-coherent", "--config", path("bad.cfg"), "--out", path("x.csv")}).code, 2);
    EXPECT_EQ(run({"decay-coherent", "--config", path("missing.cfg"), "--out", path("x.csv")}).code, 2);
}

TEST_F(CliTest, OutDirEnvironment)
{
    setenv("OPEXP_OUT_DIR", dir_.c_str(), 1);
    ASSERT_EQ(run({"decay-thermal", "--preset", "fig2b", "--steps", "3"}).code, 0);
    EXPECT_TRUE(fs::exists(dir_ / "decay-thermal-fig2b.csv"));
    ASSERT_EQ(run({"decay-thermal", "--steps", "3", "--out", "nested/t.csv"}).code, 0);
    EXPECT_TRUE(fs::exists(dir_ / "nested" / "t.csv"));
}

TEST_F(CliTest, ExitCodes)
{
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"decay-coherent", "--alpha", "-1", "--out", path("x.csv")}).code, 2);
    EXPECT_EQ(run({"decay-coherent", "--preset", "fig9"}).code, 2);
    EXPECT_EQ(run({"decay-coherent", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"lattice-continuum", "--points", "100", "--out", path("x.csv")}).code, 2);
    EXPECT_EQ(run({"lattice-waveguides", "--init", "superposition", "--j", "4", "--k", "4",
                   "--out", path("x.csv")}).code, 2);
    // A Fock dimension far below the coherent tail is a numerical-guard failure.
    EXPECT_EQ(run({"decay-coherent", "--alpha", "3", "--dim", "4", "--out", path("x.csv")}).code, 3);
    // Unwritable output location.
    {
        std::ofstream blocker(path("file"));
        blocker << "x";
    }
    EXPECT_EQ(run({"decay-thermal", "--steps", "2", "--out", path("file") + "/sub/o.csv"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({"list"}).code, 0);
}

TEST_F(CliTest, VerifyReport)
{
    CliRun a = run({"verify", "--suite", "identities", "--seed", "7"});
    CliRun b = run({"verify", "--suite", "identities", "--seed", "7"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_TRUE(j.at("passed").get<bool>());
    EXPECT_EQ(j.at("suites").size(), 1u);
    const CliRun fault = run({"verify", "--suite", "lindblad", "--inject-v-fault", "1e-3", "--out", path("v.json")});
    EXPECT_EQ(fault.code, 1);
    EXPECT_FALSE(nlohmann::json::parse(slurp(path("v.json"))).at("passed").get<bool>());
    EXPECT_EQ(run({"verify", "--suite", "everything"}).code, 2);
}
