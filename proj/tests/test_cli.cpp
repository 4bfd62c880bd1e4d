#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sobosvd/experiments.hpp>

using namespace sobosvd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SOBOSVD_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("sobosvd_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST(Expression, Arithmetic) {
    EXPECT_DOUBLE_EQ(Expression("1+2*3")(0, 0), 7.0);
    EXPECT_DOUBLE_EQ(Expression("2^3^2")(0, 0), 512.0);
    EXPECT_DOUBLE_EQ(Expression("-2^2")(0, 0), -4.0);
    EXPECT_DOUBLE_EQ(Expression("(1-x)/y")(3, 4), -0.5);
    EXPECT_DOUBLE_EQ(Expression("x*y*z")(2, 3, 4), 24.0);
    EXPECT_NEAR(Expression("cos(pi)+exp(0)+sin(0)")(0, 0), 0.0, 1e-15);
    EXPECT_NEAR(Expression("log(e)+sqrt(4)")(0, 0), 3.0, 1e-15);
}

TEST(Expression, MatchesBuiltins) {
    const Expression r06("(x^2+y^2)^0.3"), absdiag("abs(x+y)^0.6"), expcos("exp(cos(x)*cos(y))");
    for (double x : {-2.0, 0.1, 1.7})
        for (double y : {-0.4, 0.0, 2.9}) {
            EXPECT_NEAR(r06(x, y), functions::r06(x, y), 1e-15);
            EXPECT_NEAR(absdiag(x, y), functions::absdiag(x, y), 1e-15);
            EXPECT_NEAR(expcos(x, y), functions::expcos(x, y), 1e-15);
        }
}

TEST(Expression, Errors) {
    for (const char* bad : {"", "1+", "(x", "foo(x)", "x y", "2**3", "w"})
        EXPECT_THROW(Expression{bad}, InvalidArgument) << bad;
}

TEST(Table, CsvFormat) {
    Table t({"a", "b", "c"});
    t.row() << 1 << 0.1 << true;
    t.row() << Index(7) << std::nan("") << false;
    EXPECT_EQ(t.to_csv(), "a,b,c\n1,0.10000000000000001,1\n7,nan,0\n");
    EXPECT_THROW(t.row() << 1.0, InvalidArgument);
}

TEST(Table, NumbersRoundTrip) {
    for (double v : {1.0 / 3, -2.5e-300, 6.02e23, 0.0}) EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(Table, SvgHasOnePolylinePerSeries) {
    Table t({"r", "x", "y"});
    t.row() << 1 << 1e-1 << 1e-2;
    t.row() << 2 << 1e-3 << 1e-4;
    const auto svg = to_svg(t, "demo");
    std::size_t count = 0;
    for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++count;
    EXPECT_EQ(count, 2u);
}

TEST(Config, Validation) {
    ExperimentConfig c;
    EXPECT_NO_THROW(c.validate());
    c.n = 0;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.q = 1;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.rmax = 2 * c.n + 2;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.function = "nope";
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.function = "custom";
    EXPECT_THROW(c.validate(), InvalidArgument);
    c.expression = "x+y";
    EXPECT_NO_THROW(c.validate());
}

TEST(SvdReport, RowCount) {
    ExperimentConfig c;
    c.function = "expcos";
    const auto t = run_svd_report(c);
    EXPECT_EQ(t.rows.size(), std::size_t(2 * 16 + 1));
    EXPECT_EQ(t.columns.size(), 9u);
}

TEST(SvdReport, EstimatorWithinFactorThree) {
    const auto t = run_svd_report(ExperimentConfig{});
    for (const auto& row : t.rows) {
        const double err = std::stod(row[6]), est = std::stod(row[8]);
        if (err > 1e-8) {
            EXPECT_LE(est, 3 * err) << row[0];
            EXPECT_GE(est, err / 3) << row[0];
        }
    }
}

TEST(Drivers, Deterministic) {
    ExperimentConfig c;
    c.n = 8;
    c.ns = {4, 8};
    c.rmax = 4;
    EXPECT_EQ(run_svd_report(c).to_csv(), run_svd_report(c).to_csv());
    EXPECT_EQ(bound_table(run_bounds(c)).to_csv(), bound_table(run_bounds(c)).to_csv());
    EXPECT_EQ(run_poisson(c).to_csv(), run_poisson(c).to_csv());
    EXPECT_EQ(run_expsum(c).to_csv(), run_expsum(c).to_csv());
    EXPECT_EQ(run_pathology({1, 2, 3}).to_csv(), run_pathology({1, 2, 3}).to_csv());
}

TEST(Drivers, BoundsSatisfiedOnSuite) {
    for (const char* tag : {"r06", "absdiag"}) {
        ExperimentConfig c;
        c.function = tag;
        c.n = 8;
        EXPECT_TRUE(run_bounds(c).all_satisfied()) << tag;
    }
}

TEST(Cli, ExitCodes) {
    const auto dir = scratch("codes");
    EXPECT_EQ(run_cli("pathology --out " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "pathology.csv"));
    EXPECT_EQ(run_cli("svd-report --function nope --out " + dir.string()), 1);
    EXPECT_EQ(run_cli("svd-report --n 0 --out " + dir.string()), 1);
    EXPECT_EQ(run_cli("frobnicate"), 1);
    EXPECT_EQ(run_cli("expsum --delta 1e-13 --out " + dir.string()), 1);
}

TEST(Cli, ConfigFileAndOverride) {
    const auto dir = scratch("config");
    {
        std::ofstream cfg(dir / "c.json");
        cfg << R"j({"function": "custom", "expression": "cos(x)*cos(y)", "n": 3})j";
    }
    ASSERT_EQ(run_cli("svd-report --config " + (dir / "c.json").string() + " --n 4 --plot --out " + dir.string()), 0);
    const auto csv = slurp(dir / "svd_report.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 9);
    EXPECT_TRUE(fs::exists(dir / "svd_report.svg"));

    {
        std::ofstream cfg(dir / "bad.json");
        cfg << R"({"functoin": "r06"})";
    }
    EXPECT_EQ(run_cli("svd-report --config " + (dir / "bad.json").string() + " --out " + dir.string()), 1);
}
