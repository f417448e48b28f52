#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "orlicz/orlicz.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args)
{
    const std::string cmd = std::string(ORLICZ_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return r;
    }
    char buf[4096];
    while (std::fgets(buf, sizeof buf, pipe)) {
        r.out += buf;
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("orlicz_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string config(const std::string& extra)
    {
        const fs::path p = dir_ / "run.ini";
        std::ofstream(p) << "[growth]\nfamily = power\np = 3\n[grid]\nnx = 17\nnt = 16\nT = 0.25\n"
                         << "[output]\npath = " << (dir_ / "out.csv").string() << "\ntrace = "
                         << (dir_ / "trace.csv").string() << '\n'
                         << extra;
        return p.string();
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, ClassifyPowerThree)
{
    const auto r = run("classify -c " + config(""));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "degenerate\n");
}

TEST_F(Cli, ClassifyWithOverride)
{
    const auto r = run("classify -c " + config("") + " --set growth.p=1.5");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "singular\n");
}

TEST_F(Cli, UsageErrorsExitTwo)
{
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("classify").code, 2);
    EXPECT_EQ(run("classify -c " + config("[growth2]\nx = 1\n")).code, 2);
    EXPECT_EQ(run("classify -c " + config("") + " --set growth.p=0.5 --set grid.dim=2").code, 2);
    EXPECT_EQ(run("classify -c /nonexistent/file.ini").code, 2);
}

TEST_F(Cli, ObstacleBelowBoundaryIsUsageError)
{
    const auto r = run("obstacle -c " + config("[problem]\nobstacle = constant\nobstacle_value = 1\n"));
    EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, SolveIsDeterministic)
{
    const auto cfg = config("[problem]\nboundary = heat_exact\n");
    ASSERT_EQ(run("solve -c " + cfg + " --set growth.p=2").code, 0);
    const auto first = slurp(dir_ / "out.csv");
    ASSERT_EQ(run("solve -c " + cfg + " --set growth.p=2").code, 0);
    EXPECT_EQ(first, slurp(dir_ / "out.csv"));
    EXPECT_EQ(first.substr(0, first.find('\n')), "t,x,value");
}

TEST_F(Cli, ObstacleCsvColumns)
{
    const auto r = run("obstacle -c " + config("[problem]\nobstacle = bump\n"));
    EXPECT_EQ(r.code, 0);
    const auto csv = slurp(dir_ / "out.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,x,value,psi,residual,active");
    EXPECT_NE(r.out.find("complementarity = "), std::string::npos);
}

TEST_F(Cli, ConstructWritesTraceAndDifference)
{
    const auto r = run("construct -c " + config("[problem]\nobstacle = bump\n[construction]\ncount = 8\n"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("sup_diff_vs_obstacle = "), std::string::npos);
    const auto trace = slurp(dir_ / "trace.csv");
    EXPECT_EQ(trace.substr(0, trace.find('\n')), "sweep,sup_change,max_phi");
}

TEST_F(Cli, OrliczTable)
{
    const auto r = run("orlicz-table -c " + config("[table]\npoints = 5\n") + " --set growth.p=2");
    EXPECT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "s,g,G,Gconj,ratio");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        // Power(2) normalized: g/s = 2, s g / G = 2
        EXPECT_NEAR(std::stod(line.substr(line.rfind(',') + 1)), 2.0, 1e-7);
    }
    EXPECT_EQ(rows, 5);
}
