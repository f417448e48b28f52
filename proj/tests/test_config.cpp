#include <sstream>

#include <gtest/gtest.h>

#include "orlicz/orlicz.hpp"

using namespace orlicz;

namespace {

RunConfig parse(const std::string& text, const std::vector<std::string>& overrides = {})
{
    std::istringstream in(text);
    return parse_config(in, overrides);
}

const char* kMinimal = R"(
[growth]
family = power
p = 3

[grid]
nx = 17
nt = 8
T = 0.5
)";

int error_line(const std::string& text)
{
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST(Config, MinimalFileGetsDefaults)
{
    const auto c = parse(kMinimal);
    EXPECT_EQ(c.growth.family, Family::Power);
    EXPECT_DOUBLE_EQ(c.growth.p, 3.0);
    EXPECT_TRUE(c.growth.normalized);
    EXPECT_EQ(c.grid.dim, 1);
    EXPECT_EQ(c.grid.nx, 17);
    EXPECT_EQ(c.obstacle.kind, ObstacleKind::None);
    EXPECT_EQ(c.boundary.kind, BoundaryKind::Zero);
    EXPECT_EQ(c.solver.method, NonlinearMethod::DampedNewton);
    EXPECT_EQ(c.construction.count, 16);
    EXPECT_EQ(c.output, "solution.csv");
}

TEST(Config, OverridesReplaceValues)
{
    const auto c = parse(kMinimal, {"growth.p=2.5", "problem.obstacle=bump", "solver.method=picard"});
    EXPECT_DOUBLE_EQ(c.growth.p, 2.5);
    EXPECT_EQ(c.obstacle.kind, ObstacleKind::Bump);
    EXPECT_EQ(c.solver.method, NonlinearMethod::Picard);
}

TEST(Config, ErrorsCarryLineNumbers)
{
    EXPECT_EQ(error_line(std::string(kMinimal) + "bogus = 1\n"), 10);
    EXPECT_EQ(error_line(std::string(kMinimal) + "nx = 9\n"), 10);
    EXPECT_EQ(error_line(std::string(kMinimal) + "side = wide\n"), 10);
    EXPECT_EQ(error_line("[grid]\nnx = 9\nnt = 4\nT = 1\n[growth]\nfamily = cubic\np = 3\n"), 6);
    EXPECT_EQ(error_line("[grid]\nnx = 9.5\nnt = 4\nT = 1\n[growth]\nfamily = power\np = 3\n"), 2);
}

TEST(Config, MissingRequiredKey)
{
    EXPECT_THROW(parse("[growth]\nfamily = power\n[grid]\nnx = 9\nnt = 4\nT = 1\n"), ConfigError);
    EXPECT_THROW(parse("[growth]\nfamily = piecewise_power\np = 2\n[grid]\nnx = 9\nnt = 4\nT = 1\n"), ConfigError);
}

TEST(Config, RangeErrorNamesTheConstraint)
{
    try {
        parse("[growth]\nfamily = power\np = 0.5\n[grid]\ndim = 2\nnx = 9\nnt = 4\nT = 1\n");
        FAIL() << "expected a range error";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("g0 > 2n/(n+2)"), std::string::npos) << e.what();
        EXPECT_EQ(e.line(), 3);
    }
}

TEST(Config, BadOverride)
{
    EXPECT_THROW(parse(kMinimal, {"growth.p"}), ConfigError);
    EXPECT_THROW(parse(kMinimal, {"growth.r=1"}), ConfigError);
}

TEST(Config, CommentsAndBlankLines)
{
    const auto c = parse(std::string("# header\n; another\n") + kMinimal + "[solver]\ntol = 1e-9 # inline\n");
    EXPECT_DOUBLE_EQ(c.solver.tol, 1e-9);
}
