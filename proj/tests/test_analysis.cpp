#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "orlicz/orlicz.hpp"

using namespace orlicz;

TEST(DeGiorgi, ParamsAndScaling)
{
    const auto p = DeGiorgiParams::make(1, GrowthSpec::power(3.0));
    EXPECT_DOUBLE_EQ(p.sigma, 1e-3);
    const YoungPair two(GrowthSpec::power(2.0));
    // G = s^2: theta = k^2 / (k / rho)^2 = rho^2
    for (double k : {0.1, 1.0, 30.0}) {
        EXPECT_NEAR(scaling_theta(two, k, 0.3), 0.09, 1e-9);
    }
}

TEST(DeGiorgi, BackwardCylinderCountsByEnumeration)
{
    const auto g = SpaceTimeGrid::make(1, 11, 10, 1.0);  // h = 0.1, tau = 0.1
    // |x - 0.5| <= 0.2 -> 5 nodes; t in (0.8 - 0.3, 0.8] -> levels 8, 7, 6
    EXPECT_EQ(backward_cylinder_nodes(g, {8, 5, 0}, 0.2, 0.3).size(), 15u);
    const auto g2 = SpaceTimeGrid::make(2, 11, 10, 1.0);
    EXPECT_EQ(backward_cylinder_nodes(g2, {8, 5, 5}, 0.2, 0.3).size(), 75u);
}

TEST(DeGiorgi, ZeroFieldMeetsConditionTrivially)
{
    const auto g = SpaceTimeGrid::make(1, 11, 10, 1.0);
    const ScalarField u(g, FieldKind::Solution, 0.0);
    const YoungPair pair(GrowthSpec::power(3.0));
    const auto params = DeGiorgiParams::make(1, GrowthSpec::power(3.0));
    const double k = 0.5;
    const double rho = 0.2;
    const auto v = check_degiorgi(u, {10, 5, 0}, k, rho, scaling_theta(pair, k, rho), params, pair);
    EXPECT_TRUE(v.condition_met);
    EXPECT_TRUE(v.bound_holds);
    EXPECT_DOUBLE_EQ(v.lhs, 0.0);
}

TEST(DeGiorgi, RejectsInconsistentTheta)
{
    const auto g = SpaceTimeGrid::make(1, 11, 10, 1.0);
    const ScalarField u(g, FieldKind::Solution, 0.0);
    const YoungPair pair(GrowthSpec::power(2.0));
    EXPECT_THROW(check_degiorgi(u, {10, 5, 0}, 1.0, 0.2, 0.5, DeGiorgiParams::make(1, GrowthSpec::power(2.0)), pair),
                 DomainError);
}

TEST(DeGiorgi, NegativeFieldRejected)
{
    const auto g = SpaceTimeGrid::make(1, 11, 10, 1.0);
    const ScalarField u(g, FieldKind::Solution, -1.0);
    EXPECT_THROW(k_condition_lhs(u, {10, 5, 0}, 0.2, 0.2, YoungPair(GrowthSpec::power(2.0))), DomainError);
}

// the condition only gets easier as k grows, so a met condition at k stays met at 2k
TEST(DeGiorgi, ConditionMonotoneInK)
{
    const auto grid = SpaceTimeGrid::make(1, 33, 32, 0.25);
    std::mt19937_64 rng(4);
    const auto g = GrowthSpec::power(2.0);
    const YoungPair pair(g);
    const auto params = DeGiorgiParams::make(1, g);
    const auto u = solve(detail::random_nonnegative_field(grid, rng, 1.0), SolverConfig{}, FieldSpec::canonical(g)).u;
    for (double k = 0.01; k < 100.0; k *= 1.7) {
        const auto a = check_degiorgi(u, {32, 16, 0}, k, 0.2, 0.04, params, pair);
        const auto b = check_degiorgi(u, {32, 16, 0}, 2 * k, 0.2, 0.04, params, pair);
        EXPECT_TRUE(!a.condition_met || b.condition_met) << k;
    }
}

TEST(BoundednessLevel, EachCaseProducesAPassingTriple)
{
    const auto grid = SpaceTimeGrid::make(1, 33, 32, 0.25);
    std::mt19937_64 rng(12);
    for (double p : {1.5, 2.0, 3.0}) {
        const auto g = GrowthSpec::power(p);
        const YoungPair pair(g);
        const auto params = DeGiorgiParams::make(1, g);
        const auto u = solve(detail::random_nonnegative_field(grid, rng, 1.0), SolverConfig{}, FieldSpec::canonical(g)).u;
        const Anchor anchor{32, 16, 0};
        const auto lvl = find_boundedness_level(u, anchor, 0.2, pair, params, classify(pair));
        const auto v = check_degiorgi(u, anchor, lvl.k, lvl.rho, lvl.theta, params, pair);
        EXPECT_TRUE(v.condition_met) << p;
        EXPECT_TRUE(v.bound_holds) << p;
    }
}

TEST(BoundednessLevel, CylinderMustFitInTheGrid)
{
    const auto grid = SpaceTimeGrid::make(1, 33, 32, 0.25);
    const ScalarField u(grid, FieldKind::Solution, 0.5);
    const auto g = GrowthSpec::power(2.0);
    const YoungPair pair(g);
    EXPECT_THROW(find_boundedness_level(u, {32, 1, 0}, 0.4, pair, DeGiorgiParams::make(1, g), classify(pair)),
                 DomainError);
}

TEST(Poincare, HoldsOnRandomFieldsAndRejectsNonzeroBoundary)
{
    std::mt19937_64 rng(2);
    const auto grid = SpaceTimeGrid::make(1, 33, 2, 0.1);
    auto u = ScalarField::from_function(grid, [](double t, double x, double) { return (1 + t) * std::sin(M_PI * x); });
    for (const auto& g : reference_families()) {
        EXPECT_LE(poincare_check(u, YoungPair(g)).max_slack, 0.0) << g.describe();
    }
    u.at(1, 0) = 1.0;
    EXPECT_THROW(poincare_check(u, YoungPair(GrowthSpec::power(2.0))), DomainError);
}

TEST(Regularize, InfFilterAndIdentityLimit)
{
    const auto grid = SpaceTimeGrid::make(1, 9, 4, 1.0);
    std::mt19937_64 rng(6);
    const auto u = detail::random_smooth_field(grid, rng, 1.0, 0.0, FieldKind::Solution);
    const auto f = essinf_filter(u, 1);
    for (std::size_t k = 0; k < u.values().size(); ++k) {
        EXPECT_LE(f[k], u[k]);
    }
    std::vector<double> deficits;
    const auto r = essliminf_regularize(u, 3, &deficits);
    EXPECT_EQ(deficits.size(), 3u);
    for (std::size_t k = 1; k < deficits.size(); ++k) {
        EXPECT_LE(deficits[k], deficits[k - 1]);
    }
    EXPECT_EQ(sup_distance(r, u), 0.0);
}
