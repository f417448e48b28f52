#include <random>

#include <gtest/gtest.h>

#include "orlicz/orlicz.hpp"

using namespace orlicz;

namespace {

ObstacleProblemSpec make_spec(const ScalarField& psi, const ScalarField& data, const GrowthSpec& g)
{
    return {psi, data, FieldSpec::canonical(g), SolverConfig{}};
}

}  // namespace

// an obstacle far below the data never binds
TEST(Obstacle, InactiveObstacleReproducesUnconstrainedSolve)
{
    const auto grid = SpaceTimeGrid::make(1, 33, 16, 0.1);
    const auto data = make_boundary(grid, {BoundaryKind::HeatExact});
    const auto g = GrowthSpec::power(2.0);
    const auto vi = solve_obstacle(make_spec(ScalarField(grid, FieldKind::Obstacle, -10.0), data, g));
    const auto free = solve(data, SolverConfig{}, FieldSpec::canonical(g));
    EXPECT_LE(sup_distance(vi.u, free.u), 1e-10);
}

// constant obstacle equal to constant data: the constant is a solution touching everywhere
TEST(Obstacle, ConstantObstacleAndData)
{
    const auto grid = SpaceTimeGrid::make(2, 9, 4, 0.1);
    const auto sol = solve_obstacle(make_spec(ScalarField(grid, FieldKind::Obstacle, 0.4),
                                              ScalarField(grid, FieldKind::Boundary, 0.4),
                                              GrowthSpec::power(3.0)));
    for (double v : sol.u.values()) {
        EXPECT_DOUBLE_EQ(v, 0.4);
    }
}

TEST(Obstacle, BumpSolutionIsComplementaryForAllFamilies)
{
    for (const auto& g : reference_families()) {
        for (int dim : {1, 2}) {
            const auto grid = dim == 1 ? SpaceTimeGrid::make(1, 33, 32, 0.25) : SpaceTimeGrid::make(2, 13, 12, 0.25);
            const auto spec = bump_problem(grid, g);
            const auto sol = solve_obstacle(spec);
            EXPECT_TRUE(sol.report.converged) << g.describe();
            const auto rep = complementarity(sol.u, spec.obstacle, spec.field, spec.solver, spec.delta_contact);
            EXPECT_GE(rep.min_gap, -1e-12) << g.describe();
            EXPECT_LE(rep.max_abs_min, 1e-8) << g.describe() << " dim " << dim;
            EXPECT_LE(rep.max_offcontact_residual, 1e-8) << g.describe() << " dim " << dim;
            EXPECT_GE(rep.min_residual, -1e-8) << g.describe();
            EXPECT_GT(rep.contact_nodes, 0u) << g.describe();
        }
    }
}

TEST(Obstacle, RaisingTheObstacleRaisesTheSolution)
{
    const auto grid = SpaceTimeGrid::make(1, 33, 32, 0.25);
    const auto g = GrowthSpec::power(3.0);
    const auto low = solve_obstacle(bump_problem(grid, g, 0.1));
    const auto high = solve_obstacle(bump_problem(grid, g, 0.2));
    for (std::size_t k = 0; k < low.u.values().size(); ++k) {
        ASSERT_GE(high.u[k] - low.u[k], -1e-12);
    }
}

TEST(Obstacle, BoundaryBelowObstacleIsRejected)
{
    const auto grid = SpaceTimeGrid::make(1, 9, 4, 0.1);
    EXPECT_THROW(solve_obstacle(make_spec(ScalarField(grid, FieldKind::Obstacle, 1.0),
                                          ScalarField(grid, FieldKind::Boundary, 0.0),
                                          GrowthSpec::power(2.0))),
                 ValidationError);
}

TEST(Obstacle, ContactSetMatchesDefinition)
{
    const auto grid = SpaceTimeGrid::make(1, 5, 1, 1.0);
    ScalarField u(grid, FieldKind::Solution, 1.0);
    ScalarField psi(grid, FieldKind::Obstacle, 0.0);
    psi[3] = 1.0 - 1e-9;
    psi[4] = 0.5;
    const auto c = contact_set(u, psi, 1e-7);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0], 3u);
}
