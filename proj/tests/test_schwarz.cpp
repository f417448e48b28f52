#include <cmath>

#include <gtest/gtest.h>

#include "orlicz/orlicz.hpp"

using namespace orlicz;

namespace {

ObstacleProblemSpec bump(int nx = 33, double p = 3.0)
{
    return bump_problem(SpaceTimeGrid::make(1, nx, nx - 1, 0.25), GrowthSpec::power(p));
}

}  // namespace

TEST(Family, SeededAndReproducible)
{
    const auto grid = SpaceTimeGrid::make(2, 17, 8, 0.1);
    const auto a = generate_family(grid, 10, 2, 42);
    const auto b = generate_family(grid, 10, 2, 42);
    ASSERT_EQ(a.cylinders.size(), 10u);
    for (std::size_t k = 0; k < a.cylinders.size(); ++k) {
        EXPECT_EQ(a.cylinders[k].center, b.cylinders[k].center);
        EXPECT_EQ(a.cylinders[k].radius, b.cylinders[k].radius);
        EXPECT_EQ(a.cylinders[k].start, b.cylinders[k].start);
        EXPECT_GE(a.cylinders[k].radius, 2);
        EXPECT_EQ(a.cylinders[k].end, grid.nt);
    }
    EXPECT_EQ(a.cylinders[0].start, 0);
}

TEST(Family, CoverageByEnumeration)
{
    const auto grid = SpaceTimeGrid::make(1, 9, 2, 0.1);
    EXPECT_TRUE(family_covers(grid, {Cylinder{{4, 0}, 4, 0, 2}}));
    EXPECT_FALSE(family_covers(grid, {Cylinder{{2, 0}, 2, 0, 2}}));
    EXPECT_FALSE(family_covers(grid, {Cylinder{{4, 0}, 4, 1, 2}}));
}

// with an obstacle below the free solution the obstacle solution is the free solution and one
// full-domain cylinder reaches it in one sweep
TEST(Construction, InactiveObstacleOneCylinder)
{
    const auto grid = SpaceTimeGrid::make(1, 33, 16, 0.1);
    const auto data = make_boundary(grid, {BoundaryKind::HeatExact});
    const auto fs = FieldSpec::canonical(GrowthSpec::power(2.0));
    const auto free = solve(data, SolverConfig{}, fs);
    ScalarField psi = free.u;
    for (double& v : psi.values()) {
        v -= 0.1;
    }
    CylinderFamily fam;
    fam.cylinders = {full_cylinder(grid)};
    const auto res = run_construction(psi, data, fam, fs, SolverConfig{});
    EXPECT_TRUE(res.converged);
    EXPECT_LE(sup_distance(res.u_star, free.u), 1e-12);
}

// stationary contact set [a, b]: boxes [0, a] and [b, 32] end on the free boundary, so the
// construction reproduces the obstacle solution exactly
TEST(Construction, BoxesEndingOnTheFreeBoundaryAreExact)
{
    const auto prof = [](double x) {
        const double r = std::abs(x - 0.5) / 0.3;
        return 0.2 * std::max(0.0, 1.0 - r * r);
    };
    const auto fs = FieldSpec::canonical(GrowthSpec::power(2.0));
    const auto g0 = SpaceTimeGrid::make(1, 33, 200, 10.0);
    const auto psi0 = ScalarField::from_function(g0, [&](double, double x, double) { return prof(x); }, FieldKind::Obstacle);
    const auto bd0 = ScalarField::from_function(g0, [&](double t, double x, double) { return t == 0 ? prof(x) : 0.0; },
                                                FieldKind::Boundary);
    const auto stationary = solve_obstacle({psi0, bd0, fs, SolverConfig{}}).u;

    const auto grid = SpaceTimeGrid::make(1, 33, 32, 0.25);
    const auto psi = ScalarField::from_function(grid, [&](double, double x, double) { return prof(x); }, FieldKind::Obstacle);
    ScalarField bd(grid, FieldKind::Boundary, 0.0);
    for (int i = 0; i < 33; ++i) {
        bd.at(0, i) = stationary.at(200, i);
    }
    const auto vi = solve_obstacle({psi, bd, fs, SolverConfig{}});
    int a = -1;
    int b = -1;
    for (int i = 1; i < 32; ++i) {
        if (vi.u.at(32, i) - psi.at(32, i) < 1e-9) {
            a = a < 0 ? i : a;
            b = i;
        }
    }
    ASSERT_GT(a, 0);
    CylinderFamily fam;
    fam.cylinders = {Cylinder{{a / 2, 0}, (a + 1) / 2, 0, 32}, Cylinder{{(b + 33) / 2, 0}, (33 - b) / 2, 0, 32},
                     Cylinder{{16, 0}, 16, 0, 32}};
    const auto res = run_construction(psi, bd, fam, fs, SolverConfig{});
    EXPECT_TRUE(res.converged);
    EXPECT_LE(sup_distance(res.u_star, vi.u), 1e-9);
}

TEST(Construction, MonotoneAndBelowObstacleSolution)
{
    const auto spec = bump();
    const auto vi = solve_obstacle(spec);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto fam = generate_family(spec.obstacle.grid(), 16, 2, seed);
        const auto res = run_construction(spec.obstacle, spec.boundary, fam, spec.field, spec.solver);
        EXPECT_TRUE(res.converged);
        EXPECT_GE(res.min_increment, -1e-12);
        EXPECT_LE(res.max_abs_phi, 0.2 + 1e-12);
        // the limit is a fixed point sitting below the smallest supersolution
        for (std::size_t k = 0; k < vi.u.values().size(); ++k) {
            ASSERT_LE(res.u_star[k], vi.u[k] + 1e-9) << "seed " << seed;
        }
        // and sweep changes die out
        EXPECT_LT(res.trace.back().sup_change, 1e-8);
    }
}

TEST(Construction, PermutationsAgree)
{
    const auto spec = bump();
    const auto fam = generate_family(spec.obstacle.grid(), 16, 2, 5);
    const auto a = run_construction(spec.obstacle, spec.boundary, permuted(fam, 11), spec.field, spec.solver);
    const auto b = run_construction(spec.obstacle, spec.boundary, permuted(fam, 12), spec.field, spec.solver);
    EXPECT_LE(sup_distance(a.u_star, b.u_star), 1e-6);
}

// disjoint boxes commute, so grouping them for threads changes nothing
TEST(Construction, ParallelModeIsBitIdentical)
{
    const auto spec = bump_problem(SpaceTimeGrid::make(2, 17, 8, 0.1), GrowthSpec::power(2.0));
    const auto fam = generate_family(spec.obstacle.grid(), 12, 2, 9);
    ConstructionOptions seq;
    ConstructionOptions par;
    par.parallel = true;
    par.max_threads = 4;
    const auto a = run_construction(spec.obstacle, spec.boundary, fam, spec.field, spec.solver, seq);
    const auto b = run_construction(spec.obstacle, spec.boundary, fam, spec.field, spec.solver, par);
    for (std::size_t k = 0; k < a.u_star.values().size(); ++k) {
        ASSERT_EQ(a.u_star[k], b.u_star[k]);
    }
}

TEST(Construction, RejectsEmptyFamily)
{
    const auto spec = bump(9);
    EXPECT_THROW(run_construction(spec.obstacle, spec.boundary, CylinderFamily{}, spec.field, spec.solver),
                 DomainError);
}
