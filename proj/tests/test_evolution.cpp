#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "orlicz/orlicz.hpp"

using namespace orlicz;

TEST(Evolution, HeatExactIn1DAnd2D)
{
    for (int dim : {1, 2}) {
        const auto grid = dim == 1 ? SpaceTimeGrid::make(1, 65, 64, 0.25) : SpaceTimeGrid::make(2, 17, 16, 0.25);
        const auto data = make_boundary(grid, {BoundaryKind::HeatExact});
        const auto sol = solve(data, SolverConfig{}, FieldSpec::canonical(GrowthSpec::power(2.0)));
        EXPECT_TRUE(sol.report.converged);
        EXPECT_LE(sup_distance(sol.u, data), 1e-8) << dim;
    }
}

// affine data: constant gradient, zero divergence, so the data itself is the discrete solution
TEST(Evolution, AffineDataIsStationaryForEveryGrowth)
{
    for (const auto& g : reference_families()) {
        for (int dim : {1, 2}) {
            const auto grid = SpaceTimeGrid::make(dim, dim == 1 ? 17 : 9, 6, 0.1);
            const auto data = make_boundary(grid, {BoundaryKind::Linear, 0.3, -0.7});
            const auto sol = solve(data, SolverConfig{}, FieldSpec::canonical(g));
            EXPECT_TRUE(sol.report.converged) << g.describe();
            EXPECT_LE(sup_distance(sol.u, data), 1e-9) << g.describe() << " dim " << dim;
        }
    }
}

TEST(Evolution, SingularGrowthGetsDefaultRegularization)
{
    const auto grid = SpaceTimeGrid::make(1, 9, 4, 0.1);
    const auto sol = solve(ScalarField(grid, FieldKind::Boundary, 1.0), SolverConfig{},
                           FieldSpec::canonical(GrowthSpec::power(1.5)));
    EXPECT_DOUBLE_EQ(sol.report.epsilon, 1e-8);
    const auto sol3 = solve(ScalarField(grid, FieldKind::Boundary, 1.0), SolverConfig{},
                            FieldSpec::canonical(GrowthSpec::power(3.0)));
    EXPECT_DOUBLE_EQ(sol3.report.epsilon, 0.0);
}

// dense Gaussian elimination with partial pivoting as the oracle
TEST(StencilSystem, MatchesDenseSolve)
{
    const auto grid = SpaceTimeGrid::make(2, 7, 1, 1.0);
    const auto box = SpatialBox::whole(grid);
    const auto stencils = detail::build_stencils(grid, box);
    detail::StencilSystem sys(grid, stencils);
    const std::size_t n = sys.size();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        double off_sum = 0.0;
        for (int k = 0; k < stencils[r].count; ++k) {
            const double v = u(rng);
            sys.set_off(r, k, v);
            const long p = sys.position(stencils[r].nb[k]);
            if (p >= 0) {
                dense[r][std::size_t(p)] = -v;
            }
            off_sum += v;
        }
        const double d = off_sum + u(rng);
        sys.set_diag(r, d);
        dense[r][r] = d;
    }
    std::vector<double> rhs(n);
    for (double& v : rhs) {
        v = u(rng) - 0.5;
    }
    std::vector<double> x = rhs;
    sys.solve(x);
    // oracle
    auto a = dense;
    auto b = rhs;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) {
                piv = i;
            }
        }
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) {
                a[i][j] -= l * a[k][j];
            }
            b[i] -= l * b[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) {
            s -= a[k][j] * b[j];
        }
        b[k] = s / a[k][k];
    }
    for (std::size_t k = 0; k < n; ++k) {
        EXPECT_NEAR(x[k], b[k], 1e-12);
    }
}

TEST(Evolution, PicardAndNewtonAgree)
{
    const auto grid = SpaceTimeGrid::make(1, 33, 16, 0.1);
    const auto data = ScalarField::from_function(grid, [](double, double x, double) {
        return std::sin(3.0 * x) + 0.5 * x;
    });
    for (double p : {1.5, 2.0}) {
        SolverConfig picard;
        picard.method = NonlinearMethod::Picard;
        const auto fs = FieldSpec::canonical(GrowthSpec::power(p));
        const auto a = solve(data, picard, fs);
        const auto b = solve(data, SolverConfig{}, fs);
        ASSERT_TRUE(a.report.converged && b.report.converged) << p;
        EXPECT_LE(sup_distance(a.u, b.u), 1e-8) << p;
    }
}

TEST(Evolution, ResidualVanishesOnSolution)
{
    const auto grid = SpaceTimeGrid::make(2, 9, 8, 0.05);
    std::mt19937_64 rng(8);
    const auto data = detail::random_smooth_field(grid, rng, 1.0, 0.0);
    const auto fs = FieldSpec::canonical(GrowthSpec::power(3.0));
    const auto sol = solve(data, SolverConfig{}, fs);
    const auto r = residual_field(sol.u, fs);
    for (auto idx : interior_nodes(grid, full_cylinder(grid))) {
        EXPECT_LE(std::abs(r[idx]), 1e-9);
    }
}

// comparison for the unconstrained equation on random ordered data
TEST(Evolution, OrderedDataGiveOrderedSolutions)
{
    std::mt19937_64 rng(21);
    for (const auto& g : reference_families()) {
        const auto grid = SpaceTimeGrid::make(1, 33, 16, 0.1);
        auto lo = detail::random_smooth_field(grid, rng, 1.0, 0.0);
        auto hi = lo;
        const auto gap = detail::random_nonnegative_field(grid, rng, 0.5);
        for (std::size_t k = 0; k < hi.values().size(); ++k) {
            hi[k] += gap[k];
        }
        const auto fs = FieldSpec::canonical(g);
        const auto a = solve(lo, SolverConfig{}, fs);
        const auto b = solve(hi, SolverConfig{}, fs);
        for (std::size_t k = 0; k < a.u.values().size(); ++k) {
            ASSERT_GE(b.u[k] - a.u[k], -1e-10) << g.describe();
        }
    }
}

TEST(Evolution, CaccioppoliRatioIsFiniteAndPositive)
{
    const auto grid = SpaceTimeGrid::make(1, 33, 32, 0.1);
    const auto data = ScalarField::from_function(grid, [](double, double x, double) { return std::sin(M_PI * x); });
    const auto g = GrowthSpec::power(2.0);
    const auto u = solve(data, SolverConfig{}, FieldSpec::canonical(g)).u;
    const double r = caccioppoli_ratio(u, 0.1, [](double x, double) {
        return std::max(0.0, 1.0 - std::pow((x - 0.5) / 0.4, 2));
    }, YoungPair(g));
    EXPECT_GT(r, 0.0);
    EXPECT_TRUE(std::isfinite(r));
}
