#include <cmath>

#include <gtest/gtest.h>

#include "orlicz/orlicz.hpp"

using namespace orlicz;

// normalized Power(p): g = p s^{p-1}, G = s^p, G~(s) = (p-1)(s/p)^{p/(p-1)}
TEST(Growth, NormalizedPowerMatchesClosedForm)
{
    for (double p : {1.5, 2.0, 3.0}) {
        const YoungPair pair(GrowthSpec::power(p));
        EXPECT_NEAR(pair.G(1.0), 1.0, 1e-9);
        for (double s : {1e-3, 0.1, 0.7, 1.0, 3.0, 40.0}) {
            EXPECT_NEAR(pair.growth().g(s), p * std::pow(s, p - 1.0), 1e-9 * std::pow(s, p - 1.0) * p) << p;
            EXPECT_NEAR(pair.G(s), std::pow(s, p), 1e-8 * std::pow(s, p)) << p << ' ' << s;
            const double conj = (p - 1.0) * std::pow(s / p, p / (p - 1.0));
            EXPECT_NEAR(pair.G_conj(s), conj, 1e-6 * conj) << p << ' ' << s;
        }
    }
}

TEST(Growth, NormalizationIntegratesToOne)
{
    for (const auto& g : reference_families()) {
        const double integral = quad::adaptive_simpson([&](double s) { return g.g(s); }, 0.0, 1.0, 1e-12);
        EXPECT_NEAR(integral, 1.0, 1e-7) << g.describe();
    }
}

TEST(Growth, RejectsExponentsOutsideRange)
{
    EXPECT_THROW(GrowthSpec::power(1.0), DomainError);
    EXPECT_THROW(GrowthSpec::piecewise_power(1.5, 0.9), DomainError);
    EXPECT_THROW(GrowthSpec::power_log(1.1, -1.0), DomainError);
}

TEST(Young, InversesRoundTrip)
{
    for (const auto& g : reference_families()) {
        const YoungPair pair(g);
        for (double s : {1e-4, 0.03, 0.5, 2.0, 70.0, 1e4}) {
            EXPECT_NEAR(pair.G_inverse(pair.G(s)), s, 1e-8 * s) << g.describe();
            EXPECT_NEAR(pair.g_inverse(g.g(s)), s, 1e-8 * s) << g.describe();
        }
    }
}

// brute force: G~(s) = sup_t (s t - G(t)) over a fine grid around the maximizer
TEST(Young, ConjugateMatchesBruteForce)
{
    for (const auto& g : reference_families()) {
        const YoungPair pair(g);
        for (double s : {0.2, 1.0, 5.0}) {
            const double t_star = pair.g_inverse(s);
            double best = 0.0;
            for (int k = 0; k <= 20000; ++k) {
                const double t = t_star * (0.5 + k / 20000.0);
                best = std::max(best, s * t - pair.G(t));
            }
            EXPECT_NEAR(pair.G_conj(s), best, 1e-6 * std::max(1.0, best)) << g.describe() << ' ' << s;
        }
    }
}

TEST(Young, NegativeArgumentsRejected)
{
    const YoungPair pair(GrowthSpec::power(2.0));
    EXPECT_THROW(eval_G(pair, -1.0), DomainError);
}

TEST(Young, LuxemburgNormOfPowerTwo)
{
    // G = s^2: ||f|| solves sum (f/l)^2 w = 1, i.e. l = sqrt(sum f^2 w)
    const YoungPair pair(GrowthSpec::power(2.0));
    const std::vector<double> f{1.0, -2.0, 0.5};
    const std::vector<double> w(3, 0.5);
    const double expected = std::sqrt((1.0 + 4.0 + 0.25) * 0.5);
    EXPECT_NEAR(luxemburg_norm(pair, f, w), expected, 1e-8 * expected);
}

TEST(Inequalities, NoViolationsOnReferenceFamilies)
{
    for (const auto& g : reference_families()) {
        const auto rep = check_inequalities(YoungPair(g), 1000, 3);
        EXPECT_TRUE(rep.ok()) << g.describe() << ": " << (rep.failures.empty() ? "" : rep.failures[0].id);
    }
}

TEST(Classify, ReferenceFamilies)
{
    EXPECT_EQ(classify(YoungPair(GrowthSpec::power(1.5))), Classification::Singular);
    EXPECT_EQ(classify(YoungPair(GrowthSpec::power(2.0))), Classification::Intermediate);
    EXPECT_EQ(classify(YoungPair(GrowthSpec::power(3.0))), Classification::Degenerate);
    EXPECT_EQ(classify(YoungPair(GrowthSpec::piecewise_power(1.5, 3.0))), Classification::Degenerate);
    EXPECT_EQ(classify(YoungPair(GrowthSpec::power_log(2.0, 1.0))), Classification::Intermediate);
}

TEST(VectorField, StructureConditionsHold)
{
    for (const auto& g : reference_families()) {
        const YoungPair pair(g);
        EXPECT_TRUE(structure_check(FieldSpec::canonical(g), pair, 500, 7).ok()) << g.describe();
        // regularization perturbs coercivity at |xi| ~ 1e-4 by about epsilon / |xi| relative
        const auto reg = structure_check(FieldSpec::with_default_regularization(pair), pair, 500, 7);
        EXPECT_LE(reg.max_coercivity_violation, 1e-6) << g.describe();
        EXPECT_LE(reg.max_growth_violation, 1e-9) << g.describe();
    }
}

TEST(VectorField, FluxIsOddAndMonotone)
{
    const auto fs = FieldSpec::canonical(GrowthSpec::power(3.0));
    double prev = -HUGE_VAL;
    for (double d = -5.0; d <= 5.0; d += 0.01) {
        EXPECT_DOUBLE_EQ(fs.flux(-d), -fs.flux(d));
        EXPECT_GE(fs.flux(d), prev);
        prev = fs.flux(d);
    }
}
