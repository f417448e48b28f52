#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>

#include "orlicz/errors.hpp"
#include "orlicz/growth.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
double dot(const Vec<N>& a, const Vec<N>& b) noexcept
{
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        s += a[i] * b[i];
    }
    return s;
}

template <std::size_t N>
double norm(const Vec<N>& a) noexcept
{
    return std::sqrt(dot(a, a));
}

/// The canonical isotropic field A(xi) = g(|xi|) / |xi| xi with optional regularization
/// |xi| -> sqrt(|xi|^2 + epsilon^2).
///
/// Structure constants: the field satisfies
///   <DA(xi) z, z> >= nu g(|xi|)/|xi| |z|^2,   |DA(xi)| <= L g(|xi|)/|xi|
/// with nu = min(1, g0 - 1) and L = max(1, g1 - 1); nu_tilde and L_tilde are the derived
/// constants g0/(g1-1) nu and g1/(g0-1) L of the integrated bounds.
struct FieldSpec {
    GrowthSpec growth;
    double epsilon = 0.0;
    double nu = 1.0;
    double L = 1.0;
    double nu_tilde = 1.0;
    double L_tilde = 1.0;

    static FieldSpec canonical(GrowthSpec growth, double epsilon = 0.0)
    {
        if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
            throw DomainError("FieldSpec: epsilon must be finite and >= 0");
        }
        FieldSpec fs{std::move(growth), epsilon};
        const double g0 = fs.growth.g0();
        const double g1 = fs.growth.g1();
        fs.nu = std::min(1.0, g0 - 1.0);
        fs.L = std::max(1.0, g1 - 1.0);
        fs.nu_tilde = g0 / (g1 - 1.0) * fs.nu;
        fs.L_tilde = g1 / (g0 - 1.0) * fs.L;
        return fs;
    }

    /// epsilon = 1e-8 for singular growth, 0 otherwise.
    static FieldSpec with_default_regularization(const YoungPair& pair)
    {
        const bool singular = classify(pair) == Classification::Singular;
        return canonical(pair.growth(), singular ? 1e-8 : 0.0);
    }

    /// a(m) = g(m)/m, the scalar diffusion coefficient at regularized gradient size m.
    [[nodiscard]] double coefficient(double m) const noexcept
    {
        if (m > 0.0) {
            return growth.g(m) / m;
        }
        return growth.g_prime(0.0);
    }

    /// Scalar flux phi(d) = a(sqrt(d^2 + eps^2)) d along one axis.
    [[nodiscard]] double flux(double d) const noexcept
    {
        const double m = std::sqrt(d * d + epsilon * epsilon);
        if (m == 0.0) {
            return 0.0;
        }
        return growth.g(m) / m * d;
    }

    /// phi'(d) = a(m) + (g'(m) - a(m)) d^2 / m^2.
    [[nodiscard]] double flux_derivative(double d) const noexcept
    {
        const double m = std::sqrt(d * d + epsilon * epsilon);
        if (m == 0.0) {
            return growth.g_prime(0.0);
        }
        const double a = growth.g(m) / m;
        const double w = d * d / (m * m);
        return a + (growth.g_prime(m) - a) * w;
    }
};

template <std::size_t N>
void require_finite(const Vec<N>& xi, const char* op)
{
    for (double v : xi) {
        if (!std::isfinite(v)) {
            throw DomainError(std::string(op) + ": vector must be finite");
        }
    }
}

template <std::size_t N>
Vec<N> eval_A(const FieldSpec& fs, const Vec<N>& xi)
{
    require_finite(xi, "eval_A");
    const double m = std::sqrt(dot(xi, xi) + fs.epsilon * fs.epsilon);
    Vec<N> out{};
    if (m == 0.0) {
        return out;
    }
    const double a = fs.growth.g(m) / m;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = a * xi[i];
    }
    return out;
}

template <std::size_t N>
Vec<N> eval_Vg(const FieldSpec& fs, const Vec<N>& xi)
{
    require_finite(xi, "eval_Vg");
    const double m = norm(xi);
    Vec<N> out{};
    if (m == 0.0) {
        return out;
    }
    const double a = std::sqrt(fs.growth.g(m) / m);
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = a * xi[i];
    }
    return out;
}

template <std::size_t N>
double monotonicity_gap(const FieldSpec& fs, const Vec<N>& xi1, const Vec<N>& xi2)
{
    const Vec<N> a1 = eval_A(fs, xi1);
    const Vec<N> a2 = eval_A(fs, xi2);
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        s += (a1[i] - a2[i]) * (xi1[i] - xi2[i]);
    }
    return s;
}

struct StructureReport {
    double max_coercivity_violation = 0.0;  ///< max (nu_tilde G(|xi|) - <A(xi), xi>)_+ / scale
    double max_growth_violation = 0.0;      ///< max (|A(xi)| - L_tilde G(|xi|)/|xi|)_+ / scale
    std::size_t samples = 0;
    double tolerance = 1e-9;

    [[nodiscard]] bool ok() const noexcept
    {
        return max_coercivity_violation <= tolerance && max_growth_violation <= tolerance;
    }
};

/// Samples 2-vectors with log-uniform length in [1e-4, 1e4] and checks
/// <A(xi), xi> >= max(1, nu_tilde) G(|xi|) and |A(xi)| <= L_tilde G(|xi|) / |xi|.
inline StructureReport structure_check(const FieldSpec& fs, const YoungPair& pair,
                                       std::size_t samples, std::uint64_t seed = 7)
{
    StructureReport report;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> log_len(-4.0, 4.0);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    const double coercive = std::max(1.0, fs.nu_tilde);
    for (std::size_t i = 0; i < samples; ++i) {
        const double len = std::pow(10.0, log_len(rng));
        const double th = angle(rng);
        const Vec<2> xi{len * std::cos(th), len * std::sin(th)};
        const Vec<2> A = eval_A(fs, xi);
        const double m = norm(xi);
        const double G = pair.G(m);
        const double pairing = dot(A, xi);
        const double scale1 = std::max(pairing, coercive * G);
        report.max_coercivity_violation =
            std::max(report.max_coercivity_violation, (coercive * G - pairing) / scale1);
        const double bound = fs.L_tilde * G / m;
        const double size = norm(A);
        report.max_growth_violation =
            std::max(report.max_growth_violation, (size - bound) / std::max(size, bound));
        ++report.samples;
    }
    return report;
}

/// Sampled constants of the strict monotonicity and V_g estimates on random pairs:
///   monotonicity_min = min <A(x1)-A(x2), x1-x2> / (g'(|x1|+|x2|) |x1-x2|^2)
///   vg_max           = max |V_g(x1)-V_g(x2)|^2 / (g'(|x1|+|x2|) |x1-x2|^2)
struct SampledConstants {
    double monotonicity_min = HUGE_VAL;
    double vg_max = 0.0;
    double min_gap = HUGE_VAL;
};

inline SampledConstants sample_structure_constants(const FieldSpec& fs, std::size_t samples,
                                                   std::uint64_t seed = 11)
{
    SampledConstants out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> comp(-3.0, 3.0);
    for (std::size_t i = 0; i < samples; ++i) {
        const Vec<2> x1{comp(rng), comp(rng)};
        const Vec<2> x2{comp(rng), comp(rng)};
        const Vec<2> d{x1[0] - x2[0], x1[1] - x2[1]};
        const double d2 = dot(d, d);
        if (d2 < 1e-12) {
            continue;
        }
        const double gp = g_prime_fd(fs.growth, norm(x1) + norm(x2));
        const double gap = monotonicity_gap(fs, x1, x2);
        out.min_gap = std::min(out.min_gap, gap);
        out.monotonicity_min = std::min(out.monotonicity_min, gap / (gp * d2));
        const Vec<2> v1 = eval_Vg(fs, x1);
        const Vec<2> v2 = eval_Vg(fs, x2);
        const Vec<2> dv{v1[0] - v2[0], v1[1] - v2[1]};
        out.vg_max = std::max(out.vg_max, dot(dv, dv) / (gp * d2));
    }
    return out;
}

}  // namespace orlicz
