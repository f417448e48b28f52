#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "orlicz/errors.hpp"
#include "orlicz/quadrature.hpp"

namespace orlicz {

enum class Family { Power, PiecewisePower, PowerLog };

namespace detail {

/// Integral of f over [0, s] for a function with power-like behaviour at the origin.
///
/// The interval is split into geometric panels [s 2^{-j-1}, s 2^{-j}] (plus a breakpoint at 1)
/// so that every panel is smooth; the remaining sliver at the origin is bounded by
/// x f(x) / g1 <= int_0^x f <= x f(x) / g0 and its midpoint is added once it is negligible.
template <class F>
double integrate_from_zero(const F& f, double s, double g0, double g1, double rel_tol = 1e-12)
{
    if (s <= 0.0) {
        return 0.0;
    }
    double total = 0.0;
    double hi = s;
    if (s > 1.0) {
        total += quad::adaptive_simpson(f, 1.0, s, rel_tol);
        hi = 1.0;
    }
    for (int j = 0; j < 2000; ++j) {
        const double lo = 0.5 * hi;
        const double panel = quad::adaptive_simpson(f, lo, hi, rel_tol);
        total += panel;
        hi = lo;
        const double upper_tail = hi * f(hi) / g0;
        if (upper_tail <= 1e-17 * total || hi < 1e-300) {
            total += 0.5 * (hi * f(hi) / g1 + upper_tail);
            break;
        }
    }
    return total;
}

}  // namespace detail

/// A growth function g with Orlicz bounds g0 - 1 <= s g'(s) / g(s) <= g1 - 1.
///
/// Families (raw form, before normalization):
///   Power(p)              g(s) = s^{p-1}
///   PiecewisePower(p, q)  g(s) = s^{p-1} for s <= 1, s^{q-1} for s > 1
///   PowerLog(p, a)        g(s) = s^{p-1} (1 + log(1 + s))^a
/// When normalized, g is scaled so that the integral of g over [0, 1] is one.
class GrowthSpec {
public:
    static GrowthSpec power(double p, bool normalized = true)
    {
        require_exponent(p, "p");
        GrowthSpec spec(Family::Power, p, p, 0.0, normalized);
        spec.g0_ = p;
        spec.g1_ = p;
        spec.finish();
        return spec;
    }

    static GrowthSpec piecewise_power(double p, double q, bool normalized = true)
    {
        require_exponent(p, "p");
        require_exponent(q, "q");
        GrowthSpec spec(Family::PiecewisePower, p, q, 0.0, normalized);
        spec.g0_ = std::min(p, q);
        spec.g1_ = std::max(p, q);
        spec.finish();
        return spec;
    }

    static GrowthSpec power_log(double p, double a, bool normalized = true)
    {
        require_exponent(p, "p");
        if (!std::isfinite(a)) {
            throw DomainError("PowerLog: a must be finite");
        }
        GrowthSpec spec(Family::PowerLog, p, p, a, normalized);
        // s g'/g = (p - 1) + a h(s) with h(s) = s / ((1 + s)(1 + log(1 + s))) in (0, h_max]
        const double h_max = power_log_h_max();
        spec.g0_ = p + std::min(0.0, a * h_max);
        spec.g1_ = p + std::max(0.0, a * h_max) + 1e-12;
        if (spec.g0_ <= 1.0) {
            throw DomainError("PowerLog: certified g0 must exceed 1");
        }
        spec.finish();
        return spec;
    }

    [[nodiscard]] Family family() const noexcept { return family_; }
    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] double q() const noexcept { return q_; }
    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double g0() const noexcept { return g0_; }
    [[nodiscard]] double g1() const noexcept { return g1_; }
    [[nodiscard]] bool normalized() const noexcept { return normalized_; }
    [[nodiscard]] double norm_constant() const noexcept { return scale_; }

    /// g(s) for s >= 0, without argument checks.
    [[nodiscard]] double g(double s) const noexcept { return scale_ * raw_g(s); }

    /// Analytic g'(s); at the kink of PiecewisePower the value from below is used.
    [[nodiscard]] double g_prime(double s) const noexcept { return scale_ * raw_g_prime(s); }

    [[nodiscard]] std::string describe() const
    {
        std::ostringstream os;
        switch (family_) {
        case Family::Power: os << "Power(" << p_ << ")"; break;
        case Family::PiecewisePower: os << "PiecewisePower(" << p_ << ", " << q_ << ")"; break;
        case Family::PowerLog: os << "PowerLog(" << p_ << ", " << a_ << ")"; break;
        }
        if (normalized_) {
            os << " normalized";
        }
        return os.str();
    }

private:
    GrowthSpec(Family family, double p, double q, double a, bool normalized)
        : family_(family), p_(p), q_(q), a_(a), normalized_(normalized)
    {
    }

    static void require_exponent(double value, const char* name)
    {
        if (!std::isfinite(value) || value <= 1.0) {
            throw DomainError(std::string("growth exponent ") + name + " must be finite and > 1");
        }
    }

    static double power_log_h(double s)
    {
        return s / ((1.0 + s) * (1.0 + std::log1p(s)));
    }

    static double power_log_h_max()
    {
        double best_x = 0.0;
        double best = -1.0;
        for (int i = 0; i <= 4000; ++i) {
            const double x = -8.0 + 16.0 * i / 4000.0;
            const double v = power_log_h(std::pow(10.0, x));
            if (v > best) {
                best = v;
                best_x = x;
            }
        }
        // golden-section refinement in log10(s)
        double lo = best_x - 0.01;
        double hi = best_x + 0.01;
        const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int it = 0; it < 200; ++it) {
            const double x1 = hi - ratio * (hi - lo);
            const double x2 = lo + ratio * (hi - lo);
            if (power_log_h(std::pow(10.0, x1)) < power_log_h(std::pow(10.0, x2))) {
                lo = x1;
            } else {
                hi = x2;
            }
        }
        return std::max(best, power_log_h(std::pow(10.0, 0.5 * (lo + hi))));
    }

    void finish()
    {
        scale_ = 1.0;
        if (normalized_) {
            const auto raw = [this](double s) { return raw_g(s); };
            scale_ = 1.0 / detail::integrate_from_zero(raw, 1.0, g0_, g1_, 1e-13);
        }
    }

    [[nodiscard]] double raw_g(double s) const noexcept
    {
        if (s <= 0.0) {
            return 0.0;
        }
        switch (family_) {
        case Family::Power:
            return p_ == 2.0 ? s : std::pow(s, p_ - 1.0);
        case Family::PiecewisePower:
            return std::pow(s, (s <= 1.0 ? p_ : q_) - 1.0);
        case Family::PowerLog:
            return std::pow(s, p_ - 1.0) * std::pow(1.0 + std::log1p(s), a_);
        }
        return 0.0;
    }

    [[nodiscard]] double raw_g_prime(double s) const noexcept
    {
        const auto power_derivative = [](double s, double e) {
            if (e == 2.0) {
                return 1.0;
            }
            if (s <= 0.0) {
                return e > 2.0 ? 0.0 : HUGE_VAL;
            }
            return (e - 1.0) * std::pow(s, e - 2.0);
        };
        switch (family_) {
        case Family::Power:
            return power_derivative(s, p_);
        case Family::PiecewisePower:
            return power_derivative(s, s <= 1.0 ? p_ : q_);
        case Family::PowerLog: {
            if (s <= 0.0) {
                return power_derivative(0.0, p_);
            }
            const double l = 1.0 + std::log1p(s);
            const double base = std::pow(s, p_ - 1.0) * std::pow(l, a_);
            return base * ((p_ - 1.0) / s + a_ / (l * (1.0 + s)));
        }
        }
        return 0.0;
    }

    Family family_;
    double p_;
    double q_;
    double a_;
    double g0_ = 0.0;
    double g1_ = 0.0;
    bool normalized_;
    double scale_ = 1.0;
};

/// Checked evaluation of g; throws DomainError for negative or NaN arguments.
inline double eval_g(const GrowthSpec& spec, double s)
{
    if (std::isnan(s) || s < 0.0) {
        throw DomainError("eval_g: argument must be a finite number >= 0");
    }
    return spec.g(s);
}

/// Central difference g'(s) with step 1e-6 max(1, s). Across the PiecewisePower kink the
/// one-sided quotient from below is used.
inline double g_prime_fd(const GrowthSpec& spec, double s)
{
    const double h = 1e-6 * std::max(1.0, s);
    if (spec.family() == Family::PiecewisePower && s <= 1.0 && s + h > 1.0) {
        return (spec.g(s) - spec.g(std::max(0.0, s - h))) / std::min(h, s > 0.0 ? s : h);
    }
    if (s < h) {
        return (spec.g(s + h) - spec.g(s)) / h;
    }
    return (spec.g(s + h) - spec.g(s - h)) / (2.0 * h);
}

}  // namespace orlicz
