#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "orlicz/errors.hpp"
#include "orlicz/growth.hpp"
#include "orlicz/quadrature.hpp"

namespace orlicz {

/// The Young function G(s) = int_0^s g together with its complement
/// G~(s) = sup_r (s r - G(r)), built over a cumulative quadrature table.
class YoungPair {
public:
    explicit YoungPair(GrowthSpec spec) : spec_(std::move(spec))
    {
        const auto g = [this](double r) { return spec_.g(r); };
        const int count = (kMaxExp - kMinExp) * kPerDecade + 1;
        nodes_.resize(count);
        cumulative_.resize(count);
        for (int j = 0; j < count; ++j) {
            nodes_[j] = node(j);
        }
        cumulative_[0] = detail::integrate_from_zero(g, nodes_[0], spec_.g0(), spec_.g1(), 1e-13);
        for (int j = 1; j < count; ++j) {
            cumulative_[j] = cumulative_[j - 1] +
                             quad::adaptive_simpson(g, nodes_[j - 1], nodes_[j], 1e-13);
        }
    }

    [[nodiscard]] const GrowthSpec& growth() const noexcept { return spec_; }

    /// G(s) = int_0^s g(r) dr, s >= 0, no argument checks.
    [[nodiscard]] double G(double s) const
    {
        if (s <= 0.0) {
            return 0.0;
        }
        const auto g = [this](double r) { return spec_.g(r); };
        if (s < nodes_.front()) {
            return detail::integrate_from_zero(g, s, spec_.g0(), spec_.g1());
        }
        if (s >= nodes_.back()) {
            double total = cumulative_.back();
            double lo = nodes_.back();
            while (lo < s) {
                const double hi = std::min(s, 2.0 * lo);
                total += quad::adaptive_simpson(g, lo, hi, 1e-12);
                lo = hi;
            }
            return total;
        }
        auto j = static_cast<std::size_t>(
            std::clamp((std::log10(s) - kMinExp) * kPerDecade, 0.0, double(nodes_.size() - 2)));
        while (j > 0 && nodes_[j] > s) {
            --j;
        }
        while (j + 1 < nodes_.size() && nodes_[j + 1] <= s) {
            ++j;
        }
        return cumulative_[j] + quad::adaptive_simpson(g, nodes_[j], s, 1e-12);
    }

    /// g^{-1}(y) by bisection on the increasing g.
    [[nodiscard]] double g_inverse(double y) const
    {
        return invert([this](double s) { return spec_.g(s); }, y);
    }

    /// G^{-1}(y) by bisection on the increasing G.
    [[nodiscard]] double G_inverse(double y) const
    {
        return invert([this](double s) { return G(s); }, y);
    }

    /// G~(s) via the first-order condition g(r) = s.
    [[nodiscard]] double G_conj(double s) const
    {
        if (s <= 0.0) {
            return 0.0;
        }
        const double r = g_inverse(s);
        return std::max(0.0, s * r - G(r));
    }

private:
    static constexpr int kMinExp = -12;
    static constexpr int kMaxExp = 12;
    static constexpr int kPerDecade = 16;

    static double node(int j)
    {
        // integer powers of ten are hit exactly, so the PiecewisePower kink at 1 is a node
        if (j % kPerDecade == 0) {
            return std::pow(10.0, kMinExp + j / kPerDecade);
        }
        return std::pow(10.0, kMinExp + double(j) / kPerDecade);
    }

    template <class F>
    static double invert(const F& f, double y)
    {
        if (!(y > 0.0)) {
            return 0.0;
        }
        double lo = 0.0;
        double hi = 1.0;
        if (f(hi) < y) {
            lo = hi;
            while (f(hi) < y) {
                lo = hi;
                hi *= 2.0;
                if (!std::isfinite(hi)) {
                    return HUGE_VAL;
                }
            }
        } else {
            while (hi > 1e-300 && f(0.5 * hi) >= y) {
                hi *= 0.5;
            }
            lo = 0.5 * hi;
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) {
                break;
            }
            (f(mid) < y ? lo : hi) = mid;
        }
        return (y - f(lo) <= f(hi) - y) ? lo : hi;
    }

    GrowthSpec spec_;
    std::vector<double> nodes_;
    std::vector<double> cumulative_;
};

inline void require_nonnegative(double s, const char* op)
{
    if (std::isnan(s) || s < 0.0 || std::isinf(s)) {
        throw DomainError(std::string(op) + ": argument must be finite and >= 0");
    }
}

inline double eval_G(const YoungPair& pair, double s)
{
    require_nonnegative(s, "eval_G");
    return pair.G(s);
}

inline double eval_G_conj(const YoungPair& pair, double s)
{
    require_nonnegative(s, "eval_G_conj");
    return pair.G_conj(s);
}

inline double inverse_G(const YoungPair& pair, double y)
{
    require_nonnegative(y, "inverse_G");
    return pair.G_inverse(y);
}

/// Luxemburg norm inf{lambda > 0 : sum_i w_i G(|u_i| / lambda) <= 1}.
inline double luxemburg_norm(const YoungPair& pair, std::span<const double> values,
                             std::span<const double> weights)
{
    if (values.size() != weights.size()) {
        throw DomainError("luxemburg_norm: values and weights differ in length");
    }
    double peak = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw DomainError("luxemburg_norm: field must be finite");
        }
        peak = std::max(peak, std::abs(v));
    }
    if (peak == 0.0) {
        return 0.0;
    }
    const auto modular = [&](double lambda) {
        double sum = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i] != 0.0 && weights[i] > 0.0) {
                sum += weights[i] * pair.G(std::abs(values[i]) / lambda);
            }
        }
        return sum;
    };
    // the modular is decreasing in lambda; bracket the level set {modular = 1}
    double lo = peak;
    double hi = peak;
    while (modular(hi) > 1.0) {
        hi *= 2.0;
    }
    while (modular(lo) <= 1.0 && lo > 1e-300) {
        lo *= 0.5;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (modular(mid) > 1.0 ? lo : hi) = mid;
    }
    return hi;
}

// ---------------------------------------------------------------------------
// Classification of the tail behaviour of s^2 / G(s)

enum class Classification { Degenerate, Singular, Intermediate };

inline const char* to_string(Classification c)
{
    switch (c) {
    case Classification::Degenerate: return "degenerate";
    case Classification::Singular: return "singular";
    case Classification::Intermediate: return "intermediate";
    }
    return "?";
}

struct ClassifyOptions {
    double eps_c = 1e-3;
    double window_lo = 1e3;
    double window_hi = 1e9;
    int samples = 601;
    /// relative slack tolerated against a monotone trend of s^2 / G(s)
    double trend_tol = 1e-6;
};

struct TailEstimate {
    double a = 0.0;  ///< liminf estimate of s^2 / G(s)
    double A = 0.0;  ///< limsup estimate of s^2 / G(s)
    Classification classification = Classification::Intermediate;
};

/// Samples s^2 / G(s) on the window; a and A are the min and max over its last decade.
inline TailEstimate estimate_tail(const YoungPair& pair, const ClassifyOptions& opt = {})
{
    const double l0 = std::log10(opt.window_lo);
    const double l1 = std::log10(opt.window_hi);
    std::vector<double> ratio(opt.samples);
    std::vector<double> s(opt.samples);
    for (int i = 0; i < opt.samples; ++i) {
        s[i] = std::pow(10.0, l0 + (l1 - l0) * i / (opt.samples - 1));
        ratio[i] = s[i] * s[i] / pair.G(s[i]);
    }
    const double trend = ratio.back() - ratio.front();
    for (int i = 1; i < opt.samples; ++i) {
        const double step = ratio[i] - ratio[i - 1];
        const double scale = std::max(std::abs(ratio[i]), std::abs(ratio[i - 1]));
        if (step * (trend >= 0.0 ? 1.0 : -1.0) < -opt.trend_tol * scale) {
            throw InconclusiveError("classify: s^2/G(s) is not monotone on the sampling window");
        }
    }
    TailEstimate est;
    est.a = HUGE_VAL;
    est.A = 0.0;
    for (int i = 0; i < opt.samples; ++i) {
        if (s[i] >= opt.window_hi / 10.0 * (1.0 - 1e-12)) {
            est.a = std::min(est.a, ratio[i]);
            est.A = std::max(est.A, ratio[i]);
        }
    }
    if (est.A <= opt.eps_c) {
        est.classification = Classification::Degenerate;
    } else if (est.a >= 1.0 / opt.eps_c) {
        est.classification = Classification::Singular;
    } else {
        est.classification = Classification::Intermediate;
    }
    return est;
}

inline Classification classify(const YoungPair& pair, const ClassifyOptions& opt = {})
{
    return estimate_tail(pair, opt).classification;
}

// ---------------------------------------------------------------------------
// Orlicz inequality battery

struct InequalityViolation {
    std::string id;
    double s = 0.0;
    double slack = 0.0;  ///< rhs - lhs (negative for a violation)
};

struct InequalityStats {
    double max_rel_violation = 0.0;
    double min_rel_slack = HUGE_VAL;
    std::size_t evaluations = 0;
};

struct InequalityReport {
    double tolerance = 1e-7;
    double max_rel_violation = 0.0;
    std::map<std::string, InequalityStats> by_id;
    std::vector<InequalityViolation> failures;

    [[nodiscard]] bool ok() const noexcept { return failures.empty(); }
};

class InequalityRecorder {
public:
    explicit InequalityRecorder(InequalityReport& report) : report_(report) {}

    /// Records lhs <= rhs at argument s.
    void le(const std::string& id, double s, double lhs, double rhs)
    {
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        const double rel_slack = (rhs - lhs) / scale;
        auto& stats = report_.by_id[id];
        ++stats.evaluations;
        stats.min_rel_slack = std::min(stats.min_rel_slack, rel_slack);
        const double violation = std::max(0.0, -rel_slack);
        stats.max_rel_violation = std::max(stats.max_rel_violation, violation);
        report_.max_rel_violation = std::max(report_.max_rel_violation, violation);
        if (violation > report_.tolerance || !std::isfinite(rel_slack)) {
            report_.failures.push_back({id, s, rhs - lhs});
        }
    }

private:
    InequalityReport& report_;
};

/// Evaluates the Delta_2 bounds for g and G, the index bounds for G and G~, the triangle
/// inequality modulo 2^{g1}, G~(G(s)/s) <= G(s) and Young's inequality with epsilon at
/// `samples` log-spaced points of [1e-6, 1e6] (random partners drawn from `seed`).
inline InequalityReport check_inequalities(const YoungPair& pair, std::size_t samples,
                                           std::uint64_t seed = 1, double tolerance = 1e-7)
{
    if (samples < 1) {
        throw DomainError("check_inequalities: samples must be >= 1");
    }
    const GrowthSpec& spec = pair.growth();
    const double g0 = spec.g0();
    const double g1 = spec.g1();
    InequalityReport report;
    report.tolerance = tolerance;
    InequalityRecorder rec(report);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> log_s(-6.0, 6.0);
    std::uniform_real_distribution<double> log_eps(-3.0, 0.0);

    for (std::size_t i = 0; i < samples; ++i) {
        const double s = samples == 1 ? 1.0 : std::pow(10.0, -6.0 + 12.0 * double(i) / double(samples - 1));
        const double gs = spec.g(s);
        const double Gs = pair.G(s);

        for (double alpha : {0.5, 2.0}) {
            const double lo_g = std::min(std::pow(alpha, g0 - 1.0), std::pow(alpha, g1 - 1.0));
            const double hi_g = std::max(std::pow(alpha, g0 - 1.0), std::pow(alpha, g1 - 1.0));
            const double g_as = spec.g(alpha * s);
            rec.le("delta2_g", s, lo_g * gs, g_as);
            rec.le("delta2_g", s, g_as, hi_g * gs);
            const double lo_G = std::min(std::pow(alpha, g0), std::pow(alpha, g1));
            const double hi_G = std::max(std::pow(alpha, g0), std::pow(alpha, g1));
            const double G_as = pair.G(alpha * s);
            rec.le("delta2_G", s, lo_G * Gs, G_as);
            rec.le("delta2_G", s, G_as, hi_G * Gs);
        }

        rec.le("index_G", s, g0 * Gs, s * gs);
        rec.le("index_G", s, s * gs, g1 * Gs);

        const double conj = pair.G_conj(s);
        const double conj_slope = pair.g_inverse(s);
        rec.le("index_Gconj", s, g1 / (g1 - 1.0) * conj, s * conj_slope);
        rec.le("index_Gconj", s, s * conj_slope, g0 / (g0 - 1.0) * conj);

        const double r = std::pow(10.0, log_s(rng));
        rec.le("triangle", s, pair.G(s + r), std::pow(2.0, g1) * (Gs + pair.G(r)));

        rec.le("young_complement", s, pair.G_conj(Gs / s), Gs);

        const double t = std::pow(10.0, log_s(rng));
        const double eps = std::pow(10.0, log_eps(rng));
        rec.le("young_eps", s, s * t,
               eps * Gs + std::pow(eps, -1.0 / (g0 - 1.0)) * pair.G_conj(t));
    }
    return report;
}

}  // namespace orlicz
