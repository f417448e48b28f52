#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "orlicz/errors.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/quadrature.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

/// Parameters of the level-set iteration: b1 = 2^{2/n + g1 (1 + 1/n)},
/// b2 = 2^{(3/2 + 2/n) g1 - 1}, b = max(b1, b2). sigma is a free smallness parameter because
/// the iteration constant entering the sharp value is not explicit.
struct DeGiorgiParams {
    int n = 1;
    double g0 = 2.0;
    double g1 = 2.0;
    double sigma = 1e-3;
    double b1 = 0.0;
    double b2 = 0.0;
    double b = 0.0;

    static DeGiorgiParams make(int n, double g0, double g1, double sigma = 1e-3)
    {
        if (n < 1) {
            throw DomainError("DeGiorgiParams: n must be >= 1");
        }
        if (!(sigma > 0.0 && sigma < 1.0)) {
            throw DomainError("DeGiorgiParams: sigma must lie in (0, 1)");
        }
        DeGiorgiParams p{n, g0, g1, sigma};
        p.b1 = std::pow(2.0, 2.0 / n + g1 * (1.0 + 1.0 / n));
        p.b2 = std::pow(2.0, (1.5 + 2.0 / n) * g1 - 1.0);
        p.b = std::max(p.b1, p.b2);
        return p;
    }

    static DeGiorgiParams make(int n, const GrowthSpec& g, double sigma = 1e-3)
    {
        return make(n, g.g0(), g.g1(), sigma);
    }
};

/// Intrinsic height theta = k^2 / G(k / rho).
inline double scaling_theta(const YoungPair& pair, double k, double rho)
{
    if (!(k > 0.0) || !(rho > 0.0)) {
        throw DomainError("scaling_theta: k and rho must be > 0");
    }
    return k * k / pair.G(k / rho);
}

/// Grid node used as the top-center (x0, t0) of backward cylinders Q(rho, theta).
struct Anchor {
    int t = 0;
    int i = 0;
    int j = 0;
};

/// Nodes of Q(rho, theta) = {|x - x0|_inf <= rho} x (t0 - theta, t0].
inline std::vector<std::size_t> backward_cylinder_nodes(const SpaceTimeGrid& g, const Anchor& a,
                                                        double rho, double theta)
{
    std::vector<std::size_t> out;
    const double x0 = g.x(a.i);
    const double y0 = g.y(a.j);
    const double t0 = g.time(a.t);
    const double slack = 1e-12 * (g.side + g.T);
    for (int t = a.t; t >= 0; --t) {
        if (!(g.time(t) > t0 - theta + slack)) {
            break;
        }
        for (int j = 0; j < g.ny(); ++j) {
            if (g.dim == 2 && std::abs(g.y(j) - y0) > rho + slack) {
                continue;
            }
            for (int i = 0; i < g.nx; ++i) {
                if (std::abs(g.x(i) - x0) <= rho + slack) {
                    out.push_back(g.index(t, i, j));
                }
            }
        }
    }
    return out;
}

/// Node average over Q(rho, theta) of G(u / rho) + u^2 / theta.
inline double k_condition_lhs(const ScalarField& u, const Anchor& a, double rho, double theta,
                              const YoungPair& pair)
{
    const auto nodes = backward_cylinder_nodes(u.grid(), a, rho, theta);
    if (nodes.empty()) {
        throw DomainError("k_condition_lhs: empty cylinder");
    }
    double sum = 0.0;
    for (auto idx : nodes) {
        const double v = u[idx];
        if (v < 0.0) {
            throw DomainError("k_condition_lhs: field must be nonnegative on the cylinder");
        }
        sum += pair.G(v / rho) + v * v / theta;
    }
    return sum / double(nodes.size());
}

struct DeGiorgiVerdict {
    bool condition_met = false;
    bool bound_holds = false;
    double lhs = 0.0;
    double threshold = 0.0;  ///< sigma G(k / rho)
    double sup_half = 0.0;   ///< sup of u over Q(rho/2, theta/2)
    double margin = 0.0;     ///< k - sup_half when the condition is met, threshold - lhs otherwise
};

/// Checks the implication "average condition on Q(rho, theta) => sup over Q(rho/2, theta/2) <= k"
/// for one (k, rho, theta) linked by theta = k^2 / G(k / rho).
inline DeGiorgiVerdict check_degiorgi(const ScalarField& u, const Anchor& a, double k, double rho,
                                      double theta, const DeGiorgiParams& params,
                                      const YoungPair& pair)
{
    const double expected = scaling_theta(pair, k, rho);
    if (std::abs(theta - expected) > 1e-8 * expected) {
        throw DomainError("check_degiorgi: theta does not match k^2 / G(k / rho)");
    }
    DeGiorgiVerdict v;
    v.lhs = k_condition_lhs(u, a, rho, theta, pair);
    v.threshold = params.sigma * pair.G(k / rho);
    v.condition_met = v.lhs <= v.threshold;
    const auto half = backward_cylinder_nodes(u.grid(), a, 0.5 * rho, 0.5 * theta);
    v.sup_half = sup_over(u, half);
    v.bound_holds = v.sup_half <= k;
    v.margin = v.condition_met ? k - v.sup_half : v.threshold - v.lhs;
    return v;
}

// ---------------------------------------------------------------------------
// Boundedness level selection

struct LevelSearchOptions {
    double s_max = 1e12;
    int points_per_decade = 10000;
    long max_m = 100000000;
};

struct BoundednessLevel {
    double k = 0.0;
    double rho = 0.0;
    double theta = 0.0;
    long m_star = 0;         ///< index of the first sequence element passing the case threshold
    long extra_steps = 0;    ///< further increments needed for the discrete average condition
    double s_m = 0.0;
    double threshold = 0.0;  ///< lower bound on s_m from the case's selection rule
    double c_star = 0.0;
    double M = 1.0;          ///< intermediate case only
    double sampling_error = 0.0;  ///< relative spacing of the sampled s-grid
    Classification case_used = Classification::Intermediate;
};

namespace detail {

/// Log-spaced grid on [lo, hi] with G accumulated panel by panel.
struct SampledYoung {
    std::vector<double> s;
    std::vector<double> G;
};

inline SampledYoung sample_young(const YoungPair& pair, double lo, double hi, int per_decade)
{
    SampledYoung out;
    const double l0 = std::log10(lo);
    const auto count = static_cast<std::size_t>(std::ceil((std::log10(hi) - l0) * per_decade)) + 1;
    out.s.resize(count);
    out.G.resize(count);
    const auto g = [&pair](double r) { return pair.growth().g(r); };
    for (std::size_t i = 0; i < count; ++i) {
        out.s[i] = std::pow(10.0, l0 + double(i) / per_decade);
        out.G[i] = i == 0 ? pair.G(out.s[0])
                          : out.G[i - 1] + quad::adaptive_simpson(g, out.s[i - 1], out.s[i], 1e-12);
    }
    return out;
}

/// suffix_arg[i] = argmax_{j >= i} values[j]
inline std::vector<std::size_t> suffix_argmax(const std::vector<double>& values)
{
    std::vector<std::size_t> arg(values.size());
    for (std::size_t i = values.size(); i-- > 0;) {
        arg[i] = (i + 1 < values.size() && values[arg[i + 1]] > values[i]) ? arg[i + 1] : i;
    }
    return arg;
}

inline void require_compact(const SpaceTimeGrid& g, const Anchor& a, double radius, double height)
{
    const double slack = 1e-12 * (g.side + g.T);
    const bool inside_x = g.x(a.i) - radius > g.origin[0] - slack &&
                          g.x(a.i) + radius < g.origin[0] + g.side + slack;
    const bool inside_y = g.dim == 1 || (g.y(a.j) - radius > g.origin[1] - slack &&
                                         g.y(a.j) + radius < g.origin[1] + g.side + slack);
    if (!inside_x || !inside_y || g.time(a.t) - height < -slack) {
        throw DomainError("find_boundedness_level: reference cylinder is not inside the domain");
    }
}

}  // namespace detail

/// Selects (k, rho, theta) satisfying the average condition by the case analysis on the growth of
/// s^2 / G(s):
///   intermediate: s_m = 1 + m, M = sampled max of max(s^2/G, G/s^2); radius r < 1/M and
///                 threshold (avg_{Q(r,r)} (G(u/r) + M (u/r)^2) / (sigma r))^{1/2}; k = r s_m,
///                 rho = r, theta = k^2 / G(k/r)
///   degenerate:   D_m = sup_{s >= s0+m} s^2/G(s), s_m its sampled maximizer,
///                 threshold (c* avg_{Q(r,r^2)} G(u/r) / sigma)^{1/2},
///                 c* = 2(1 + 2 eps^{2-g1}), eps = (sigma/4)^{1/min(g0,2)}; k = r s_m, rho = r
///   singular:     S_m = sup_{s >= s0+m} s / G^{-1}(s^2), s_m its sampled maximizer,
///                 threshold (c* avg_{Q(r,r^2)} u^2/r^2 / sigma)^{1/(n+2-2n/g0)},
///                 c* = 2((2 eps^{1-2/g0})^{g1} + 1); k = r s_m, rho = k / G^{-1}(k^2/r^2),
///                 theta = r^2
/// On the grid the node averages are not exactly proportional to the continuous ones, so m is
/// increased further until the discrete average condition holds.
inline BoundednessLevel find_boundedness_level(const ScalarField& u, const Anchor& anchor,
                                               double r, const YoungPair& pair,
                                               const DeGiorgiParams& params,
                                               Classification cls,
                                               const LevelSearchOptions& opt = {})
{
    if (!(r > 0.0)) {
        throw DomainError("find_boundedness_level: r must be > 0");
    }
    const SpaceTimeGrid& grid = u.grid();
    const double sigma = params.sigma;
    const double g0 = params.g0;
    const double g1 = params.g1;
    const int n = params.n;
    const double eps = std::pow(sigma / 4.0, 1.0 / std::min(g0, 2.0));

    BoundednessLevel out;
    out.case_used = cls;
    out.sampling_error = std::pow(10.0, 1.0 / opt.points_per_decade) - 1.0;

    const auto average = [&](double height, auto&& f) {
        const auto nodes = backward_cylinder_nodes(grid, anchor, r, height);
        if (nodes.empty()) {
            throw DomainError("find_boundedness_level: empty reference cylinder");
        }
        double sum = 0.0;
        for (auto idx : nodes) {
            if (u[idx] < 0.0) {
                throw DomainError("find_boundedness_level: field must be nonnegative");
            }
            sum += f(u[idx]);
        }
        return sum / double(nodes.size());
    };

    // the sequence s_m, in increasing m, with the rho / theta it induces
    std::vector<double> seq_s;
    const auto accept = [&](long m, double s, double rho, double theta) {
        if (k_condition_lhs(u, anchor, rho, theta, pair) <= sigma * pair.G(r * s / rho)) {
            out.k = r * s;
            out.rho = rho;
            out.theta = theta;
            out.s_m = s;
            out.extra_steps = m - out.m_star;
            return true;
        }
        return false;
    };

    if (cls == Classification::Intermediate) {
        const auto table = detail::sample_young(pair, 1.0, opt.s_max, std::max(10, opt.points_per_decade / 100));
        double M = 1.0;
        for (std::size_t i = 0; i < table.s.size(); ++i) {
            const double ratio = table.s[i] * table.s[i] / table.G[i];
            M = std::max({M, ratio, 1.0 / ratio});
        }
        out.M = M;
        if (!(r < 1.0 / M)) {
            throw DomainError("find_boundedness_level: intermediate case needs r < 1/M");
        }
        detail::require_compact(grid, anchor, r, r);
        const double avg = average(r, [&](double v) { return pair.G(v / r) + M * (v / r) * (v / r); });
        out.threshold = std::sqrt(avg / (sigma * r));
        long m = std::max(0L, long(std::ceil(out.threshold - 1.0)));
        out.m_star = m;
        for (; m <= opt.max_m && 1.0 + m <= opt.s_max; ++m) {
            const double s = 1.0 + m;
            const double k = r * s;
            if (accept(m, s, r, scaling_theta(pair, k, r))) {
                return out;
            }
        }
        throw InconclusiveError("find_boundedness_level: s-grid exhausted (intermediate case)");
    }

    detail::require_compact(grid, anchor, r, r * r);
    if (cls == Classification::Degenerate) {
        const auto table = detail::sample_young(pair, 1.0, opt.s_max, opt.points_per_decade);
        std::vector<double> ratio(table.s.size());
        for (std::size_t i = 0; i < ratio.size(); ++i) {
            ratio[i] = table.s[i] * table.s[i] / table.G[i];
        }
        const auto arg = detail::suffix_argmax(ratio);
        std::size_t i0 = 0;
        while (i0 < ratio.size() && ratio[arg[i0]] > 1.0) {
            ++i0;
        }
        if (i0 == ratio.size()) {
            throw InconclusiveError("find_boundedness_level: no s0 with sup s^2/G <= 1 on the grid");
        }
        const double s0 = table.s[i0];
        out.c_star = 2.0 * (1.0 + 2.0 * std::pow(eps, 2.0 - g1));
        const double avg = average(r * r, [&](double v) { return pair.G(v / r); });
        out.threshold = std::sqrt(out.c_star / sigma * avg);
        bool passed = false;
        for (long m = 0; m <= opt.max_m; ++m) {
            const auto it = std::lower_bound(table.s.begin(), table.s.end(), s0 + double(m));
            if (it == table.s.end()) {
                break;
            }
            const double s = table.s[arg[std::size_t(it - table.s.begin())]];
            if (!passed) {
                if (s < out.threshold) {
                    continue;
                }
                passed = true;
                out.m_star = m;
            }
            const double k = r * s;
            if (accept(m, s, r, scaling_theta(pair, k, r))) {
                return out;
            }
        }
        throw InconclusiveError("find_boundedness_level: s-grid exhausted (degenerate case)");
    }

    // singular: parametrize by y = G^{-1}(s^2), i.e. s = sqrt(G(y))
    const double y_lo = pair.G_inverse(1.0);
    const auto table = detail::sample_young(pair, y_lo, opt.s_max, opt.points_per_decade);
    std::vector<double> s_of(table.s.size());
    std::vector<double> ratio(table.s.size());
    for (std::size_t i = 0; i < ratio.size(); ++i) {
        s_of[i] = std::sqrt(table.G[i]);
        ratio[i] = s_of[i] / table.s[i];
    }
    const auto arg = detail::suffix_argmax(ratio);
    std::size_t i0 = 0;
    while (i0 < ratio.size() && (s_of[i0] < 1.0 || ratio[arg[i0]] > 1.0)) {
        ++i0;
    }
    if (i0 == ratio.size()) {
        throw InconclusiveError("find_boundedness_level: no s0 with sup s/G^{-1}(s^2) <= 1 on the grid");
    }
    const double s0 = s_of[i0];
    out.c_star = 2.0 * (std::pow(2.0 * std::pow(eps, 1.0 - 2.0 / g0), g1) + 1.0);
    const double avg = average(r * r, [&](double v) { return v * v / (r * r); });
    const double exponent = double(n) + 2.0 - 2.0 * n / g0;
    if (!(exponent > 0.0)) {
        throw DomainError("find_boundedness_level: singular case needs g0 > 2n/(n+2)");
    }
    out.threshold = std::pow(out.c_star / sigma * avg, 1.0 / exponent);
    bool passed = false;
    for (long m = 0; m <= opt.max_m; ++m) {
        const auto it = std::lower_bound(s_of.begin(), s_of.end(), s0 + double(m));
        if (it == s_of.end()) {
            break;
        }
        const std::size_t idx = arg[std::size_t(it - s_of.begin())];
        const double s = s_of[idx];
        if (!passed) {
            if (s < out.threshold) {
                continue;
            }
            passed = true;
            out.m_star = m;
        }
        const double k = r * s;
        const double rho = k / pair.G_inverse(k * k / (r * r));
        if (accept(m, s, rho, r * r)) {
            // theta = r^2 matches k^2 / G(k / rho) up to the inversion accuracy
            out.theta = scaling_theta(pair, k, rho);
            return out;
        }
    }
    throw InconclusiveError("find_boundedness_level: s-grid exhausted (singular case)");
}

// ---------------------------------------------------------------------------
// Poincare inequality on time slices

struct PoincareReport {
    double max_slack = -HUGE_VAL;  ///< max over slices of sum G(|u|/diam) - sum G(|Du|)
    int worst_slice = 0;
};

/// Per slice: sum over interior nodes of G(|u| / diam) h^n minus sum over cells of
/// G(|Du|) h^n with forward-difference cell gradients. Requires zero lateral values.
inline PoincareReport poincare_check(const ScalarField& u, const YoungPair& pair)
{
    const SpaceTimeGrid& g = u.grid();
    const double scale = std::max(1.0, sup_norm(u.values()));
    for (int t = 0; t <= g.nt; ++t) {
        for (int j = 0; j < g.ny(); ++j) {
            for (int i = 0; i < g.nx; ++i) {
                if (g.on_domain_boundary(i, j) && std::abs(u.at(t, i, j)) > 1e-14 * scale) {
                    throw DomainError("poincare_check: field must vanish on the spatial boundary");
                }
            }
        }
    }
    const double h = g.h();
    const double vol = g.cell_volume();
    const double diam = g.diameter();
    const int cells_y = g.dim == 2 ? g.nx - 1 : 1;
    PoincareReport rep;
    for (int t = 0; t <= g.nt; ++t) {
        double lhs = 0.0;
        double rhs = 0.0;
        for (int j = 0; j < g.ny(); ++j) {
            for (int i = 0; i < g.nx; ++i) {
                if (!g.on_domain_boundary(i, j)) {
                    lhs += pair.G(std::abs(u.at(t, i, j)) / diam) * vol;
                }
            }
        }
        for (int j = 0; j < cells_y; ++j) {
            for (int i = 0; i + 1 < g.nx; ++i) {
                double d2 = std::pow((u.at(t, i + 1, j) - u.at(t, i, j)) / h, 2);
                if (g.dim == 2) {
                    d2 += std::pow((u.at(t, i, j + 1) - u.at(t, i, j)) / h, 2);
                }
                rhs += pair.G(std::sqrt(d2)) * vol;
            }
        }
        if (lhs - rhs > rep.max_slack) {
            rep.max_slack = lhs - rhs;
            rep.worst_slice = t;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Lower regularization

/// Minimum over the parabolic stencil B_r(x) x (t - r^2/2, t + r^2/2) with r = radius h and
/// B_r the sup-norm ball, intersected with the grid.
inline ScalarField essinf_filter(const ScalarField& u, int radius)
{
    if (radius < 0) {
        throw DomainError("essinf_filter: radius must be >= 0");
    }
    const SpaceTimeGrid& g = u.grid();
    const double r = radius * g.h();
    // levels strictly inside the half window r^2/2
    const double half = 0.5 * r * r / g.tau();
    int dt = static_cast<int>(std::ceil(half)) - 1;
    dt = std::max(0, dt);
    const int ry = g.dim == 2 ? radius : 0;
    ScalarField out(g, FieldKind::Diagnostic);
    for (int t = 0; t <= g.nt; ++t) {
        for (int j = 0; j < g.ny(); ++j) {
            for (int i = 0; i < g.nx; ++i) {
                double m = u.at(t, i, j);
                for (int tt = std::max(0, t - dt); tt <= std::min(g.nt, t + dt); ++tt) {
                    for (int jj = std::max(0, j - ry); jj <= std::min(g.ny() - 1, j + ry); ++jj) {
                        for (int ii = std::max(0, i - radius); ii <= std::min(g.nx - 1, i + radius); ++ii) {
                            m = std::min(m, u.at(tt, ii, jj));
                        }
                    }
                }
                out.at(t, i, j) = m;
            }
        }
    }
    return out;
}

/// Limit of essinf_filter as the radius shrinks through r_levels, ..., 1 to the sub-grid scale.
/// The stencils are nested, so the sequence is pointwise nondecreasing; below the grid spacing the
/// stencil is the node itself and the limit is reached. `deficits`, when given, receives
/// sup(u - filter) for radius r_levels down to 1.
inline ScalarField essliminf_regularize(const ScalarField& u, int r_levels,
                                        std::vector<double>* deficits = nullptr)
{
    if (r_levels < 1) {
        throw DomainError("essliminf_regularize: r_levels must be >= 1");
    }
    if (deficits) {
        deficits->clear();
        for (int r = r_levels; r >= 1; --r) {
            const ScalarField f = essinf_filter(u, r);
            double d = 0.0;
            for (std::size_t k = 0; k < u.values().size(); ++k) {
                d = std::max(d, u[k] - f[k]);
            }
            deficits->push_back(d);
        }
    }
    ScalarField out = essinf_filter(u, 0);
    out.set_kind(FieldKind::Diagnostic);
    return out;
}

}  // namespace orlicz
