#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "orlicz/analysis.hpp"
#include "orlicz/csv.hpp"
#include "orlicz/evolution.hpp"
#include "orlicz/obstacle.hpp"
#include "orlicz/problems.hpp"
#include "orlicz/schwarz.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

struct CheckResult {
    std::string id;
    bool passed = false;
    double margin = 0.0;  ///< distance to the threshold, positive when passing
    double seconds = 0.0;
    std::string detail;
};

struct VerifyOptions {
    double sigma = 1e-3;
    std::uint64_t seed = 1;
};

/// The growth families exercised by the battery.
inline std::vector<GrowthSpec> reference_families()
{
    return {GrowthSpec::power(1.5), GrowthSpec::power(2.0), GrowthSpec::power(3.0),
            GrowthSpec::piecewise_power(1.5, 3.0), GrowthSpec::power_log(2.0, 1.0)};
}

namespace detail {

class Stopwatch {
public:
    [[nodiscard]] double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Smooth pseudo-random field: offset + sum of a few separable modes in x, y and t.
inline ScalarField random_smooth_field(const SpaceTimeGrid& grid, std::mt19937_64& rng,
                                       double amplitude, double offset,
                                       FieldKind kind = FieldKind::Boundary)
{
    std::uniform_real_distribution<double> amp(-amplitude, amplitude);
    std::uniform_int_distribution<int> mode(1, 4);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    struct Mode {
        double a;
        int kx, ky;
        double w, phx, phy;
    };
    std::vector<Mode> modes;
    for (int m = 0; m < 3; ++m) {
        modes.push_back({amp(rng), mode(rng), mode(rng), 2.0 * mode(rng), phase(rng), phase(rng)});
    }
    const double side = grid.side;
    return ScalarField::from_function(
        grid,
        [&](double t, double x, double y) {
            double v = offset;
            for (const auto& m : modes) {
                const double sx = std::sin(m.kx * std::numbers::pi * (x - grid.origin[0]) / side + m.phx);
                const double sy = grid.dim == 2
                                      ? std::sin(m.ky * std::numbers::pi * (y - grid.origin[1]) / side + m.phy)
                                      : 1.0;
                v += m.a * sx * sy * std::cos(m.w * t);
            }
            return v;
        },
        kind);
}

/// Nonnegative random field: |smooth field|.
inline ScalarField random_nonnegative_field(const SpaceTimeGrid& grid, std::mt19937_64& rng,
                                            double amplitude)
{
    ScalarField f = random_smooth_field(grid, rng, amplitude, 0.0);
    for (double& v : f.values()) {
        v = std::abs(v);
    }
    return f;
}

/// Largest and smallest values on the parabolic boundary and over the whole grid.
struct Extrema {
    double boundary_max = -HUGE_VAL;
    double boundary_min = HUGE_VAL;
    double all_max = -HUGE_VAL;
    double all_min = HUGE_VAL;
};

inline Extrema extrema(const ScalarField& u)
{
    Extrema e;
    const auto pb = parabolic_boundary(u.grid(), full_cylinder(u.grid())).nodes;
    for (auto idx : pb) {
        e.boundary_max = std::max(e.boundary_max, u[idx]);
        e.boundary_min = std::min(e.boundary_min, u[idx]);
    }
    for (double v : u.values()) {
        e.all_max = std::max(e.all_max, v);
        e.all_min = std::min(e.all_min, v);
    }
    return e;
}

inline void raise_to_obstacle_on_boundary(ScalarField& boundary, const ScalarField& psi)
{
    for (auto idx : parabolic_boundary(boundary.grid(), full_cylinder(boundary.grid())).nodes) {
        boundary[idx] = std::max(boundary[idx], psi[idx]);
    }
}

/// Sup difference between a coarse field and a fine field on nodes shared by both grids
/// (fine grid: 2nx - 1 nodes per axis, 2nt levels).
inline double coarse_fine_difference(const ScalarField& coarse, const ScalarField& fine)
{
    const SpaceTimeGrid& c = coarse.grid();
    double d = 0.0;
    for (int t = 0; t <= c.nt; ++t) {
        for (int j = 0; j < c.ny(); ++j) {
            for (int i = 0; i < c.nx; ++i) {
                d = std::max(d, std::abs(coarse.at(t, i, j) -
                                         fine.at(2 * t, 2 * i, c.dim == 2 ? 2 * j : 0)));
            }
        }
    }
    return d;
}

}  // namespace detail

/// The standard bump obstacle problem of the battery: zero data, ramped bump.
inline ObstacleProblemSpec bump_problem(const SpaceTimeGrid& grid, const GrowthSpec& growth,
                                        double height = 0.2, double width = 0.3)
{
    return {bump_obstacle(grid, {0.5, 0.5}, width, height, 0.0),
            ScalarField(grid, FieldKind::Boundary, 0.0), FieldSpec::canonical(growth),
            SolverConfig{}};
}

/// Runs the property battery, recording one CheckResult per property.
class Battery {
public:
    explicit Battery(VerifyOptions opt = {}) : opt_(opt) {}

    [[nodiscard]] const std::vector<CheckResult>& results() const noexcept { return results_; }
    [[nodiscard]] bool all_passed() const
    {
        return std::all_of(results_.begin(), results_.end(), [](const auto& r) { return r.passed; });
    }
    [[nodiscard]] const CheckResult* find(const std::string& id) const
    {
        for (const auto& r : results_) {
            if (r.id == id) {
                return &r;
            }
        }
        return nullptr;
    }

    void run_all()
    {
        heat_exact();
        refinement();
        ordering();
        max_principle();
        schwarz();
        inequalities();
        classification();
        degiorgi();
        boundedness_level();
        poincare();
        caccioppoli();
        csv_roundtrip();
        complementarity_summary();
    }

    /// u_t = 2 u_xx with data from x^2 + 4t; the scheme is exact on quadratics.
    void heat_exact()
    {
        detail::Stopwatch sw;
        const auto grid = SpaceTimeGrid::make(1, 65, 64, 0.25);
        const auto data = make_boundary(grid, {BoundaryKind::HeatExact});
        const auto sol = solve(data, SolverConfig{}, FieldSpec::canonical(GrowthSpec::power(2.0)));
        const double err = sup_distance(sol.u, data);
        const double secs = sw.seconds();
        std::ostringstream os;
        os << "sup error " << err << ", " << secs << " s";
        add("heat_exact", err <= 1e-8 && secs < 1.0, 1e-8 - err, secs, os.str());
    }

    /// p = 3 bump problem on (33, 32), (65, 64), (129, 128): successive differences shrink by
    /// at least 1.5.
    void refinement()
    {
        detail::Stopwatch sw;
        const auto g = GrowthSpec::power(3.0);
        std::vector<ScalarField> levels;
        for (int k = 0; k < 3; ++k) {
            const int nx = 32 * (1 << k) + 1;
            const auto grid = SpaceTimeGrid::make(1, nx, nx - 1, 0.25);
            auto spec = bump_problem(grid, g);
            auto sol = solve_obstacle(spec);
            record_complementarity(sol.u, spec);
            levels.push_back(std::move(sol.u));
        }
        const double d1 = detail::coarse_fine_difference(levels[0], levels[1]);
        const double d2 = detail::coarse_fine_difference(levels[1], levels[2]);
        const double ratio = d1 / d2;
        const double secs = sw.seconds();
        std::ostringstream os;
        os << "differences " << d1 << ", " << d2 << ", ratio " << ratio << ", " << secs << " s";
        add("refinement", ratio >= 1.5 && secs < 20.0, ratio - 1.5, secs, os.str());
    }

    /// Ordered data and obstacles give ordered obstacle solutions.
    void ordering()
    {
        detail::Stopwatch sw;
        std::mt19937_64 rng(opt_.seed * 7919 + 11);
        const auto families = reference_families();
        double worst = HUGE_VAL;
        int bad = 0;
        for (int c = 0; c < 20; ++c) {
            const bool two_d = c % 4 == 3;
            const auto grid = two_d ? SpaceTimeGrid::make(2, 13, 12, 0.05)
                                    : SpaceTimeGrid::make(1, 33, 32, 0.1);
            const auto fs = FieldSpec::canonical(families[c % families.size()]);
            ScalarField b1 = detail::random_smooth_field(grid, rng, 0.5, 0.0);
            ScalarField b2 = b1;
            const ScalarField db = detail::random_nonnegative_field(grid, rng, 0.3);
            ScalarField psi1 = detail::random_smooth_field(grid, rng, 0.5, -0.1, FieldKind::Obstacle);
            ScalarField psi2 = psi1;
            const ScalarField dpsi = detail::random_nonnegative_field(grid, rng, 0.3);
            for (std::size_t k = 0; k < b1.values().size(); ++k) {
                b2[k] += db[k];
                psi2[k] += dpsi[k];
            }
            detail::raise_to_obstacle_on_boundary(b1, psi1);
            detail::raise_to_obstacle_on_boundary(b2, psi2);
            const ObstacleProblemSpec s1{psi1, b1, fs, SolverConfig{}};
            const ObstacleProblemSpec s2{psi2, b2, fs, SolverConfig{}};
            const auto u1 = solve_obstacle(s1);
            const auto u2 = solve_obstacle(s2);
            record_complementarity(u1.u, s1);
            record_complementarity(u2.u, s2);
            const double scale = std::max({1.0, sup_norm(u1.u.values()), sup_norm(u2.u.values())});
            double slack = HUGE_VAL;
            for (std::size_t k = 0; k < u1.u.values().size(); ++k) {
                slack = std::min(slack, u2.u[k] - u1.u[k]);
            }
            const double rel = slack / scale;
            worst = std::min(worst, rel);
            if (rel < -1e-10 || !u1.report.converged || !u2.report.converged) {
                ++bad;
            }
        }
        std::ostringstream os;
        os << "20 pairs, " << bad << " violations, worst scaled slack " << worst;
        add("ordering", bad == 0, worst + 1e-10, sw.seconds(), os.str());
    }

    /// Unconstrained solves attain their extrema on the parabolic boundary.
    void max_principle()
    {
        detail::Stopwatch sw;
        std::mt19937_64 rng(opt_.seed * 104729 + 3);
        const auto families = reference_families();
        double worst = HUGE_VAL;
        int bad = 0;
        for (int c = 0; c < 10; ++c) {
            const bool two_d = c % 5 == 4;
            const auto grid = two_d ? SpaceTimeGrid::make(2, 13, 12, 0.05)
                                    : SpaceTimeGrid::make(1, 33, 32, 0.1);
            const auto data = detail::random_smooth_field(grid, rng, 1.0, 0.2);
            const auto sol = solve(data, SolverConfig{}, FieldSpec::canonical(families[c % families.size()]));
            const auto e = detail::extrema(sol.u);
            const double scale = std::max(1.0, sup_norm(sol.u.values()));
            const double slack = std::min(e.boundary_max - e.all_max, e.all_min - e.boundary_min) / scale;
            worst = std::min(worst, slack);
            if (slack < -1e-9 || !sol.report.converged) {
                ++bad;
            }
        }
        std::ostringstream os;
        os << "10 solves, " << bad << " violations, worst scaled slack " << worst;
        add("max_principle", bad == 0, worst + 1e-9, sw.seconds(), os.str());
    }

    /// Construction on nx = 33 with 16 cylinders: monotone iterates, agreement with the VI
    /// solution, order independence.
    void schwarz()
    {
        detail::Stopwatch sw;
        const auto grid = SpaceTimeGrid::make(1, 33, 32, 0.25);
        const auto spec = bump_problem(grid, GrowthSpec::power(3.0));
        const auto vi = solve_obstacle(spec);
        record_complementarity(vi.u, spec);
        const auto family = generate_family(grid, 16, 2, opt_.seed);

        double min_step = 0.0;
        double max_abs = 0.0;
        double below_psi = 0.0;
        std::vector<double> before;
        ConstructionOptions co;
        const double bound = std::max(sup_norm(spec.obstacle.values()), sup_norm(spec.boundary.values()));
        ScalarField last = initial_state(spec.obstacle, spec.boundary).phi;
        co.observer = [&](std::size_t, const ApplyOutcome&, const ConstructionState& st) {
            for (std::size_t k = 0; k < st.phi.values().size(); ++k) {
                min_step = std::min(min_step, st.phi[k] - last[k]);
            }
            for (std::size_t k = 0; k < st.phi.values().size(); ++k) {
                below_psi = std::min(below_psi, st.phi[k] - spec.obstacle[k]);
            }
            max_abs = std::max(max_abs, sup_norm(st.phi.values()));
            last = st.phi;
        };
        const auto res = run_construction(spec.obstacle, spec.boundary, family, spec.field, spec.solver, co);
        const double scale = std::max(1.0, bound);
        add("schwarz_monotone",
            min_step >= -1e-12 * scale && max_abs <= bound + 1e-9 && below_psi >= -1e-12 * scale,
            min_step + 1e-12 * scale, sw.seconds(),
            "min increment " + fmt(min_step) + ", min(phi - psi) " + fmt(below_psi) + ", sup|phi| " +
                fmt(max_abs) + " (bound " + fmt(bound) + ")");

        const double diff = sup_distance(res.u_star, vi.u);
        add("schwarz_vi_agreement", diff <= 5e-3 && res.converged, 5e-3 - diff, sw.seconds(),
            "sup|u* - u_VI| " + fmt(diff) + ", sweeps " + std::to_string(res.trace.size()) +
                (family.covers ? ", covering family" : ", family does not cover"));

        const auto p1 = run_construction(spec.obstacle, spec.boundary, permuted(family, opt_.seed + 1),
                                         spec.field, spec.solver);
        const auto p2 = run_construction(spec.obstacle, spec.boundary, permuted(family, opt_.seed + 2),
                                         spec.field, spec.solver);
        const double perm = std::max(sup_distance(p1.u_star, p2.u_star), sup_distance(p1.u_star, res.u_star));
        // a lower obstacle, same family and data, gives a lower limit
        const auto low = bump_problem(grid, GrowthSpec::power(3.0), 0.1);
        const auto low_res = run_construction(low.obstacle, low.boundary, family, low.field, low.solver);
        double order_slack = HUGE_VAL;
        for (std::size_t k = 0; k < res.u_star.values().size(); ++k) {
            order_slack = std::min(order_slack, res.u_star[k] - low_res.u_star[k]);
        }
        add("schwarz_obstacle_monotone", order_slack >= -1e-9, order_slack + 1e-9, sw.seconds(),
            "min(u*(psi_2) - u*(psi_1)) " + fmt(order_slack));

        const double secs = sw.seconds();
        add("schwarz_order_independence", perm <= 1e-6 && secs < 30.0, 1e-6 - perm, secs,
            "permutation spread " + fmt(perm) + ", " + fmt(secs) + " s");
    }

    /// Orlicz inequalities over five families, 1000 samples each.
    void inequalities()
    {
        detail::Stopwatch sw;
        double worst = 0.0;
        std::size_t failures = 0;
        for (const auto& g : reference_families()) {
            const YoungPair pair(g);
            const auto rep = check_inequalities(pair, 1000, opt_.seed);
            worst = std::max(worst, rep.max_rel_violation);
            failures += rep.failures.size();
        }
        const double secs = sw.seconds();
        add("inequalities", failures == 0 && secs < 5.0, 1e-7 - worst, secs,
            std::to_string(failures) + " violations, max relative violation " + fmt(worst));
    }

    void classification()
    {
        detail::Stopwatch sw;
        struct Case {
            GrowthSpec g;
            Classification expected;
        };
        const std::vector<Case> cases{{GrowthSpec::power(1.5), Classification::Singular},
                                      {GrowthSpec::power(2.0), Classification::Intermediate},
                                      {GrowthSpec::power(3.0), Classification::Degenerate},
                                      {GrowthSpec::piecewise_power(1.5, 3.0), Classification::Degenerate}};
        int ok = 0;
        std::string detail;
        for (const auto& c : cases) {
            const auto got = classify(YoungPair(c.g));
            ok += got == c.expected;
            detail += (detail.empty() ? "" : ", ") + c.g.describe() + " -> " + to_string(got);
        }
        add("classification", ok == int(cases.size()), ok - double(cases.size()), sw.seconds(), detail);
    }

    /// The average condition on Q(rho, theta) implies sup_{Q(rho/2, theta/2)} u <= k, over 50
    /// solved nonnegative fields and random (k, rho, theta) with theta = k^2 / G(k / rho).
    void degiorgi()
    {
        detail::Stopwatch sw;
        std::mt19937_64 rng(opt_.seed * 15485863 + 5);
        const auto families = reference_families();
        std::size_t triples = 0;
        std::size_t met = 0;
        std::size_t violated = 0;
        double worst_margin = HUGE_VAL;
        const int fields = 50;
        for (int f = 0; f < fields; ++f) {
            const auto grid = SpaceTimeGrid::make(1, 33, 32, 0.25);
            const GrowthSpec& g = families[f % families.size()];
            const YoungPair pair(g);
            const auto params = DeGiorgiParams::make(1, g, opt_.sigma);
            auto data = detail::random_nonnegative_field(grid, rng, 1.0);
            const auto u = solve(data, SolverConfig{}, FieldSpec::canonical(g)).u;
            if (u.values().size() == 0) {
                continue;
            }
            const double top = std::max(1e-12, sup_norm(u.values()));
            std::uniform_int_distribution<int> ti(grid.nt / 2, grid.nt);
            std::uniform_int_distribution<int> xi(1, grid.nx - 2);
            std::uniform_real_distribution<double> log_rho(std::log(2.0 * grid.h()), std::log(0.5));
            std::uniform_real_distribution<double> log_k(std::log(0.05 * top), std::log(20.0 * top));
            int accepted = 0;
            for (int attempt = 0; attempt < 400 && accepted < 20; ++attempt) {
                const Anchor a{ti(rng), xi(rng), 0};
                const double rho = std::exp(log_rho(rng));
                const double k = std::exp(log_k(rng));
                const double theta = scaling_theta(pair, k, rho);
                if (!(theta <= grid.time(a.t)) || !(theta >= grid.tau())) {
                    continue;
                }
                ++accepted;
                ++triples;
                const auto v = check_degiorgi(u, a, k, rho, theta, params, pair);
                if (v.condition_met) {
                    ++met;
                    worst_margin = std::min(worst_margin, v.margin);
                    if (!v.bound_holds) {
                        ++violated;
                    }
                }
            }
        }
        const double secs = sw.seconds();
        std::ostringstream os;
        os << fields << " fields, " << triples << " triples, " << met << " met the condition, "
           << violated << " violations";
        add("degiorgi_implication", violated == 0 && met > 0 && secs < 60.0,
            met > 0 ? worst_margin : -1.0, secs, os.str());
    }

    /// find_boundedness_level produces a triple passing check_degiorgi for each growth case.
    void boundedness_level()
    {
        detail::Stopwatch sw;
        std::mt19937_64 rng(opt_.seed * 32452843 + 9);
        const auto grid = SpaceTimeGrid::make(1, 33, 32, 0.25);
        const Anchor anchor{grid.nt, grid.nx / 2, 0};
        struct Case {
            GrowthSpec g;
            double r;
        };
        const std::vector<Case> cases{{GrowthSpec::power(2.0), 0.2},
                                      {GrowthSpec::power(3.0), 0.2},
                                      {GrowthSpec::power(1.5), 0.2}};
        int ok = 0;
        std::string detail;
        double margin = HUGE_VAL;
        for (const auto& c : cases) {
            const YoungPair pair(c.g);
            const auto cls = classify(pair);
            const auto params = DeGiorgiParams::make(1, c.g, opt_.sigma);
            const auto data = detail::random_nonnegative_field(grid, rng, 1.0);
            const auto u = solve(data, SolverConfig{}, FieldSpec::canonical(c.g)).u;
            try {
                const auto lvl = find_boundedness_level(u, anchor, c.r, pair, params, cls);
                const auto v = check_degiorgi(u, anchor, lvl.k, lvl.rho, lvl.theta, params, pair);
                const bool pass = v.condition_met && v.bound_holds;
                ok += pass;
                margin = std::min(margin, pass ? v.margin : -1.0);
                detail += std::string(detail.empty() ? "" : "; ") + to_string(cls) + ": k " + fmt(lvl.k) +
                          ", m* " + std::to_string(lvl.m_star) + (pass ? "" : " (failed)");
            } catch (const std::exception& e) {
                detail += std::string(detail.empty() ? "" : "; ") + to_string(cls) + ": " + e.what();
                margin = -1.0;
            }
        }
        add("boundedness_level", ok == int(cases.size()), margin, sw.seconds(), detail);
    }

    /// Slice-wise Poincare inequality on fields vanishing laterally.
    void poincare()
    {
        detail::Stopwatch sw;
        std::mt19937_64 rng(opt_.seed * 49979687 + 1);
        double worst = -HUGE_VAL;
        for (const auto& g : reference_families()) {
            const YoungPair pair(g);
            for (int dim = 1; dim <= 2; ++dim) {
                const auto grid = SpaceTimeGrid::make(dim, dim == 1 ? 33 : 13, 4, 0.1);
                ScalarField u = detail::random_smooth_field(grid, rng, 2.0, 0.0, FieldKind::Solution);
                for (int t = 0; t <= grid.nt; ++t) {
                    for (int j = 0; j < grid.ny(); ++j) {
                        for (int i = 0; i < grid.nx; ++i) {
                            if (grid.on_domain_boundary(i, j)) {
                                u.at(t, i, j) = 0.0;
                            }
                        }
                    }
                }
                worst = std::max(worst, poincare_check(u, pair).max_slack);
            }
        }
        add("poincare", worst <= 0.0, -worst, sw.seconds(), "max lhs - rhs " + fmt(worst));
    }

    /// The energy-estimate ratio stays within 20% across three refinements.
    void caccioppoli()
    {
        detail::Stopwatch sw;
        const auto g = GrowthSpec::power(3.0);
        const YoungPair pair(g);
        std::vector<double> ratios;
        for (int k = 0; k < 3; ++k) {
            const int nx = 16 * (1 << k) + 1;
            const auto grid = SpaceTimeGrid::make(1, nx, nx - 1, 0.1);
            const auto data = ScalarField::from_function(grid, [](double, double x, double) {
                return std::sin(std::numbers::pi * x);
            });
            const auto u = solve(data, SolverConfig{}, FieldSpec::canonical(g)).u;
            ratios.push_back(caccioppoli_ratio(u, 0.2, [](double x, double) {
                return std::max(0.0, 1.0 - std::pow((x - 0.5) / 0.4, 2));
            }, pair));
        }
        double spread = 0.0;
        for (double r : ratios) {
            spread = std::max(spread, std::abs(r / ratios.back() - 1.0));
        }
        add("caccioppoli", spread <= 0.2, 0.2 - spread, sw.seconds(),
            "ratios " + fmt(ratios[0]) + ", " + fmt(ratios[1]) + ", " + fmt(ratios[2]));
    }

    void csv_roundtrip()
    {
        detail::Stopwatch sw;
        std::mt19937_64 rng(opt_.seed + 77);
        const auto grid = SpaceTimeGrid::make(2, 9, 3, 0.3, 2.0, {-1.0, 0.5});
        const auto f = detail::random_smooth_field(grid, rng, 3.0, 0.1, FieldKind::Solution);
        std::stringstream ss;
        write_field_csv(ss, f);
        const auto back = read_field_csv(ss, grid);
        bool same = true;
        for (std::size_t k = 0; k < f.values().size(); ++k) {
            same = same && back[k] == f[k];
        }
        add("csv_roundtrip", same, same ? 0.0 : -1.0, sw.seconds(), same ? "exact" : "values differ");
    }

    /// Complementarity over every obstacle solve recorded so far.
    void complementarity_summary()
    {
        detail::Stopwatch sw;
        const double worst = std::max(worst_min_, worst_offcontact_);
        std::ostringstream os;
        os << solves_ << " obstacle solves, max |min(u - psi, R)| " << worst_min_
           << ", max off-contact |R| " << worst_offcontact_;
        add("complementarity", solves_ > 0 && worst <= 1e-8, 1e-8 - worst, sw.seconds(), os.str());
    }

    void record_complementarity(const ScalarField& u, const ObstacleProblemSpec& spec)
    {
        const auto rep = complementarity(u, spec.obstacle, spec.field, spec.solver, spec.delta_contact);
        worst_min_ = std::max(worst_min_, rep.max_abs_min);
        worst_offcontact_ = std::max(worst_offcontact_, rep.max_offcontact_residual);
        ++solves_;
    }

private:
    static std::string fmt(double v)
    {
        std::ostringstream os;
        os << v;
        return os.str();
    }

    void add(std::string id, bool passed, double margin, double seconds, std::string detail)
    {
        results_.push_back({std::move(id), passed, margin, seconds, std::move(detail)});
    }

    VerifyOptions opt_;
    std::vector<CheckResult> results_;
    double worst_min_ = 0.0;
    double worst_offcontact_ = 0.0;
    std::size_t solves_ = 0;
};

/// Fixed-width pass/fail table.
inline void print_table(std::ostream& os, const std::vector<CheckResult>& results)
{
    os << "check                         status  margin          seconds  detail\n";
    for (const auto& r : results) {
        char line[160];
        std::snprintf(line, sizeof line, "%-29s %-7s %-15.6g %-8.3f ", r.id.c_str(),
                      r.passed ? "PASS" : "FAIL", r.margin, r.seconds);
        os << line << r.detail << '\n';
    }
}

}  // namespace orlicz
