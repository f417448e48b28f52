#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <span>
#include <sstream>
#include <vector>

#include "orlicz/errors.hpp"
#include "orlicz/evolution.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/vector_field.hpp"

namespace orlicz {

/// Obstacle problem on the whole domain: find the smallest discrete supersolution lying above
/// `obstacle` with the values of `boundary` on the parabolic boundary of the domain.
struct ObstacleProblemSpec {
    ScalarField obstacle;
    ScalarField boundary;
    FieldSpec field;
    SolverConfig solver;
    double delta_contact = 1e-7;

    void validate() const
    {
        const SpaceTimeGrid& g = obstacle.grid();
        if (!(g == boundary.grid())) {
            throw ValidationError("obstacle problem: obstacle and boundary data use different grids");
        }
        solver.validate();
        for (auto idx : parabolic_boundary(g, full_cylinder(g)).nodes) {
            if (boundary[idx] < obstacle[idx]) {
                const auto n = g.node(idx);
                std::ostringstream os;
                os << "obstacle problem: boundary data below the obstacle at node (t=" << n.t
                   << ", i=" << n.i << ", j=" << n.j << "): " << boundary[idx] << " < "
                   << obstacle[idx];
                throw ValidationError(os.str());
            }
        }
    }
};

namespace detail {

inline double complementarity_measure(const FieldSpec& fs, const std::vector<NodeStencil>& stencils,
                                      std::span<const double> u, std::span<const double> old,
                                      std::span<const double> psi, double tau, double h)
{
    double m = 0.0;
    for (const auto& st : stencils) {
        const double r = node_residual(fs, st, u[st.center], u, old[st.center], tau, h);
        m = std::max(m, std::abs(std::min(u[st.center] - psi[st.center], r)));
    }
    return m;
}

/// Sum of squares of min(u - psi, R(u)); the line-search merit.
inline double complementarity_merit(const FieldSpec& fs, const std::vector<NodeStencil>& stencils,
                                    std::span<const double> u, std::span<const double> old,
                                    std::span<const double> psi, double tau, double h)
{
    double m = 0.0;
    for (const auto& st : stencils) {
        const double r = node_residual(fs, st, u[st.center], u, old[st.center], tau, h);
        const double f = std::min(u[st.center] - psi[st.center], r);
        m += f * f;
    }
    return m;
}

/// Semismooth Newton on F(u) = min(u - psi, R(u)): rows where u - psi <= R pin the node to psi,
/// the rest take the Jacobian of R. Steps are projected onto u >= psi and damped until the
/// merit sum F^2 decreases. Returns false when the damping floor is reached without progress.
inline bool vi_newton(const FieldSpec& fs, const std::vector<NodeStencil>& stencils,
                      std::span<const double> old, std::span<double> u, std::span<const double> psi,
                      double tau, double h, const SolverConfig& cfg, StencilSystem& sys,
                      StepReport& rep)
{
    std::vector<double> res(stencils.size());
    std::vector<double> trial(u.begin(), u.end());
    double measure = complementarity_measure(fs, stencils, u, old, psi, tau, h);
    double merit = complementarity_merit(fs, stencils, u, old, psi, tau, h);
    for (int it = 0;; ++it) {
        rep.residual = measure;
        rep.iterations = it;
        if (measure <= cfg.tol || residual_settled(fs, stencils, u, old, tau, h, cfg.tol, psi)) {
            rep.converged = true;
            return true;
        }
        if (it >= cfg.max_iterations) {
            return false;
        }
        assemble_jacobian(fs, stencils, old, u, tau, h, sys, res);
        for (std::size_t n = 0; n < stencils.size(); ++n) {
            const std::size_t c = stencils[n].center;
            if (u[c] - psi[c] <= res[n]) {
                // pinned row: delta = psi - u
                for (int k = 0; k < stencils[n].count; ++k) {
                    sys.set_off(n, k, 0.0);
                }
                sys.set_diag(n, 1.0);
                res[n] = psi[c] - u[c];
            } else {
                res[n] = -res[n];
            }
        }
        sys.solve(res);
        ++rep.linear_sweeps;
        double lambda = 1.0;
        double merit_trial = merit;
        for (;;) {
            std::copy(u.begin(), u.end(), trial.begin());
            for (std::size_t n = 0; n < stencils.size(); ++n) {
                const std::size_t c = stencils[n].center;
                trial[c] = std::max(psi[c], u[c] + lambda * res[n]);
            }
            merit_trial = complementarity_merit(fs, stencils, trial, old, psi, tau, h);
            if (merit_trial < merit) {
                break;
            }
            if (lambda <= cfg.damping_floor) {
                return false;
            }
            lambda *= 0.5;
        }
        std::copy(trial.begin(), trial.end(), u.begin());
        merit = merit_trial;
        measure = complementarity_measure(fs, stencils, u, old, psi, tau, h);
    }
}

}  // namespace detail

/// One time step of the obstacle problem on `box`: semismooth Newton, interleaved with projected
/// nonlinear Gauss-Seidel sweeps (every node set to max(psi, root of its scalar residual)) when
/// Newton stalls. Stops once |min(u - psi, R(u))| <= tol. `u_new` carries the Dirichlet values on the
/// box boundary.
inline StepReport step_vi_in_place(const SpaceTimeGrid& grid, const SpatialBox& box,
                                   std::span<const double> u_old, std::span<double> u_new,
                                   std::span<const double> psi, const SolverConfig& cfg,
                                   const FieldSpec& fs)
{
    cfg.validate();
    const FieldSpec field = effective_field(fs, cfg);
    const auto stencils = detail::build_stencils(grid, box);
    StepReport rep;
    const double tau = grid.tau();
    const double h = grid.h();
    for (const auto& st : stencils) {
        u_new[st.center] = std::max(u_new[st.center], psi[st.center]);
    }
    if (stencils.empty()) {
        rep.converged = true;
        return rep;
    }
    detail::StencilSystem sys(grid, stencils);
    const double node_tol = 1e-3 * cfg.tol;
    StepReport newton;
    int sweeps = 0;
    // Newton rounds separated by bursts of projected sweeps whenever it stalls
    for (int burst = 16;; burst = std::min(2 * burst, 4096)) {
        if (detail::vi_newton(field, stencils, u_old, u_new, psi, tau, h, cfg, sys, newton)) {
            rep.iterations += newton.iterations;
            rep.linear_sweeps += newton.linear_sweeps;
            rep.residual = newton.residual;
            rep.converged = true;
            return rep;
        }
        rep.iterations += newton.iterations;
        rep.linear_sweeps += newton.linear_sweeps;
        newton = StepReport{};
        for (int k = 0; k < burst; ++k, ++sweeps) {
            if (sweeps >= cfg.max_linear_sweeps) {
                rep.residual =
                    detail::complementarity_measure(field, stencils, u_new, u_old, psi, tau, h);
                rep.converged = rep.residual <= cfg.tol;
                rep.hit_iteration_cap = !rep.converged;
                return rep;
            }
            for (const auto& st : stencils) {
                const double x = detail::solve_node(field, st, u_new, u_old[st.center], tau, h,
                                                    u_new[st.center], node_tol);
                u_new[st.center] = std::max(x, psi[st.center]);
            }
            ++rep.linear_sweeps;
        }
    }
}

struct StepViResult {
    std::vector<double> slice;
    StepReport report;
};

inline StepViResult step_vi(const SpaceTimeGrid& grid, const SpatialBox& box,
                            std::span<const double> u_old, std::span<const double> boundary,
                            std::span<const double> psi, const SolverConfig& cfg,
                            const FieldSpec& fs)
{
    StepViResult out{std::vector<double>(boundary.begin(), boundary.end()), {}};
    for (int j = box.lo[1]; j <= box.hi[1]; ++j) {
        for (int i = box.lo[0]; i <= box.hi[0]; ++i) {
            if (box.is_interior(i, j)) {
                out.slice[grid.spatial_index(i, j)] = u_old[grid.spatial_index(i, j)];
            }
        }
    }
    out.report = step_vi_in_place(grid, box, u_old, out.slice, psi, cfg, fs);
    return out;
}

inline FieldSolution solve_obstacle(const ObstacleProblemSpec& spec)
{
    spec.validate();
    const auto start_time = std::chrono::steady_clock::now();
    const SpaceTimeGrid& grid = spec.obstacle.grid();
    FieldSolution out{spec.boundary, {}};
    out.u.set_kind(FieldKind::Solution);
    out.report.epsilon = effective_field(spec.field, spec.solver).epsilon;
    const SpatialBox box = SpatialBox::whole(grid);
    for (int t = 1; t <= grid.nt; ++t) {
        auto prev = out.u.slice(t - 1);
        auto cur = out.u.slice(t);
        for (int j = 0; j < grid.ny(); ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                if (box.is_interior(i, j)) {
                    cur[grid.spatial_index(i, j)] = prev[grid.spatial_index(i, j)];
                }
            }
        }
        out.report.absorb(
            step_vi_in_place(grid, box, prev, cur, spec.obstacle.slice(t), spec.solver, spec.field));
    }
    out.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return out;
}

/// Nodes with u - psi <= delta.
inline std::vector<std::size_t> contact_set(const ScalarField& u, const ScalarField& psi,
                                            double delta)
{
    if (!(u.grid() == psi.grid())) {
        throw DomainError("contact_set: fields use different grids");
    }
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < u.values().size(); ++k) {
        if (u[k] - psi[k] <= delta) {
            out.push_back(k);
        }
    }
    return out;
}

struct ComplementarityReport {
    double max_abs_min = 0.0;             ///< max |min(u - psi, R(u))| over interior nodes
    double max_offcontact_residual = 0.0; ///< max |R(u)| where u - psi > delta
    double min_residual = 0.0;            ///< min R(u) (supersolution check)
    double min_gap = 0.0;                 ///< min (u - psi)
    std::size_t contact_nodes = 0;        ///< interior nodes with u - psi <= delta
    std::size_t interior_nodes = 0;
};

inline ComplementarityReport complementarity(const ScalarField& u, const ScalarField& psi,
                                             const FieldSpec& fs, const SolverConfig& cfg,
                                             double delta)
{
    const SpaceTimeGrid& g = u.grid();
    const ScalarField r = residual_field(u, effective_field(fs, cfg));
    ComplementarityReport rep;
    rep.min_residual = HUGE_VAL;
    rep.min_gap = HUGE_VAL;
    for (int t = 1; t <= g.nt; ++t) {
        for (int j = 0; j < g.ny(); ++j) {
            for (int i = 0; i < g.nx; ++i) {
                if (g.on_domain_boundary(i, j)) {
                    continue;
                }
                const auto idx = g.index(t, i, j);
                const double gap = u[idx] - psi[idx];
                ++rep.interior_nodes;
                rep.max_abs_min = std::max(rep.max_abs_min, std::abs(std::min(gap, r[idx])));
                rep.min_residual = std::min(rep.min_residual, r[idx]);
                rep.min_gap = std::min(rep.min_gap, gap);
                if (gap > delta) {
                    rep.max_offcontact_residual =
                        std::max(rep.max_offcontact_residual, std::abs(r[idx]));
                } else {
                    ++rep.contact_nodes;
                }
            }
        }
    }
    return rep;
}

}  // namespace orlicz
