#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "orlicz/errors.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/vector_field.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

enum class NonlinearMethod { Picard, DampedNewton };

struct SolverConfig {
    NonlinearMethod method = NonlinearMethod::DampedNewton;
    int max_iterations = 500;      ///< outer nonlinear iterations per time step
    double tol = 1e-10;            ///< absolute sup-norm residual target
    double damping_floor = 1.0 / 1024.0;
    int max_linear_sweeps = 200000; ///< cap on projected Gauss-Seidel sweeps (fallback path)
    std::optional<double> epsilon; ///< overrides the FieldSpec regularization when set

    void validate() const
    {
        if (!(tol > 0.0)) {
            throw DomainError("solver: tol must be > 0");
        }
        if (max_iterations < 1 || max_linear_sweeps < 1) {
            throw DomainError("solver: iteration limits must be >= 1");
        }
        if (!(damping_floor > 0.0) || damping_floor > 1.0) {
            throw DomainError("solver: damping floor must lie in (0, 1]");
        }
        if (epsilon && !(*epsilon >= 0.0)) {
            throw DomainError("solver: epsilon must be >= 0");
        }
    }
};

struct StepReport {
    int iterations = 0;
    std::size_t linear_sweeps = 0; ///< linear solves plus fallback sweeps
    double residual = 0.0;
    bool converged = false;
    bool hit_iteration_cap = false;
};

struct SolveReport {
    std::vector<int> step_iterations;
    std::size_t linear_sweeps = 0; ///< linear solves plus fallback sweeps
    double final_residual = 0.0;
    double wall_seconds = 0.0;
    double epsilon = 0.0;
    bool converged = true;
    bool hit_iteration_cap = false;

    void absorb(const StepReport& s)
    {
        step_iterations.push_back(s.iterations);
        linear_sweeps += s.linear_sweeps;
        final_residual = std::max(final_residual, s.residual);
        converged = converged && s.converged;
        hit_iteration_cap = hit_iteration_cap || s.hit_iteration_cap;
    }
};

/// The field actually used by a solve: the configured epsilon, and 1e-8 whenever the growth
/// makes g(m)/m blow up at m = 0 and no regularization was requested.
inline FieldSpec effective_field(const FieldSpec& fs, const SolverConfig& cfg)
{
    FieldSpec out = fs;
    if (cfg.epsilon) {
        out.epsilon = *cfg.epsilon;
    }
    if (out.epsilon == 0.0 && !std::isfinite(out.growth.g_prime(0.0))) {
        out.epsilon = 1e-8;
    }
    return out;
}

namespace detail {

/// Interior node of a box together with its 2 or 4 spatial neighbours (slice indices).
struct NodeStencil {
    std::size_t center = 0;
    std::array<std::size_t, 4> nb{};
    int count = 0;
};

inline std::vector<NodeStencil> build_stencils(const SpaceTimeGrid& g, const SpatialBox& box)
{
    std::vector<NodeStencil> out;
    for (int j = box.lo[1]; j <= box.hi[1]; ++j) {
        for (int i = box.lo[0]; i <= box.hi[0]; ++i) {
            if (!box.is_interior(i, j)) {
                continue;
            }
            NodeStencil s;
            s.center = g.spatial_index(i, j);
            s.nb[s.count++] = g.spatial_index(i - 1, j);
            s.nb[s.count++] = g.spatial_index(i + 1, j);
            if (g.dim == 2) {
                s.nb[s.count++] = g.spatial_index(i, j - 1);
                s.nb[s.count++] = g.spatial_index(i, j + 1);
            }
            out.push_back(s);
        }
    }
    return out;
}

/// Backward Euler residual at one node: (u - u_old)/tau - sum_nb phi((u_nb - u)/h)/h.
inline double node_residual(const FieldSpec& fs, const NodeStencil& st, double center,
                            std::span<const double> u, double old, double tau, double h)
{
    double div = 0.0;
    for (int k = 0; k < st.count; ++k) {
        div += fs.flux((u[st.nb[k]] - center) / h);
    }
    return (center - old) / tau - div / h;
}

inline double node_residual_derivative(const FieldSpec& fs, const NodeStencil& st, double center,
                                       std::span<const double> u, double tau, double h)
{
    double d = 1.0 / tau;
    for (int k = 0; k < st.count; ++k) {
        d += fs.flux_derivative((u[st.nb[k]] - center) / h) / (h * h);
    }
    return d;
}

/// Root of the increasing scalar map x -> R(x) with the neighbours frozen: safeguarded
/// Newton inside the bracket [min(old, nbs), max(old, nbs)].
inline double solve_node(const FieldSpec& fs, const NodeStencil& st, std::span<const double> u,
                         double old, double tau, double h, double guess, double tol)
{
    double lo = old;
    double hi = old;
    for (int k = 0; k < st.count; ++k) {
        lo = std::min(lo, u[st.nb[k]]);
        hi = std::max(hi, u[st.nb[k]]);
    }
    if (hi == lo) {
        return lo;
    }
    double x = std::clamp(guess, lo, hi);
    for (int it = 0; it < 200; ++it) {
        const double r = node_residual(fs, st, x, u, old, tau, h);
        if (std::abs(r) <= tol) {
            return x;
        }
        (r > 0.0 ? hi : lo) = x;
        const double d = node_residual_derivative(fs, st, x, u, tau, h);
        double next = x - r / d;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (next == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
            return next;
        }
        x = next;
    }
    return x;
}

}  // namespace detail

/// Residual (u_new - u_old)/tau - div A(D u_new) on the interior of `box`; zero elsewhere.
inline std::vector<double> residual(const SpaceTimeGrid& grid, const SpatialBox& box,
                                    std::span<const double> u_new, std::span<const double> u_old,
                                    const FieldSpec& fs)
{
    std::vector<double> out(grid.slice_size(), 0.0);
    const double tau = grid.tau();
    const double h = grid.h();
    for (const auto& st : detail::build_stencils(grid, box)) {
        out[st.center] =
            detail::node_residual(fs, st, u_new[st.center], u_new, u_old[st.center], tau, h);
    }
    return out;
}

/// Residual of a whole space-time field on the domain interior (levels 1..nt); zero on the
/// parabolic boundary of the domain.
inline ScalarField residual_field(const ScalarField& u, const FieldSpec& fs)
{
    const SpaceTimeGrid& g = u.grid();
    ScalarField out(g, FieldKind::Diagnostic);
    const SpatialBox box = SpatialBox::whole(g);
    for (int t = 1; t <= g.nt; ++t) {
        const auto r = residual(g, box, u.slice(t), u.slice(t - 1), fs);
        std::copy(r.begin(), r.end(), out.slice(t).begin());
    }
    return out;
}

namespace detail {

/// Sparse system on the interior nodes of a box, stored as a band of half-width w (the interior
/// row length; 1 in 1D). Row n reads diag_n x_n - sum_k off_nk x_nb(k) = rhs_n, where neighbours
/// on the box boundary drop out. Rows are strictly diagonally dominant (or identity), so banded
/// LU without pivoting is stable.
class StencilSystem {
public:
    StencilSystem(const SpaceTimeGrid& g, const std::vector<NodeStencil>& stencils)
        : stencils_(stencils), n_(stencils.size()), pos_(g.slice_size(), -1)
    {
        for (std::size_t k = 0; k < n_; ++k) {
            pos_[stencils[k].center] = static_cast<long>(k);
        }
        // the largest position jump between a node and an interior neighbour
        for (std::size_t k = 0; k < n_; ++k) {
            for (int m = 0; m < stencils[k].count; ++m) {
                const long p = pos_[stencils[k].nb[m]];
                if (p >= 0) {
                    band_ = std::max(band_, static_cast<std::size_t>(std::abs(p - long(k))));
                }
            }
        }
        width_ = 2 * band_ + 1;
        a_.assign(n_ * width_, 0.0);
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    /// Position of slice index `s` in the system, or -1 when it is not an unknown.
    [[nodiscard]] long position(std::size_t s) const noexcept { return pos_[s]; }

    void clear() { std::fill(a_.begin(), a_.end(), 0.0); }

    void set_diag(std::size_t row, double v) { at(row, row) = v; }
    /// Coefficient of the neighbour at stencil slot k; ignored for boundary neighbours.
    void set_off(std::size_t row, int k, double v)
    {
        const long p = pos_[stencils_[row].nb[k]];
        if (p >= 0) {
            at(row, std::size_t(p)) = -v;
        }
    }

    /// Factorizes and solves in place; the stored matrix is consumed.
    void solve(std::vector<double>& rhs)
    {
        for (std::size_t k = 0; k < n_; ++k) {
            const double pivot = at(k, k);
            const std::size_t last = std::min(n_ - 1, k + band_);
            for (std::size_t i = k + 1; i <= last; ++i) {
                double& lik = at(i, k);
                if (lik == 0.0) {
                    continue;
                }
                const double l = lik / pivot;
                lik = 0.0;
                for (std::size_t j = k + 1; j <= last; ++j) {
                    at(i, j) -= l * at(k, j);
                }
                rhs[i] -= l * rhs[k];
            }
        }
        for (std::size_t k = n_; k-- > 0;) {
            double s = rhs[k];
            const std::size_t last = std::min(n_ - 1, k + band_);
            for (std::size_t j = k + 1; j <= last; ++j) {
                s -= at(k, j) * rhs[j];
            }
            rhs[k] = s / at(k, k);
        }
    }

private:
    double& at(std::size_t i, std::size_t j) { return a_[i * width_ + (j + band_ - i)]; }

    const std::vector<NodeStencil>& stencils_;
    std::size_t n_;
    std::vector<long> pos_;
    std::size_t band_ = 0;
    std::size_t width_ = 1;
    std::vector<double> a_;
};

inline double max_abs_residual(const FieldSpec& fs, const std::vector<NodeStencil>& stencils,
                               std::span<const double> u, std::span<const double> old,
                               double tau, double h)
{
    double r = 0.0;
    for (const auto& st : stencils) {
        r = std::max(r, std::abs(node_residual(fs, st, u[st.center], u, old[st.center], tau, h)));
    }
    return r;
}

/// True when every node residual is within tol or within its rounding floor: the residual
/// change caused by perturbing the stencil values in their last bits. For singular growth the
/// regularized flux derivative near zero gradients is huge and that floor can exceed tol.
/// With an obstacle, nodes where |min(u - psi, R)| <= tol pass as well.
inline bool residual_settled(const FieldSpec& fs, const std::vector<NodeStencil>& stencils,
                             std::span<const double> u, std::span<const double> old, double tau,
                             double h, double tol, std::span<const double> psi = {})
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double inv_h2 = 1.0 / (h * h);
    for (const auto& st : stencils) {
        const double c = u[st.center];
        const double r = node_residual(fs, st, c, u, old[st.center], tau, h);
        if (std::abs(r) <= tol || (!psi.empty() && std::abs(std::min(c - psi[st.center], r)) <= tol)) {
            continue;
        }
        double size = (std::abs(c) + std::abs(old[st.center])) / tau;
        for (int k = 0; k < st.count; ++k) {
            const double d = (u[st.nb[k]] - c) / h;
            const double mag = std::max(std::abs(c), std::abs(u[st.nb[k]]));
            size += std::abs(fs.flux(d)) / h + 2.0 * fs.flux_derivative(d) * inv_h2 * mag;
        }
        if (std::abs(r) > 4.0 * eps * size) {
            return false;
        }
    }
    return true;
}

/// Frozen-coefficient iteration: a = g(m)/m from the current iterate, direct solve of the
/// linear system, then a damped update (halving until the residual decreases).
inline StepReport picard(const FieldSpec& fs, const std::vector<NodeStencil>& stencils,
                         std::span<const double> old, std::span<double> u, double tau, double h,
                         const SolverConfig& cfg, StencilSystem& sys)
{
    StepReport rep;
    const double inv_h2 = 1.0 / (h * h);
    std::vector<double> rhs(stencils.size());
    std::vector<double> trial(u.begin(), u.end());
    double r = max_abs_residual(fs, stencils, u, old, tau, h);
    for (int it = 0;; ++it) {
        rep.residual = r;
        rep.iterations = it;
        if (r <= cfg.tol || residual_settled(fs, stencils, u, old, tau, h, cfg.tol)) {
            rep.converged = true;
            return rep;
        }
        if (it >= cfg.max_iterations) {
            rep.hit_iteration_cap = true;
            return rep;
        }
        sys.clear();
        for (std::size_t n = 0; n < stencils.size(); ++n) {
            const auto& st = stencils[n];
            double diag = 1.0 / tau;
            rhs[n] = old[st.center] / tau;
            for (int k = 0; k < st.count; ++k) {
                const double d = (u[st.nb[k]] - u[st.center]) / h;
                const double c = fs.coefficient(std::sqrt(d * d + fs.epsilon * fs.epsilon)) * inv_h2;
                diag += c;
                if (sys.position(st.nb[k]) < 0) {
                    rhs[n] += c * u[st.nb[k]];
                } else {
                    sys.set_off(n, k, c);
                }
            }
            sys.set_diag(n, diag);
        }
        sys.solve(rhs);
        ++rep.linear_sweeps;
        double lambda = 1.0;
        double r_trial = r;
        for (;;) {
            std::copy(u.begin(), u.end(), trial.begin());
            for (std::size_t n = 0; n < stencils.size(); ++n) {
                const std::size_t c = stencils[n].center;
                trial[c] = u[c] + lambda * (rhs[n] - u[c]);
            }
            r_trial = max_abs_residual(fs, stencils, trial, old, tau, h);
            if (r_trial < r || lambda <= cfg.damping_floor) {
                break;
            }
            lambda *= 0.5;
        }
        std::copy(trial.begin(), trial.end(), u.begin());
        r = r_trial;
    }
}

/// Jacobian of the residual at u, written into `sys`; returns the residual vector in `res`.
inline void assemble_jacobian(const FieldSpec& fs, const std::vector<NodeStencil>& stencils,
                              std::span<const double> old, std::span<const double> u, double tau,
                              double h, StencilSystem& sys, std::vector<double>& res)
{
    const double inv_h2 = 1.0 / (h * h);
    sys.clear();
    for (std::size_t n = 0; n < stencils.size(); ++n) {
        const auto& st = stencils[n];
        res[n] = node_residual(fs, st, u[st.center], u, old[st.center], tau, h);
        double diag = 1.0 / tau;
        for (int k = 0; k < st.count; ++k) {
            const double dphi = fs.flux_derivative((u[st.nb[k]] - u[st.center]) / h) * inv_h2;
            diag += dphi;
            sys.set_off(n, k, dphi);
        }
        sys.set_diag(n, diag);
    }
}

/// Newton on the full residual with the differentiated flux, damped by halving until the
/// residual decreases.
inline StepReport damped_newton(const FieldSpec& fs, const std::vector<NodeStencil>& stencils,
                                std::span<const double> old, std::span<double> u, double tau,
                                double h, const SolverConfig& cfg, StencilSystem& sys)
{
    StepReport rep;
    std::vector<double> res(stencils.size());
    std::vector<double> trial(u.begin(), u.end());
    double r = max_abs_residual(fs, stencils, u, old, tau, h);
    for (int it = 0;; ++it) {
        rep.residual = r;
        rep.iterations = it;
        if (r <= cfg.tol || residual_settled(fs, stencils, u, old, tau, h, cfg.tol)) {
            rep.converged = true;
            return rep;
        }
        if (it >= cfg.max_iterations) {
            rep.hit_iteration_cap = true;
            return rep;
        }
        assemble_jacobian(fs, stencils, old, u, tau, h, sys, res);
        for (double& v : res) {
            v = -v;
        }
        sys.solve(res);
        ++rep.linear_sweeps;
        double lambda = 1.0;
        double r_trial = r;
        for (;;) {
            std::copy(u.begin(), u.end(), trial.begin());
            for (std::size_t n = 0; n < stencils.size(); ++n) {
                trial[stencils[n].center] = u[stencils[n].center] + lambda * res[n];
            }
            r_trial = max_abs_residual(fs, stencils, trial, old, tau, h);
            if (r_trial < r || lambda <= cfg.damping_floor) {
                break;
            }
            lambda *= 0.5;
        }
        std::copy(trial.begin(), trial.end(), u.begin());
        r = r_trial;
    }
}

}  // namespace detail

/// One backward Euler step on `box`. `u_new` carries the Dirichlet values on the box boundary
/// and an initial guess inside; it is overwritten with the solution.
inline StepReport step_in_place(const SpaceTimeGrid& grid, const SpatialBox& box,
                                std::span<const double> u_old, std::span<double> u_new,
                                const SolverConfig& cfg, const FieldSpec& fs)
{
    cfg.validate();
    const FieldSpec field = effective_field(fs, cfg);
    const auto stencils = detail::build_stencils(grid, box);
    if (stencils.empty()) {
        StepReport rep;
        rep.converged = true;
        return rep;
    }
    detail::StencilSystem sys(grid, stencils);
    if (cfg.method == NonlinearMethod::Picard) {
        return detail::picard(field, stencils, u_old, u_new, grid.tau(), grid.h(), cfg, sys);
    }
    return detail::damped_newton(field, stencils, u_old, u_new, grid.tau(), grid.h(), cfg, sys);
}

struct StepResult {
    std::vector<double> slice;
    StepReport report;
};

/// Value form of step_in_place: the box boundary of `boundary` supplies the Dirichlet data and
/// the interior starts from u_old.
inline StepResult step(const SpaceTimeGrid& grid, const SpatialBox& box,
                       std::span<const double> u_old, std::span<const double> boundary,
                       const SolverConfig& cfg, const FieldSpec& fs)
{
    StepResult out{std::vector<double>(boundary.begin(), boundary.end()), {}};
    for (int j = box.lo[1]; j <= box.hi[1]; ++j) {
        for (int i = box.lo[0]; i <= box.hi[0]; ++i) {
            if (box.is_interior(i, j)) {
                out.slice[grid.spatial_index(i, j)] = u_old[grid.spatial_index(i, j)];
            }
        }
    }
    out.report = step_in_place(grid, box, u_old, out.slice, cfg, fs);
    return out;
}

struct FieldSolution {
    ScalarField u;
    SolveReport report;
};

/// Time-marches the equation over the cylinder. Values on the parabolic boundary (and outside
/// the cylinder) are copied from `boundary_data`.
inline FieldSolution solve_cylinder(const Cylinder& cyl, const ScalarField& boundary_data,
                                    const SolverConfig& cfg, const FieldSpec& fs)
{
    const auto start_time = std::chrono::steady_clock::now();
    const SpaceTimeGrid& grid = boundary_data.grid();
    cyl.validate(grid);
    FieldSolution out{boundary_data, {}};
    out.u.set_kind(FieldKind::Solution);
    out.report.epsilon = effective_field(fs, cfg).epsilon;
    const SpatialBox box = cyl.box(grid);
    for (int t = cyl.start + 1; t <= cyl.end; ++t) {
        auto prev = out.u.slice(t - 1);
        auto cur = out.u.slice(t);
        for (int j = box.lo[1]; j <= box.hi[1]; ++j) {
            for (int i = box.lo[0]; i <= box.hi[0]; ++i) {
                if (box.is_interior(i, j)) {
                    cur[grid.spatial_index(i, j)] = prev[grid.spatial_index(i, j)];
                }
            }
        }
        out.report.absorb(step_in_place(grid, box, prev, cur, cfg, fs));
    }
    out.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return out;
}

/// Solve on the whole domain with data on its parabolic boundary.
inline FieldSolution solve(const ScalarField& boundary_data, const SolverConfig& cfg,
                           const FieldSpec& fs)
{
    return solve_cylinder(full_cylinder(boundary_data.grid()), boundary_data, cfg, fs);
}

// ---------------------------------------------------------------------------
// Energy estimate diagnostic

/// Ratio of the two sides of the energy (Caccioppoli) estimate for (u - k)_+ with a
/// time-independent cutoff phi(x) in [0, 1] vanishing near the lateral boundary:
///
///   lhs = max_t sum_x w^2 phi^{g1} h^n + sum_{t>=1} sum_cells G(|D w|) phi^{g1} h^n tau
///   rhs = sum_x [w^2 phi^{g1}](t=0) h^n + sum_{t>=1} sum_cells G(|D phi| w) h^n tau
///
/// with w = (u - k)_+, cell gradients by forward differences and cell values by averaging.
/// Returns lhs / rhs.
template <class Cutoff>
double caccioppoli_ratio(const ScalarField& u, double k, const Cutoff& phi, const YoungPair& pair)
{
    const SpaceTimeGrid& g = u.grid();
    const double h = g.h();
    const double vol = g.cell_volume();
    const double g1 = pair.growth().g1();
    const auto w = [&](int t, int i, int j) { return std::max(0.0, u.at(t, i, j) - k); };
    const auto phi_at = [&](int i, int j) { return phi(g.x(i), g.y(j)); };

    double sup_mass = 0.0;
    double initial_mass = 0.0;
    double grad_energy = 0.0;
    double cutoff_energy = 0.0;
    const int cells_y = g.dim == 2 ? g.nx - 1 : 1;
    for (int t = 0; t <= g.nt; ++t) {
        double mass = 0.0;
        for (int j = 0; j < g.ny(); ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const double wv = w(t, i, j);
                mass += wv * wv * std::pow(phi_at(i, j), g1) * vol;
            }
        }
        sup_mass = std::max(sup_mass, mass);
        if (t == 0) {
            initial_mass = mass;
            continue;
        }
        for (int j = 0; j < cells_y; ++j) {
            for (int i = 0; i + 1 < g.nx; ++i) {
                double dw2 = std::pow((w(t, i + 1, j) - w(t, i, j)) / h, 2);
                double dphi2 = std::pow((phi_at(i + 1, j) - phi_at(i, j)) / h, 2);
                double wc = 0.5 * (w(t, i, j) + w(t, i + 1, j));
                double pc = 0.5 * (phi_at(i, j) + phi_at(i + 1, j));
                if (g.dim == 2) {
                    dw2 += std::pow((w(t, i, j + 1) - w(t, i, j)) / h, 2);
                    dphi2 += std::pow((phi_at(i, j + 1) - phi_at(i, j)) / h, 2);
                    wc = 0.25 * (w(t, i, j) + w(t, i + 1, j) + w(t, i, j + 1) + w(t, i + 1, j + 1));
                    pc = 0.25 * (phi_at(i, j) + phi_at(i + 1, j) + phi_at(i, j + 1) +
                                 phi_at(i + 1, j + 1));
                }
                grad_energy += pair.G(std::sqrt(dw2)) * std::pow(pc, g1) * vol * g.tau();
                cutoff_energy += pair.G(std::sqrt(dphi2) * wc) * vol * g.tau();
            }
        }
    }
    const double rhs = initial_mass + cutoff_energy;
    if (rhs <= 0.0) {
        throw DomainError("caccioppoli_ratio: right-hand side vanishes");
    }
    return (sup_mass + grad_energy) / rhs;
}

}  // namespace orlicz
