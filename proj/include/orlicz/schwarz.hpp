#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <random>
#include <thread>
#include <vector>

#include "orlicz/errors.hpp"
#include "orlicz/evolution.hpp"
#include "orlicz/grid.hpp"

namespace orlicz {

/// Ordered finite family of sub-cylinders B_r(x) x (start, T].
struct CylinderFamily {
    std::vector<Cylinder> cylinders;
    std::uint64_t seed = 0;
    bool covers = false;  ///< union of cylinder interiors contains every domain-interior node
};

/// True when every node of the domain interior (levels 1..nt) is interior to some cylinder.
inline bool family_covers(const SpaceTimeGrid& grid, const std::vector<Cylinder>& cylinders)
{
    std::vector<char> hit(grid.node_count(), 0);
    for (const auto& c : cylinders) {
        for (auto idx : interior_nodes(grid, c)) {
            hit[idx] = 1;
        }
    }
    for (int t = 1; t <= grid.nt; ++t) {
        for (int j = 0; j < grid.ny(); ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                if (!grid.on_domain_boundary(i, j) && !hit[grid.index(t, i, j)]) {
                    return false;
                }
            }
        }
    }
    return true;
}

/// Seeded family: centers uniform over interior nodes, radii uniform in
/// [min_radius, max(min_radius, (nx-1)/2)], start levels 0 with probability 1/2 and uniform in
/// 1..nt-1 otherwise (the first cylinder always starts at 0). Every cylinder ends at nt.
inline CylinderFamily generate_family(const SpaceTimeGrid& grid, int count, int min_radius,
                                      std::uint64_t seed)
{
    if (count < 1) {
        throw DomainError("generate_family: count must be >= 1");
    }
    if (min_radius < 1) {
        throw DomainError("generate_family: min_radius must be >= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> center(1, grid.nx - 2);
    std::uniform_int_distribution<int> radius(min_radius, std::max(min_radius, (grid.nx - 1) / 2));
    std::uniform_int_distribution<int> late_start(1, std::max(1, grid.nt - 1));
    std::bernoulli_distribution at_bottom(0.5);
    CylinderFamily fam;
    fam.seed = seed;
    for (int k = 0; k < count; ++k) {
        Cylinder c;
        c.center[0] = center(rng);
        c.center[1] = grid.dim == 2 ? center(rng) : 0;
        c.radius = radius(rng);
        const bool bottom = at_bottom(rng);
        const int late = late_start(rng);
        c.start = (k == 0 || bottom || grid.nt < 2) ? 0 : late;
        c.end = grid.nt;
        fam.cylinders.push_back(c);
    }
    fam.covers = family_covers(grid, fam.cylinders);
    return fam;
}

/// The same cylinders in a seeded random order.
inline CylinderFamily permuted(const CylinderFamily& fam, std::uint64_t seed)
{
    CylinderFamily out = fam;
    std::mt19937_64 rng(seed);
    std::shuffle(out.cylinders.begin(), out.cylinders.end(), rng);
    return out;
}

struct ConstructionState {
    ScalarField phi;
    int sweep = 0;
    double last_sweep_change = HUGE_VAL;
    std::vector<double> history;
};

/// phi_0: the obstacle inside the domain, the boundary data on its parabolic boundary.
inline ConstructionState initial_state(const ScalarField& psi, const ScalarField& boundary)
{
    const SpaceTimeGrid& g = psi.grid();
    if (!(g == boundary.grid())) {
        throw ValidationError("construction: obstacle and boundary data use different grids");
    }
    ConstructionState st{psi, 0, HUGE_VAL, {}};
    st.phi.set_kind(FieldKind::Solution);
    for (auto idx : parabolic_boundary(g, full_cylinder(g)).nodes) {
        if (boundary[idx] < psi[idx]) {
            throw ValidationError("construction: boundary data below the obstacle on the parabolic boundary");
        }
        st.phi[idx] = boundary[idx];
    }
    return st;
}

struct ApplyOutcome {
    double max_increase = 0.0;
    double min_increment = 0.0;  ///< min (phi_new - phi_old) over the cylinder
    StepReport worst;
    bool inner_cap_hit = false;
};

/// v = solution in the cylinder with phi on its parabolic boundary; phi <- max(phi, v) there.
inline ApplyOutcome apply_one(ConstructionState& state, const Cylinder& cyl, const FieldSpec& fs,
                              const SolverConfig& cfg)
{
    const SpaceTimeGrid& grid = state.phi.grid();
    cyl.validate(grid);
    const SpatialBox box = cyl.box(grid);
    ApplyOutcome out;
    // v is solved on scratch slices; only nodes of the closed box are read or written, so
    // cylinders with disjoint boxes may be applied concurrently
    std::vector<double> prev(grid.slice_size(), 0.0);
    std::vector<double> cur(grid.slice_size(), 0.0);
    const auto start_slice = state.phi.slice(cyl.start);
    for (int j = box.lo[1]; j <= box.hi[1]; ++j) {
        for (int i = box.lo[0]; i <= box.hi[0]; ++i) {
            prev[grid.spatial_index(i, j)] = start_slice[grid.spatial_index(i, j)];
        }
    }
    for (int t = cyl.start + 1; t <= cyl.end; ++t) {
        auto phi_t = state.phi.slice(t);
        for (int j = box.lo[1]; j <= box.hi[1]; ++j) {
            for (int i = box.lo[0]; i <= box.hi[0]; ++i) {
                const auto s = grid.spatial_index(i, j);
                cur[s] = box.is_interior(i, j) ? prev[s] : phi_t[s];
            }
        }
        const StepReport rep = step_in_place(grid, box, prev, cur, cfg, fs);
        if (!rep.converged) {
            out.inner_cap_hit = true;
        }
        out.worst.residual = std::max(out.worst.residual, rep.residual);
        for (int j = box.lo[1]; j <= box.hi[1]; ++j) {
            for (int i = box.lo[0]; i <= box.hi[0]; ++i) {
                if (!box.is_interior(i, j)) {
                    continue;
                }
                const auto s = grid.spatial_index(i, j);
                const double before = phi_t[s];
                const double after = std::max(before, cur[s]);
                out.max_increase = std::max(out.max_increase, after - before);
                out.min_increment = std::min(out.min_increment, after - before);
                phi_t[s] = after;
            }
        }
        std::swap(prev, cur);
    }
    return out;
}

struct TraceRow {
    int sweep = 0;
    double sup_change = 0.0;
    double max_phi = 0.0;
};

struct ConstructionOptions {
    double sweep_tol = 1e-8;
    int max_sweeps = 1000;
    /// solve runs of consecutive cylinders with disjoint closed boxes concurrently
    bool parallel = false;
    unsigned max_threads = 0;  ///< 0: ORLICZ_THREADS or hardware concurrency
    /// called after every apply_one with the cylinder index and its outcome
    std::function<void(std::size_t, const ApplyOutcome&, const ConstructionState&)> observer;
};

struct ConstructionResult {
    ScalarField u_star;
    std::vector<TraceRow> trace;
    bool converged = false;
    bool inner_cap_hit = false;
    double min_increment = 0.0;  ///< most negative phi_new - phi_old seen (0 when monotone)
    double max_abs_phi = 0.0;    ///< sup |phi_k| over all snapshots
};

/// Worker cap from ORLICZ_THREADS (when set and positive) or the hardware.
inline unsigned worker_cap()
{
    if (const char* env = std::getenv("ORLICZ_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

inline bool boxes_disjoint(const SpatialBox& a, const SpatialBox& b)
{
    return a.hi[0] < b.lo[0] || b.hi[0] < a.lo[0] || a.hi[1] < b.lo[1] || b.hi[1] < a.lo[1];
}

}  // namespace detail

/// Sweeps apply_one over the family until the sup-norm change over one sweep drops below
/// sweep_tol or max_sweeps is reached.
inline ConstructionResult run_construction(const ScalarField& psi, const ScalarField& boundary,
                                           const CylinderFamily& family, const FieldSpec& fs,
                                           const SolverConfig& cfg,
                                           const ConstructionOptions& opt = {})
{
    if (family.cylinders.empty()) {
        throw DomainError("run_construction: empty cylinder family");
    }
    cfg.validate();
    ConstructionState state = initial_state(psi, boundary);
    const SpaceTimeGrid& grid = psi.grid();
    ConstructionResult res{state.phi, {}, false, false, 0.0, sup_norm(state.phi.values())};
    const unsigned cap = opt.max_threads ? opt.max_threads : worker_cap();

    const auto record = [&](std::size_t k, const ApplyOutcome& o) {
        res.min_increment = std::min(res.min_increment, o.min_increment);
        res.inner_cap_hit = res.inner_cap_hit || o.inner_cap_hit;
        if (opt.observer) {
            opt.observer(k, o, state);
        }
    };

    for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
        double change = 0.0;
        std::size_t k = 0;
        while (k < family.cylinders.size()) {
            std::size_t group_end = k + 1;
            if (opt.parallel && cap > 1) {
                std::vector<SpatialBox> boxes{family.cylinders[k].box(grid)};
                while (group_end < family.cylinders.size() && boxes.size() < cap) {
                    const SpatialBox next = family.cylinders[group_end].box(grid);
                    const bool free = std::all_of(boxes.begin(), boxes.end(), [&](const SpatialBox& b) {
                        return detail::boxes_disjoint(b, next);
                    });
                    if (!free) {
                        break;
                    }
                    boxes.push_back(next);
                    ++group_end;
                }
            }
            if (group_end - k == 1) {
                const ApplyOutcome o = apply_one(state, family.cylinders[k], fs, cfg);
                change = std::max(change, o.max_increase);
                record(k, o);
            } else {
                std::vector<ApplyOutcome> outcomes(group_end - k);
                std::vector<std::thread> workers;
                for (std::size_t m = k; m < group_end; ++m) {
                    workers.emplace_back([&, m] {
                        outcomes[m - k] = apply_one(state, family.cylinders[m], fs, cfg);
                    });
                }
                for (auto& w : workers) {
                    w.join();
                }
                for (std::size_t m = k; m < group_end; ++m) {
                    change = std::max(change, outcomes[m - k].max_increase);
                    record(m, outcomes[m - k]);
                }
            }
            k = group_end;
        }
        state.sweep = sweep;
        state.last_sweep_change = change;
        state.history.push_back(change);
        const double max_phi = *std::max_element(state.phi.values().begin(), state.phi.values().end());
        res.max_abs_phi = std::max(res.max_abs_phi, sup_norm(state.phi.values()));
        res.trace.push_back({sweep, change, max_phi});
        if (change < opt.sweep_tol) {
            res.converged = true;
            break;
        }
    }
    res.u_star = state.phi;
    return res;
}

}  // namespace orlicz
