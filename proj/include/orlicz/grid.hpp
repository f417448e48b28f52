#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "orlicz/errors.hpp"

namespace orlicz {

/// Uniform tensor grid over the box [origin, origin + side]^dim times [0, T].
/// Spatial nodes per axis: nx; time levels 0..nt.
struct SpaceTimeGrid {
    int dim = 1;
    int nx = 2;
    int nt = 1;
    double T = 1.0;
    double side = 1.0;
    std::array<double, 2> origin{0.0, 0.0};

    static SpaceTimeGrid make(int dim, int nx, int nt, double T, double side = 1.0,
                              std::array<double, 2> origin = {0.0, 0.0})
    {
        if (dim != 1 && dim != 2) {
            throw DomainError("grid: dim must be 1 or 2");
        }
        if (nx < 3) {
            throw DomainError("grid: nx must be >= 3");
        }
        if (nt < 1) {
            throw DomainError("grid: nt must be >= 1");
        }
        if (!(T > 0.0) || !(side > 0.0) || !std::isfinite(T) || !std::isfinite(side)) {
            throw DomainError("grid: T and side must be positive");
        }
        return SpaceTimeGrid{dim, nx, nt, T, side, origin};
    }

    [[nodiscard]] double h() const noexcept { return side / (nx - 1); }
    [[nodiscard]] double tau() const noexcept { return T / nt; }
    [[nodiscard]] int ny() const noexcept { return dim == 2 ? nx : 1; }
    [[nodiscard]] std::size_t slice_size() const noexcept { return std::size_t(nx) * ny(); }
    [[nodiscard]] std::size_t node_count() const noexcept { return slice_size() * (nt + 1); }

    [[nodiscard]] std::size_t spatial_index(int i, int j = 0) const noexcept
    {
        return std::size_t(j) * nx + i;
    }
    [[nodiscard]] std::size_t index(int t, int i, int j = 0) const noexcept
    {
        return std::size_t(t) * slice_size() + spatial_index(i, j);
    }

    struct Node {
        int t;
        int i;
        int j;
    };
    [[nodiscard]] Node node(std::size_t idx) const noexcept
    {
        const auto s = slice_size();
        const auto t = int(idx / s);
        const auto r = idx % s;
        return {t, int(r % nx), int(r / nx)};
    }

    [[nodiscard]] double x(int i) const noexcept { return origin[0] + i * h(); }
    [[nodiscard]] double y(int j) const noexcept { return origin[1] + j * h(); }
    [[nodiscard]] double time(int t) const noexcept { return t * tau(); }

    /// Spatial node on the boundary of the domain box.
    [[nodiscard]] bool on_domain_boundary(int i, int j = 0) const noexcept
    {
        if (i == 0 || i == nx - 1) {
            return true;
        }
        return dim == 2 && (j == 0 || j == nx - 1);
    }

    [[nodiscard]] double diameter() const noexcept { return side * std::sqrt(double(dim)); }
    [[nodiscard]] double cell_volume() const noexcept { return std::pow(h(), dim); }

    bool operator==(const SpaceTimeGrid&) const = default;
};

enum class FieldKind { Solution, Obstacle, Boundary, Diagnostic };

/// Node values on a space-time grid, time-major then y then x.
class ScalarField {
public:
    ScalarField(SpaceTimeGrid grid, FieldKind kind = FieldKind::Solution, double fill = 0.0)
        : grid_(grid), kind_(kind), values_(grid.node_count(), fill)
    {
    }

    ScalarField(SpaceTimeGrid grid, FieldKind kind, std::vector<double> values)
        : grid_(grid), kind_(kind), values_(std::move(values))
    {
        if (values_.size() != grid_.node_count()) {
            throw DomainError("ScalarField: value count does not match grid");
        }
        for (double v : values_) {
            if (!std::isfinite(v)) {
                throw DomainError("ScalarField: values must be finite");
            }
        }
    }

    /// Samples f(t, x, y) at every node.
    template <class F>
    static ScalarField from_function(const SpaceTimeGrid& grid, F&& f,
                                     FieldKind kind = FieldKind::Solution)
    {
        ScalarField out(grid, kind);
        for (int t = 0; t <= grid.nt; ++t) {
            for (int j = 0; j < grid.ny(); ++j) {
                for (int i = 0; i < grid.nx; ++i) {
                    out.values_[grid.index(t, i, j)] = f(grid.time(t), grid.x(i), grid.y(j));
                }
            }
        }
        return out;
    }

    [[nodiscard]] const SpaceTimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] FieldKind kind() const noexcept { return kind_; }
    void set_kind(FieldKind kind) noexcept { kind_ = kind; }

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }

    [[nodiscard]] std::span<const double> slice(int t) const noexcept
    {
        return std::span<const double>(values_).subspan(std::size_t(t) * grid_.slice_size(),
                                                        grid_.slice_size());
    }
    [[nodiscard]] std::span<double> slice(int t) noexcept
    {
        return std::span<double>(values_).subspan(std::size_t(t) * grid_.slice_size(),
                                                  grid_.slice_size());
    }

    double& operator[](std::size_t idx) noexcept { return values_[idx]; }
    double operator[](std::size_t idx) const noexcept { return values_[idx]; }
    double& at(int t, int i, int j = 0) noexcept { return values_[grid_.index(t, i, j)]; }
    [[nodiscard]] double at(int t, int i, int j = 0) const noexcept
    {
        return values_[grid_.index(t, i, j)];
    }

private:
    SpaceTimeGrid grid_;
    FieldKind kind_;
    std::vector<double> values_;
};

/// Closed spatial box of node indices [lo, hi] per axis. In 1D the second axis is [0, 0].
struct SpatialBox {
    std::array<int, 2> lo{0, 0};
    std::array<int, 2> hi{0, 0};
    int dim = 1;

    static SpatialBox whole(const SpaceTimeGrid& grid)
    {
        return {{0, 0}, {grid.nx - 1, grid.dim == 2 ? grid.nx - 1 : 0}, grid.dim};
    }

    [[nodiscard]] bool contains(int i, int j = 0) const noexcept
    {
        return i >= lo[0] && i <= hi[0] && j >= lo[1] && j <= hi[1];
    }
    [[nodiscard]] bool is_interior(int i, int j = 0) const noexcept
    {
        if (i <= lo[0] || i >= hi[0]) {
            return false;
        }
        return dim == 1 || (j > lo[1] && j < hi[1]);
    }
    [[nodiscard]] bool on_boundary(int i, int j = 0) const noexcept
    {
        return contains(i, j) && !is_interior(i, j);
    }
    [[nodiscard]] bool has_interior() const noexcept
    {
        return hi[0] - lo[0] >= 2 && (dim == 1 || hi[1] - lo[1] >= 2);
    }
};

/// Sub-cylinder B_r(center) x (start, end] with B_r the discrete sup-norm ball of radius r nodes,
/// clipped to the domain.
struct Cylinder {
    std::array<int, 2> center{0, 0};
    int radius = 1;
    int start = 0;
    int end = 0;

    [[nodiscard]] SpatialBox box(const SpaceTimeGrid& grid) const noexcept
    {
        SpatialBox b;
        b.dim = grid.dim;
        b.lo[0] = std::max(0, center[0] - radius);
        b.hi[0] = std::min(grid.nx - 1, center[0] + radius);
        if (grid.dim == 2) {
            b.lo[1] = std::max(0, center[1] - radius);
            b.hi[1] = std::min(grid.nx - 1, center[1] + radius);
        }
        return b;
    }

    void validate(const SpaceTimeGrid& grid) const
    {
        if (radius < 0) {
            throw DomainError("cylinder: radius must be >= 0");
        }
        if (start < 0 || end > grid.nt || start >= end) {
            throw DomainError("cylinder: need 0 <= start < end <= nt");
        }
        const SpatialBox b = box(grid);
        if (b.lo[0] > b.hi[0] || b.lo[1] > b.hi[1]) {
            throw DomainError("cylinder: spatial ball misses the grid");
        }
    }
};

/// The cylinder B x (0, T] covering the whole domain.
inline Cylinder full_cylinder(const SpaceTimeGrid& grid)
{
    const int c = (grid.nx - 1) / 2;
    return Cylinder{{c, grid.dim == 2 ? c : 0}, grid.nx, 0, grid.nt};
}

struct ParabolicBoundary {
    std::vector<std::size_t> nodes;  ///< sorted global node indices
};

/// Bottom slice (closed box at the start level) plus the lateral box boundary at every later
/// level up to and including the end level.
inline ParabolicBoundary parabolic_boundary(const SpaceTimeGrid& grid, const Cylinder& cyl)
{
    cyl.validate(grid);
    const SpatialBox b = cyl.box(grid);
    ParabolicBoundary pb;
    for (int t = cyl.start; t <= cyl.end; ++t) {
        for (int j = b.lo[1]; j <= b.hi[1]; ++j) {
            for (int i = b.lo[0]; i <= b.hi[0]; ++i) {
                if (t == cyl.start || b.on_boundary(i, j)) {
                    pb.nodes.push_back(grid.index(t, i, j));
                }
            }
        }
    }
    return pb;
}

/// Nodes of the cylinder that are not on its parabolic boundary (the top slice is included).
inline std::vector<std::size_t> interior_nodes(const SpaceTimeGrid& grid, const Cylinder& cyl)
{
    cyl.validate(grid);
    const SpatialBox b = cyl.box(grid);
    std::vector<std::size_t> out;
    for (int t = cyl.start + 1; t <= cyl.end; ++t) {
        for (int j = b.lo[1]; j <= b.hi[1]; ++j) {
            for (int i = b.lo[0]; i <= b.hi[0]; ++i) {
                if (b.is_interior(i, j)) {
                    out.push_back(grid.index(t, i, j));
                }
            }
        }
    }
    return out;
}

/// All nodes of the closed box times [start, end].
inline std::vector<std::size_t> closed_nodes(const SpaceTimeGrid& grid, const Cylinder& cyl)
{
    cyl.validate(grid);
    const SpatialBox b = cyl.box(grid);
    std::vector<std::size_t> out;
    for (int t = cyl.start; t <= cyl.end; ++t) {
        for (int j = b.lo[1]; j <= b.hi[1]; ++j) {
            for (int i = b.lo[0]; i <= b.hi[0]; ++i) {
                out.push_back(grid.index(t, i, j));
            }
        }
    }
    return out;
}

/// Central-difference spatial gradient at (t, i, j); the second component is 0 in 1D.
inline std::array<double, 2> gradient(const ScalarField& u, int t, int i, int j = 0)
{
    const SpaceTimeGrid& g = u.grid();
    if (t < 0 || t > g.nt || i < 0 || i >= g.nx || j < 0 || j >= g.ny()) {
        throw IndexError("gradient: node outside the grid");
    }
    if (g.on_domain_boundary(i, j)) {
        throw IndexError("gradient: node on the spatial boundary");
    }
    const double two_h = 2.0 * g.h();
    std::array<double, 2> out{(u.at(t, i + 1, j) - u.at(t, i - 1, j)) / two_h, 0.0};
    if (g.dim == 2) {
        out[1] = (u.at(t, i, j + 1) - u.at(t, i, j - 1)) / two_h;
    }
    return out;
}

/// Conservative divided difference sum_axis (F_{+1/2} - F_{-1/2}) / h at spatial node (i, j)
/// of one time slice, with face fluxes F = flux((u_nb - u) / h) built from one-sided
/// differences. The node needs both neighbours on every axis.
template <class Flux>
double divergence_of_flux(const SpaceTimeGrid& g, std::span<const double> slice, int i, int j,
                          const Flux& flux)
{
    const double h = g.h();
    const double u = slice[g.spatial_index(i, j)];
    double div = flux((slice[g.spatial_index(i + 1, j)] - u) / h) -
                 flux((u - slice[g.spatial_index(i - 1, j)]) / h);
    if (g.dim == 2) {
        div += flux((slice[g.spatial_index(i, j + 1)] - u) / h) -
               flux((u - slice[g.spatial_index(i, j - 1)]) / h);
    }
    return div / h;
}

// ---------------------------------------------------------------------------
// Extremes over node sets

inline void require_nonempty(std::span<const std::size_t> nodes, const char* op)
{
    if (nodes.empty()) {
        throw DomainError(std::string(op) + ": empty node set");
    }
}

inline double sup_over(const ScalarField& u, std::span<const std::size_t> nodes)
{
    require_nonempty(nodes, "sup");
    double m = -std::numeric_limits<double>::infinity();
    for (auto idx : nodes) {
        m = std::max(m, u[idx]);
    }
    return m;
}

inline double inf_over(const ScalarField& u, std::span<const std::size_t> nodes)
{
    require_nonempty(nodes, "inf");
    double m = std::numeric_limits<double>::infinity();
    for (auto idx : nodes) {
        m = std::min(m, u[idx]);
    }
    return m;
}

inline double sup_norm_over(const ScalarField& u, std::span<const std::size_t> nodes)
{
    require_nonempty(nodes, "sup_norm");
    double m = 0.0;
    for (auto idx : nodes) {
        m = std::max(m, std::abs(u[idx]));
    }
    return m;
}

inline double osc_over(const ScalarField& u, std::span<const std::size_t> nodes)
{
    return sup_over(u, nodes) - inf_over(u, nodes);
}

inline double sup_norm(std::span<const double> values)
{
    double m = 0.0;
    for (double v : values) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

/// max |a - b| over all nodes of two fields on the same grid.
inline double sup_distance(const ScalarField& a, const ScalarField& b)
{
    if (!(a.grid() == b.grid())) {
        throw DomainError("sup_distance: fields live on different grids");
    }
    double m = 0.0;
    for (std::size_t k = 0; k < a.values().size(); ++k) {
        m = std::max(m, std::abs(a[k] - b[k]));
    }
    return m;
}

}  // namespace orlicz
