#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <string>

#include "orlicz/csv.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/grid.hpp"

namespace orlicz {

/// Stand-in for "no obstacle": finite, so fields stay finite, and far below any data.
inline constexpr double kNoObstacle = -1e300;

enum class ObstacleKind { None, Constant, Bump, File };
enum class BoundaryKind { Zero, Constant, Linear, HeatExact, File };

/// psi = height (1 - |x - center|^2 / width^2)_+ min(1, t / ramp). The ramp keeps the obstacle
/// at or below zero initial data; ramp <= 0 means T / 4.
struct ObstacleSpec {
    ObstacleKind kind = ObstacleKind::None;
    double value = 0.0;
    std::array<double, 2> center{0.5, 0.5};
    double width = 0.25;
    double height = 0.2;
    double ramp = 0.0;
    std::string path;
};

/// Data on the parabolic boundary (the whole field is filled; interior values only seed solves).
///   constant:   value
///   linear:     value + slope (x + y)
///   heat_exact: |x|^2 + 4 n t, an exact solution of u_t = 2 Laplace(u), i.e. normalized power 2
struct BoundarySpec {
    BoundaryKind kind = BoundaryKind::Zero;
    double value = 0.0;
    double slope = 0.0;
    std::string path;
};

inline ScalarField bump_obstacle(const SpaceTimeGrid& grid, std::array<double, 2> center,
                                 double width, double height, double ramp)
{
    if (!(width > 0.0)) {
        throw DomainError("bump obstacle: width must be > 0");
    }
    const double rt = ramp > 0.0 ? ramp : 0.25 * grid.T;
    return ScalarField::from_function(
        grid,
        [&](double t, double x, double y) {
            double r2 = (x - center[0]) * (x - center[0]);
            if (grid.dim == 2) {
                r2 += (y - center[1]) * (y - center[1]);
            }
            return height * std::max(0.0, 1.0 - r2 / (width * width)) * std::min(1.0, t / rt);
        },
        FieldKind::Obstacle);
}

namespace detail {

inline ScalarField load_field(const SpaceTimeGrid& grid, const std::string& path, FieldKind kind)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open field file '" + path + "'");
    }
    return read_field_csv(in, grid, kind);
}

}  // namespace detail

inline ScalarField make_obstacle(const SpaceTimeGrid& grid, const ObstacleSpec& spec)
{
    switch (spec.kind) {
    case ObstacleKind::None:
        return ScalarField(grid, FieldKind::Obstacle, kNoObstacle);
    case ObstacleKind::Constant:
        return ScalarField(grid, FieldKind::Obstacle, spec.value);
    case ObstacleKind::Bump:
        return bump_obstacle(grid, spec.center, spec.width, spec.height, spec.ramp);
    case ObstacleKind::File:
        return detail::load_field(grid, spec.path, FieldKind::Obstacle);
    }
    throw DomainError("make_obstacle: unknown kind");
}

inline ScalarField make_boundary(const SpaceTimeGrid& grid, const BoundarySpec& spec)
{
    const int n = grid.dim;
    switch (spec.kind) {
    case BoundaryKind::Zero:
        return ScalarField(grid, FieldKind::Boundary, 0.0);
    case BoundaryKind::Constant:
        return ScalarField(grid, FieldKind::Boundary, spec.value);
    case BoundaryKind::Linear:
        return ScalarField::from_function(
            grid,
            [&](double, double x, double y) {
                return spec.value + spec.slope * (x + (n == 2 ? y : 0.0));
            },
            FieldKind::Boundary);
    case BoundaryKind::HeatExact:
        return ScalarField::from_function(
            grid,
            [n](double t, double x, double y) {
                return x * x + (n == 2 ? y * y : 0.0) + 4.0 * n * t;
            },
            FieldKind::Boundary);
    case BoundaryKind::File:
        return detail::load_field(grid, spec.path, FieldKind::Boundary);
    }
    throw DomainError("make_boundary: unknown kind");
}

}  // namespace orlicz
