#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "orlicz/errors.hpp"
#include "orlicz/grid.hpp"

namespace orlicz {

/// Formats a double with 17 significant digits, enough to round-trip exactly.
inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

using CsvColumn = std::pair<std::string, std::span<const double>>;

/// Writes `t,x[,y],<columns...>` with one row per node (time-major, then y, then x).
inline void write_node_csv(std::ostream& os, const SpaceTimeGrid& grid,
                           const std::vector<CsvColumn>& columns)
{
    os << "t,x";
    if (grid.dim == 2) {
        os << ",y";
    }
    for (const auto& [name, data] : columns) {
        if (data.size() != grid.node_count()) {
            throw DomainError("write_node_csv: column '" + name + "' has the wrong length");
        }
        os << ',' << name;
    }
    os << '\n';
    for (int t = 0; t <= grid.nt; ++t) {
        for (int j = 0; j < grid.ny(); ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                os << format_double(grid.time(t)) << ',' << format_double(grid.x(i));
                if (grid.dim == 2) {
                    os << ',' << format_double(grid.y(j));
                }
                const auto idx = grid.index(t, i, j);
                for (const auto& col : columns) {
                    os << ',' << format_double(col.second[idx]);
                }
                os << '\n';
            }
        }
    }
}

inline void write_field_csv(std::ostream& os, const ScalarField& field)
{
    write_node_csv(os, field.grid(), {{"value", field.values()}});
}

/// Reads the `value` column of a field CSV written for `grid`. Coordinates must match the
/// grid's node order.
inline ScalarField read_field_csv(std::istream& is, const SpaceTimeGrid& grid,
                                  FieldKind kind = FieldKind::Solution)
{
    std::string line;
    if (!std::getline(is, line)) {
        throw ValidationError("field csv: missing header");
    }
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            header.push_back(cell);
        }
    }
    const std::size_t coords = grid.dim == 2 ? 3 : 2;
    std::size_t value_col = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "value") {
            value_col = c;
        }
    }
    if (header.size() < coords + 1 || header[0] != "t" || header[1] != "x" ||
        (grid.dim == 2 && header[2] != "y") || value_col == header.size()) {
        throw ValidationError("field csv: header must be t,x[,y],value");
    }
    std::vector<double> values;
    values.reserve(grid.node_count());
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        ++row;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(ss, cell, ',')) {
            try {
                cells.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ValidationError("field csv: bad number on data row " + std::to_string(row));
            }
        }
        if (cells.size() != header.size()) {
            throw ValidationError("field csv: wrong column count on data row " +
                                  std::to_string(row));
        }
        const std::size_t idx = values.size();
        if (idx >= grid.node_count()) {
            throw ValidationError("field csv: more rows than grid nodes");
        }
        const auto n = grid.node(idx);
        const double tol = 1e-9 * std::max(1.0, grid.side + grid.T);
        if (std::abs(cells[0] - grid.time(n.t)) > tol || std::abs(cells[1] - grid.x(n.i)) > tol ||
            (grid.dim == 2 && std::abs(cells[2] - grid.y(n.j)) > tol)) {
            throw ValidationError("field csv: coordinates on data row " + std::to_string(row) +
                                  " do not match the grid");
        }
        values.push_back(cells[value_col]);
    }
    if (values.size() != grid.node_count()) {
        throw ValidationError("field csv: expected " + std::to_string(grid.node_count()) +
                              " rows, got " + std::to_string(values.size()));
    }
    return ScalarField(grid, kind, std::move(values));
}

}  // namespace orlicz
