#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "orlicz/errors.hpp"
#include "orlicz/evolution.hpp"
#include "orlicz/growth.hpp"
#include "orlicz/problems.hpp"

namespace orlicz {

/// Configuration problem; `line` is 0 for values that came from a --set override.
class ConfigError : public ValidationError {
public:
    ConfigError(int line, const std::string& what)
        : ValidationError(line > 0 ? "config line " + std::to_string(line) + ": " + what
                                   : "config: " + what),
          line_(line)
    {
    }
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

struct GrowthSection {
    Family family = Family::Power;
    double p = 2.0;
    double q = 2.0;
    double a = 0.0;
    bool normalized = true;
};

struct GridSection {
    int dim = 1;
    int nx = 33;
    int nt = 32;
    double T = 0.25;
    double side = 1.0;
    std::array<double, 2> origin{0.0, 0.0};
};

struct ConstructionSection {
    int count = 16;
    std::uint64_t seed = 1;
    int min_radius = 2;
    double sweep_tol = 1e-8;
    int max_sweeps = 1000;
    bool parallel = false;
};

struct AnalysisSection {
    double sigma = 1e-3;
    double eps_c = 1e-3;
    int samples = 1000;
    std::uint64_t seed = 1;
};

struct TableSection {
    double s_min = 1e-3;
    double s_max = 1e3;
    int points = 61;
};

struct RunConfig {
    GrowthSection growth;
    GridSection grid;
    ObstacleSpec obstacle;
    BoundarySpec boundary;
    SolverConfig solver;
    double delta_contact = 1e-7;
    ConstructionSection construction;
    AnalysisSection analysis;
    TableSection table;
    std::string output = "solution.csv";
    std::string trace = "trace.csv";

    [[nodiscard]] GrowthSpec growth_spec() const
    {
        switch (growth.family) {
        case Family::Power:
            return GrowthSpec::power(growth.p, growth.normalized);
        case Family::PiecewisePower:
            return GrowthSpec::piecewise_power(growth.p, growth.q, growth.normalized);
        case Family::PowerLog:
            return GrowthSpec::power_log(growth.p, growth.a, growth.normalized);
        }
        throw DomainError("unknown family");
    }

    [[nodiscard]] SpaceTimeGrid make_grid() const
    {
        return SpaceTimeGrid::make(grid.dim, grid.nx, grid.nt, grid.T, grid.side, grid.origin);
    }
};

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct RawValue {
    std::string text;
    int line = 0;
};

using RawConfig = std::map<std::string, RawValue>;

/// Every accepted "section.key".
inline const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys{
        "growth.family", "growth.p", "growth.q", "growth.a", "growth.normalized",
        "grid.dim", "grid.nx", "grid.nt", "grid.T", "grid.side", "grid.origin_x", "grid.origin_y",
        "problem.obstacle", "problem.obstacle_value", "problem.bump_center_x",
        "problem.bump_center_y", "problem.bump_width", "problem.bump_height", "problem.bump_ramp",
        "problem.obstacle_file", "problem.boundary", "problem.boundary_value",
        "problem.boundary_slope", "problem.boundary_file",
        "solver.method", "solver.tol", "solver.max_iter", "solver.max_sweeps", "solver.epsilon",
        "solver.damping_floor", "solver.delta_contact",
        "construction.count", "construction.seed", "construction.min_radius",
        "construction.sweep_tol", "construction.max_sweeps", "construction.parallel",
        "analysis.sigma", "analysis.eps_c", "analysis.samples", "analysis.seed",
        "table.s_min", "table.s_max", "table.points",
        "output.path", "output.trace"};
    return keys;
}

inline RawConfig parse_raw(std::istream& in)
{
    RawConfig raw;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) {
            continue;
        }
        if (body.front() == '[') {
            if (body.back() != ']' || body.size() < 3) {
                throw ConfigError(lineno, "malformed section header '" + body + "'");
            }
            section = trim(body.substr(1, body.size() - 2));
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(lineno, "expected 'key = value', got '" + body + "'");
        }
        if (section.empty()) {
            throw ConfigError(lineno, "key outside of any [section]");
        }
        const std::string key = section + "." + trim(body.substr(0, eq));
        if (!known_keys().count(key)) {
            throw ConfigError(lineno, "unknown key '" + key + "'");
        }
        if (raw.count(key)) {
            throw ConfigError(lineno, "duplicate key '" + key + "'");
        }
        raw[key] = {trim(body.substr(eq + 1)), lineno};
    }
    return raw;
}

/// "section.key=value" from the command line.
inline void apply_override(RawConfig& raw, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError(0, "override '" + assignment + "' must look like section.key=value");
    }
    const std::string key = trim(assignment.substr(0, eq));
    if (!known_keys().count(key)) {
        throw ConfigError(0, "unknown key '" + key + "' in override");
    }
    raw[key] = {trim(assignment.substr(eq + 1)), 0};
}

class Reader {
public:
    explicit Reader(const RawConfig& raw) : raw_(raw) {}

    [[nodiscard]] bool has(const std::string& key) const { return raw_.count(key) != 0; }

    [[nodiscard]] int line(const std::string& key) const
    {
        const auto it = raw_.find(key);
        return it == raw_.end() ? 0 : it->second.line;
    }

    void require(const std::string& key) const
    {
        if (!has(key)) {
            throw ConfigError(0, "missing required key '" + key + "'");
        }
    }

    void get(const std::string& key, double& out) const
    {
        if (const auto* v = find(key)) {
            std::size_t used = 0;
            try {
                out = std::stod(v->text, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != v->text.size() || !std::isfinite(out)) {
                throw ConfigError(v->line, "'" + key + "' expects a number, got '" + v->text + "'");
            }
        }
    }

    template <class Int>
        requires std::is_integral_v<Int>
    void get(const std::string& key, Int& out) const
    {
        if (const auto* v = find(key)) {
            const char* first = v->text.data();
            const char* last = first + v->text.size();
            Int value{};
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc{} || ptr != last) {
                throw ConfigError(v->line, "'" + key + "' expects an integer, got '" + v->text + "'");
            }
            out = value;
        }
    }

    void get(const std::string& key, bool& out) const
    {
        if (const auto* v = find(key)) {
            std::string t = v->text;
            std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
            if (t == "true" || t == "1" || t == "yes") {
                out = true;
            } else if (t == "false" || t == "0" || t == "no") {
                out = false;
            } else {
                throw ConfigError(v->line, "'" + key + "' expects true/false, got '" + v->text + "'");
            }
        }
    }

    void get(const std::string& key, std::string& out) const
    {
        if (const auto* v = find(key)) {
            out = v->text;
        }
    }

    template <class E>
    void get_enum(const std::string& key, E& out,
                  const std::vector<std::pair<std::string, E>>& names) const
    {
        if (const auto* v = find(key)) {
            for (const auto& [name, value] : names) {
                if (v->text == name) {
                    out = value;
                    return;
                }
            }
            std::string allowed;
            for (const auto& n : names) {
                allowed += (allowed.empty() ? "" : "|") + n.first;
            }
            throw ConfigError(v->line, "'" + key + "' must be one of " + allowed + ", got '" +
                                           v->text + "'");
        }
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const
    {
        throw ConfigError(line(key), "'" + key + "' " + what);
    }

private:
    [[nodiscard]] const RawValue* find(const std::string& key) const
    {
        const auto it = raw_.find(key);
        return it == raw_.end() ? nullptr : &it->second;
    }

    const RawConfig& raw_;
};

}  // namespace detail

/// Builds a validated RunConfig from parsed key/value pairs. Required: growth.family, growth.p,
/// grid.nx, grid.nt, grid.T (plus growth.q / growth.a for the families that use them).
inline RunConfig build_config(const detail::RawConfig& raw)
{
    const detail::Reader r(raw);
    RunConfig c;

    for (const char* key : {"growth.family", "growth.p", "grid.nx", "grid.nt", "grid.T"}) {
        r.require(key);
    }
    r.get_enum("growth.family", c.growth.family,
               {{"power", Family::Power},
                {"piecewise_power", Family::PiecewisePower},
                {"power_log", Family::PowerLog}});
    r.get("growth.p", c.growth.p);
    if (c.growth.family == Family::PiecewisePower) {
        r.require("growth.q");
    }
    if (c.growth.family == Family::PowerLog) {
        r.require("growth.a");
    }
    r.get("growth.q", c.growth.q);
    r.get("growth.a", c.growth.a);
    r.get("growth.normalized", c.growth.normalized);

    r.get("grid.dim", c.grid.dim);
    r.get("grid.nx", c.grid.nx);
    r.get("grid.nt", c.grid.nt);
    r.get("grid.T", c.grid.T);
    r.get("grid.side", c.grid.side);
    r.get("grid.origin_x", c.grid.origin[0]);
    r.get("grid.origin_y", c.grid.origin[1]);
    if (c.grid.dim != 1 && c.grid.dim != 2) {
        r.fail("grid.dim", "must be 1 or 2");
    }
    if (c.grid.nx < 3) {
        r.fail("grid.nx", "must be >= 3");
    }
    if (c.grid.nt < 1) {
        r.fail("grid.nt", "must be >= 1");
    }
    if (!(c.grid.T > 0.0)) {
        r.fail("grid.T", "must be > 0");
    }
    if (!(c.grid.side > 0.0)) {
        r.fail("grid.side", "must be > 0");
    }

    // growth range: exponents must exceed 2n/(n+2) (and 1, for the Orlicz structure)
    const int n = c.grid.dim;
    const double lower = 2.0 * n / (n + 2.0);
    const auto check_exponent = [&](const char* key, double v) {
        if (!(v > lower)) {
            std::ostringstream os;
            os << "= " << v << " violates g0 > 2n/(n+2) = " << lower << " for n = " << n;
            r.fail(key, os.str());
        }
        if (!(v > 1.0)) {
            r.fail(key, "must be > 1");
        }
    };
    check_exponent("growth.p", c.growth.p);
    if (c.growth.family == Family::PiecewisePower) {
        check_exponent("growth.q", c.growth.q);
    }
    GrowthSpec spec = GrowthSpec::power(2.0);
    try {
        spec = c.growth_spec();
    } catch (const std::exception& e) {
        r.fail("growth.family", std::string("invalid growth: ") + e.what());
    }
    if (!(spec.g0() > lower)) {
        std::ostringstream os;
        os << "gives g0 = " << spec.g0() << ", violating g0 > 2n/(n+2) = " << lower;
        r.fail("growth.p", os.str());
    }

    r.get_enum("problem.obstacle", c.obstacle.kind,
               {{"none", ObstacleKind::None},
                {"constant", ObstacleKind::Constant},
                {"bump", ObstacleKind::Bump},
                {"file", ObstacleKind::File}});
    r.get("problem.obstacle_value", c.obstacle.value);
    c.obstacle.center = {c.grid.origin[0] + 0.5 * c.grid.side, c.grid.origin[1] + 0.5 * c.grid.side};
    r.get("problem.bump_center_x", c.obstacle.center[0]);
    r.get("problem.bump_center_y", c.obstacle.center[1]);
    r.get("problem.bump_width", c.obstacle.width);
    r.get("problem.bump_height", c.obstacle.height);
    r.get("problem.bump_ramp", c.obstacle.ramp);
    r.get("problem.obstacle_file", c.obstacle.path);
    if (!(c.obstacle.width > 0.0)) {
        r.fail("problem.bump_width", "must be > 0");
    }
    if (c.obstacle.kind == ObstacleKind::File) {
        r.require("problem.obstacle_file");
    }
    r.get_enum("problem.boundary", c.boundary.kind,
               {{"zero", BoundaryKind::Zero},
                {"constant", BoundaryKind::Constant},
                {"linear", BoundaryKind::Linear},
                {"heat_exact", BoundaryKind::HeatExact},
                {"file", BoundaryKind::File}});
    r.get("problem.boundary_value", c.boundary.value);
    r.get("problem.boundary_slope", c.boundary.slope);
    r.get("problem.boundary_file", c.boundary.path);
    if (c.boundary.kind == BoundaryKind::File) {
        r.require("problem.boundary_file");
    }

    r.get_enum("solver.method", c.solver.method,
               {{"picard", NonlinearMethod::Picard}, {"newton", NonlinearMethod::DampedNewton}});
    r.get("solver.tol", c.solver.tol);
    r.get("solver.max_iter", c.solver.max_iterations);
    r.get("solver.max_sweeps", c.solver.max_linear_sweeps);
    r.get("solver.damping_floor", c.solver.damping_floor);
    if (r.has("solver.epsilon")) {
        double eps = 0.0;
        r.get("solver.epsilon", eps);
        if (!(eps >= 0.0)) {
            r.fail("solver.epsilon", "must be >= 0");
        }
        c.solver.epsilon = eps;
    }
    r.get("solver.delta_contact", c.delta_contact);
    if (!(c.solver.tol > 0.0)) {
        r.fail("solver.tol", "must be > 0");
    }
    if (c.solver.max_iterations < 1) {
        r.fail("solver.max_iter", "must be >= 1");
    }
    if (c.solver.max_linear_sweeps < 1) {
        r.fail("solver.max_sweeps", "must be >= 1");
    }
    if (!(c.solver.damping_floor > 0.0 && c.solver.damping_floor <= 1.0)) {
        r.fail("solver.damping_floor", "must lie in (0, 1]");
    }
    if (!(c.delta_contact >= 0.0)) {
        r.fail("solver.delta_contact", "must be >= 0");
    }

    r.get("construction.count", c.construction.count);
    r.get("construction.seed", c.construction.seed);
    r.get("construction.min_radius", c.construction.min_radius);
    r.get("construction.sweep_tol", c.construction.sweep_tol);
    r.get("construction.max_sweeps", c.construction.max_sweeps);
    r.get("construction.parallel", c.construction.parallel);
    if (c.construction.count < 1) {
        r.fail("construction.count", "must be >= 1");
    }
    if (c.construction.min_radius < 1) {
        r.fail("construction.min_radius", "must be >= 1");
    }
    if (!(c.construction.sweep_tol > 0.0)) {
        r.fail("construction.sweep_tol", "must be > 0");
    }
    if (c.construction.max_sweeps < 1) {
        r.fail("construction.max_sweeps", "must be >= 1");
    }

    r.get("analysis.sigma", c.analysis.sigma);
    r.get("analysis.eps_c", c.analysis.eps_c);
    r.get("analysis.samples", c.analysis.samples);
    r.get("analysis.seed", c.analysis.seed);
    if (!(c.analysis.sigma > 0.0 && c.analysis.sigma < 1.0)) {
        r.fail("analysis.sigma", "must lie in (0, 1)");
    }
    if (!(c.analysis.eps_c > 0.0 && c.analysis.eps_c < 1.0)) {
        r.fail("analysis.eps_c", "must lie in (0, 1)");
    }
    if (c.analysis.samples < 1) {
        r.fail("analysis.samples", "must be >= 1");
    }

    r.get("table.s_min", c.table.s_min);
    r.get("table.s_max", c.table.s_max);
    r.get("table.points", c.table.points);
    if (!(c.table.s_min > 0.0 && c.table.s_max > c.table.s_min)) {
        r.fail("table.s_max", "needs 0 < s_min < s_max");
    }
    if (c.table.points < 2) {
        r.fail("table.points", "must be >= 2");
    }

    r.get("output.path", c.output);
    r.get("output.trace", c.trace);
    return c;
}

inline RunConfig parse_config(std::istream& in, const std::vector<std::string>& overrides = {})
{
    auto raw = detail::parse_raw(in);
    for (const auto& o : overrides) {
        detail::apply_override(raw, o);
    }
    return build_config(raw);
}

inline RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {})
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(0, "cannot open '" + path + "'");
    }
    return parse_config(in, overrides);
}

}  // namespace orlicz
