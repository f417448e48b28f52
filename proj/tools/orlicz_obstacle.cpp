// orlicz_obstacle: command-line front end (classify, solve, obstacle, construct, verify,
// orlicz-table). Exit codes: 0 ok, 1 property failure or non-convergence, 2 usage error.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orlicz/orlicz.hpp"

namespace {

using namespace orlicz;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Args {
    std::string config;
    std::vector<std::string> overrides;
};

RunConfig load(const Args& a)
{
    if (a.config.empty()) {
        throw ValidationError("a config file is required (-c FILE)");
    }
    return parse_config(a.config, a.overrides);
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body)
{
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot write '" + path + "'");
    }
    body(out);
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

void print_report(const SolveReport& r)
{
    std::size_t iterations = 0;
    for (int k : r.step_iterations) {
        iterations += std::size_t(k);
    }
    std::cout << "converged = " << (r.converged ? "true" : "false") << '\n'
              << "time_steps = " << r.step_iterations.size() << '\n'
              << "nonlinear_iterations = " << iterations << '\n'
              << "linear_solves = " << r.linear_sweeps << '\n'
              << "final_residual = " << format_double(r.final_residual) << '\n'
              << "epsilon = " << format_double(r.epsilon) << '\n'
              << "wall_seconds = " << r.wall_seconds << '\n';
}

ObstacleProblemSpec obstacle_problem(const RunConfig& cfg)
{
    const auto grid = cfg.make_grid();
    ObstacleProblemSpec spec{make_obstacle(grid, cfg.obstacle), make_boundary(grid, cfg.boundary),
                             FieldSpec::canonical(cfg.growth_spec()), cfg.solver, cfg.delta_contact};
    spec.validate();
    return spec;
}

int run_classify(const Args& a)
{
    const auto cfg = load(a);
    const YoungPair pair(cfg.growth_spec());
    ClassifyOptions opt;
    opt.eps_c = cfg.analysis.eps_c;
    const auto tail = estimate_tail(pair, opt);
    std::cout << to_string(classify(pair, opt)) << '\n';
    std::cerr << "liminf s^2/G = " << tail.a << ", limsup s^2/G = " << tail.A << '\n';
    return kOk;
}

int run_solve(const Args& a)
{
    const auto cfg = load(a);
    const auto grid = cfg.make_grid();
    const auto data = make_boundary(grid, cfg.boundary);
    const auto sol = solve(data, cfg.solver, FieldSpec::canonical(cfg.growth_spec()));
    write_file(cfg.output, [&](std::ostream& os) { write_field_csv(os, sol.u); });
    std::cout << "output = " << cfg.output << '\n';
    print_report(sol.report);
    return sol.report.converged ? kOk : kFailure;
}

void write_obstacle_csv(const std::string& path, const ScalarField& u, const ObstacleProblemSpec& spec)
{
    const ScalarField r = residual_field(u, effective_field(spec.field, spec.solver));
    std::vector<double> active(u.values().size(), 0.0);
    for (auto idx : contact_set(u, spec.obstacle, spec.delta_contact)) {
        active[idx] = 1.0;
    }
    write_file(path, [&](std::ostream& os) {
        write_node_csv(os, u.grid(), {{"value", u.values()}, {"psi", spec.obstacle.values()},
                                      {"residual", r.values()}, {"active", active}});
    });
}

int run_obstacle(const Args& a)
{
    const auto cfg = load(a);
    const auto spec = obstacle_problem(cfg);
    const auto sol = solve_obstacle(spec);
    write_obstacle_csv(cfg.output, sol.u, spec);
    const auto comp = complementarity(sol.u, spec.obstacle, spec.field, spec.solver, spec.delta_contact);
    std::cout << "output = " << cfg.output << '\n';
    print_report(sol.report);
    std::cout << "complementarity = " << format_double(comp.max_abs_min) << '\n'
              << "offcontact_residual = " << format_double(comp.max_offcontact_residual) << '\n'
              << "contact_nodes = " << comp.contact_nodes << '\n';
    return sol.report.converged ? kOk : kFailure;
}

int run_construct(const Args& a)
{
    const auto cfg = load(a);
    const auto spec = obstacle_problem(cfg);
    const auto family = generate_family(spec.obstacle.grid(), cfg.construction.count,
                                        cfg.construction.min_radius, cfg.construction.seed);
    ConstructionOptions opt;
    opt.sweep_tol = cfg.construction.sweep_tol;
    opt.max_sweeps = cfg.construction.max_sweeps;
    opt.parallel = cfg.construction.parallel;
    const auto res = run_construction(spec.obstacle, spec.boundary, family, spec.field, spec.solver, opt);
    write_file(cfg.output, [&](std::ostream& os) { write_field_csv(os, res.u_star); });
    write_file(cfg.trace, [&](std::ostream& os) {
        os << "sweep,sup_change,max_phi\n";
        for (const auto& row : res.trace) {
            os << row.sweep << ',' << format_double(row.sup_change) << ',' << format_double(row.max_phi) << '\n';
        }
    });
    const auto vi = solve_obstacle(spec);
    const double diff = sup_distance(res.u_star, vi.u);
    std::cout << "output = " << cfg.output << '\n'
              << "trace = " << cfg.trace << '\n'
              << "cylinders = " << family.cylinders.size() << '\n'
              << "covers = " << (family.covers ? "true" : "false") << '\n'
              << "sweeps = " << res.trace.size() << '\n'
              << "converged = " << (res.converged ? "true" : "false") << '\n'
              << "min_increment = " << format_double(res.min_increment) << '\n'
              << "sup_diff_vs_obstacle = " << format_double(diff) << '\n';
    return res.converged && !res.inner_cap_hit && vi.report.converged ? kOk : kFailure;
}

int run_verify(const Args& a)
{
    VerifyOptions opt;
    if (!a.config.empty()) {
        const auto cfg = load(a);
        opt.sigma = cfg.analysis.sigma;
        opt.seed = cfg.analysis.seed;
    }
    Battery battery(opt);
    battery.run_all();
    print_table(std::cout, battery.results());
    const bool ok = battery.all_passed();
    std::cout << (ok ? "all checks passed" : "some checks failed") << '\n';
    return ok ? kOk : kFailure;
}

int run_table(const Args& a)
{
    const auto cfg = load(a);
    const auto& t = cfg.table;
    if (!(t.s_min > 0.0) || !(t.s_max > t.s_min) || t.points < 2) {
        throw ValidationError("table: need 0 < s_min < s_max and points >= 2");
    }
    const YoungPair pair(cfg.growth_spec());
    std::cout << "s,g,G,Gconj,ratio\n";
    const double l0 = std::log10(t.s_min);
    const double l1 = std::log10(t.s_max);
    for (int k = 0; k < t.points; ++k) {
        const double s = std::pow(10.0, l0 + (l1 - l0) * k / (t.points - 1));
        const double G = pair.G(s);
        const double g = pair.growth().g(s);
        std::cout << format_double(s) << ',' << format_double(g) << ',' << format_double(G) << ','
                  << format_double(pair.G_conj(s)) << ',' << format_double(s * g / G) << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Parabolic obstacle problems with Orlicz growth"};
    app.require_subcommand(1);
    Args args;
    const auto add = [&](const std::string& name, const std::string& help, int (*fn)(const Args&)) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", args.config, "INI config file")->check(CLI::ExistingFile);
        sub->add_option("--set", args.overrides, "override section.key=value")->take_all();
        return std::make_pair(sub, fn);
    };
    const std::vector<std::pair<CLI::App*, int (*)(const Args&)>> subs{
        add("classify", "print the growth classification", run_classify),
        add("solve", "solve the unconstrained equation", run_solve),
        add("obstacle", "solve the obstacle problem", run_obstacle),
        add("construct", "run the alternating construction and compare with the obstacle solve", run_construct),
        add("verify", "run the property battery", run_verify),
        add("orlicz-table", "tabulate g, G and the conjugate", run_table),
    };
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    try {
        for (const auto& [sub, fn] : subs) {
            if (sub->parsed()) {
                return fn(args);
            }
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}
