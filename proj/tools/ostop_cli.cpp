// ostop command line: solve thresholds, verify candidate value
// functions, simulate threshold rules, sweep thresholds, tabulate the
// boundaries across discount rates, and test the resolvent identity.
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 numerical
// failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ostop/serialize.hpp"

using nlohmann::json;
using namespace ostop;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct McFlags {
    std::int64_t paths = 100000;
    double dt = 1e-3;
    double horizon = 0.0;
    std::uint64_t seed = 12345;
    bool antithetic = false;
    bool no_bridge = false;
    int threads = 0;

    McConfig config() const {
        McConfig cfg;
        cfg.paths = paths;
        cfg.dt = dt;
        cfg.horizon = horizon;
        cfg.seed = seed;
        cfg.antithetic = antithetic;
        cfg.bridge_correction = !no_bridge;
        cfg.threads = threads;
        return cfg;
    }
};

void add_mc_flags(CLI::App* cmd, McFlags& flags) {
    cmd->add_option("--paths", flags.paths, "Monte Carlo paths")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--dt", flags.dt, "time step")->check(CLI::PositiveNumber);
    cmd->add_option("--horizon", flags.horizon,
                    "truncation time (default 40/alpha)");
    cmd->add_option("--seed", flags.seed, "random seed");
    cmd->add_flag("--antithetic", flags.antithetic, "antithetic variates");
    cmd->add_flag("--no-bridge", flags.no_bridge,
                  "disable the bridge crossing correction");
    cmd->add_option("--threads", flags.threads,
                    "worker threads (0 = hardware)");
}

ExampleId require_example(const std::string& name) {
    const auto id = parse_example(name);
    if (!id)
        throw CLI::ValidationError(
            "--example must be one of running, stopped, reflected, absorbed");
    return *id;
}

std::vector<double> parse_range(const std::string& spec) {
    // a:b:n inclusive range
    double a = 0, b = 0;
    long n = 0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%ld%c", &a, &b, &n, &extra) != 3 ||
        n < 2 || !(b > a))
        throw CLI::ValidationError(
            "--thresholds expects a:b:n with b > a and n >= 2");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return out;
}

std::vector<double> parse_list(const std::string& spec) {
    std::vector<double> out;
    std::stringstream stream(spec);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw CLI::ValidationError("empty list");
    return out;
}

void emit(const json& j, const std::string& format) {
    if (format == "json") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    throw CLI::ValidationError("unsupported format for this subcommand");
}

void write_curve(const std::string& path,
                 const std::vector<std::pair<double, double>>& points) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& [x, y] : points)
        out << fmt(x) << " " << fmt(y) << "\n";
    std::cout << path << "\n";
}

// ---------------------------------------------------------------- solve

int run_solve(const std::string& example, double alpha, double tol,
              const std::string& format) {
    const auto sol = solve_threshold(require_example(example),
                                     DiscountRate(alpha), tol);
    if (format == "csv") {
        std::cout << "example,alpha,u,x0,status,residual,note\n";
        std::cout << to_string(sol.example) << "," << fmt(sol.alpha) << ","
                  << fmt(sol.u) << "," << fmt(sol.x0) << ","
                  << to_string(sol.status) << "," << fmt(sol.residual) << ",\""
                  << sol.note << "\"\n";
    } else {
        emit(json(sol), format);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- verify

int run_verify(const std::string& example, double alpha,
               std::optional<double> x0_override, double grid_min,
               double grid_max, int grid_n, bool grid_given, double tol,
               double deriv_tol, bool numeric_value, long max_evals,
               double fd_step, std::int64_t ui_paths, const McFlags& mc,
               const std::string& format, const std::string& output) {
    const ExampleId id = require_example(example);
    const DiscountRate rate(alpha);
    const double x0 =
        x0_override ? *x0_override : solve_threshold(id, rate).x0;

    auto candidate = make_example_candidate(id, rate, x0);
    if (numeric_value) {
        const auto psi = candidate.psi;
        const auto kind = candidate.problem.kind;
        ResolventOptions opts;
        opts.rel_tol = 1e-10;
        opts.max_evaluations = max_evals;
        candidate.value = [=](double x) {
            return resolvent_numeric(kind, rate, psi, x, opts);
        };
    }

    std::vector<double> grid;
    if (grid_given) {
        if (!(grid_max > grid_min) || grid_n < 7)
            throw CLI::ValidationError("bad grid specification");
        grid.resize(static_cast<std::size_t>(grid_n));
        for (int i = 0; i < grid_n; ++i)
            grid[static_cast<std::size_t>(i)] =
                grid_min + (grid_max - grid_min) * i / (grid_n - 1);
    } else {
        grid = default_grid(id, rate, x0, grid_n);
    }

    const auto report = check_conditions(candidate, grid, tol, deriv_tol,
                                         numeric_value ? 3e-5 : fd_step);

    json j = report;
    j["example"] = to_string(id);
    j["alpha"] = alpha;
    j["x0"] = x0;
    if (ui_paths > 0) {
        auto cfg = mc.config();
        cfg.paths = ui_paths;
        cfg.horizon = cfg.horizon > 0.0 ? cfg.horizon : 40.0 / alpha;
        const double levels[] = {0.25, 0.5, 1.0, 2.0, 4.0};
        // Probe from inside the continuation region when there is one;
        // a start the rule stops immediately makes the tails trivial.
        double ui_start = 0.5 * (grid.front() + grid.back());
        if (!report.region.intervals.empty()) {
            const auto& interval = report.region.intervals.front();
            ui_start = 0.5 * (interval.lo + interval.hi);
        }
        const auto tails = uniform_integrability_proxy(
            candidate.problem.kind, candidate.value,
            stopping_rule(report.region), ui_start, levels, cfg);
        json tail_json = json::array();
        for (const auto& t : tails)
            tail_json.push_back(
                {{"level", t.level}, {"worst_tail", t.worst_tail}});
        j["uniform_integrability"] = tail_json;
    }

    if (format == "plot-data") {
        std::vector<std::pair<double, double>> continuation, stopping, gaps;
        for (double x : grid) {
            const double v = candidate.value(x);
            const double g = candidate.problem.terminal(x);
            (report.region.contains(x) ? continuation : stopping)
                .emplace_back(x, v);
            gaps.emplace_back(x, v - g);
        }
        write_curve(output + "_value_continuation.dat", continuation);
        write_curve(output + "_value_stopping.dat", stopping);
        write_curve(output + "_gap.dat", gaps);
    } else if (format == "csv") {
        std::cout << "check,pass,worst\n";
        std::cout << "value_geq_terminal," << report.value_dominates_terminal.pass
                  << "," << fmt(report.value_dominates_terminal.worst) << "\n";
        std::cout << "psi_geq_running," << report.psi_dominates_running.pass
                  << "," << fmt(report.psi_dominates_running.worst) << "\n";
        std::cout << "psi_eq_running_on_region,"
                  << report.psi_matches_running_on_region.pass << ","
                  << fmt(report.psi_matches_running_on_region.worst) << "\n";
        std::cout << "continuity," << report.continuity_pass << ","
                  << fmt(report.worst_jump) << "\n";
        std::cout << "smooth_pasting," << report.smooth_pasting_pass << ","
                  << fmt(report.worst_derivative_gap) << "\n";
    } else {
        emit(j, format);
    }

    if (!report.all_pass()) {
        std::cerr << "verification failed:";
        if (!report.value_dominates_terminal.pass)
            std::cerr << " value_geq_terminal margin "
                      << fmt(report.value_dominates_terminal.worst);
        if (!report.psi_dominates_running.pass)
            std::cerr << " psi_geq_running margin "
                      << fmt(report.psi_dominates_running.worst);
        if (!report.psi_matches_running_on_region.pass)
            std::cerr << " psi_eq_running_on_region gap "
                      << fmt(report.psi_matches_running_on_region.worst);
        if (!report.continuity_pass)
            std::cerr << " jump " << fmt(report.worst_jump);
        if (!report.smooth_pasting_pass)
            std::cerr << " derivative_gap " << fmt(report.worst_derivative_gap);
        std::cerr << "\n";
        return kExitCheckFailure;
    }
    return kExitOk;
}

// -------------------------------------------------------------- simulate

int run_simulate(const std::string& example, double alpha,
                 std::optional<double> x0_override, double start,
                 const McFlags& mc, const std::string& format) {
    const ExampleId id = require_example(example);
    const DiscountRate rate(alpha);
    const double x0 =
        x0_override ? *x0_override : solve_threshold(id, rate).x0;
    const auto problem = make_problem(id, rate);
    const auto estimate =
        estimate_value(problem, threshold_rule(id, x0), start, mc.config());

    if (format == "csv") {
        std::cout << "example,alpha,x0,start,mean,stderr,paths,truncation_bound\n";
        std::cout << to_string(id) << "," << fmt(alpha) << "," << fmt(x0) << ","
                  << fmt(start) << "," << fmt(estimate.mean) << ","
                  << fmt(estimate.std_error) << "," << estimate.paths_used
                  << "," << fmt(estimate.truncation_bound) << "\n";
    } else {
        json j;
        j["example"] = to_string(id);
        j["alpha"] = alpha;
        j["x0"] = x0;
        j["start"] = start;
        j["estimate"] = estimate;
        emit(j, format);
    }
    return kExitOk;
}

// ----------------------------------------------------------------- sweep

int run_sweep(const std::string& example, double alpha,
              const std::string& thresholds_spec, double start,
              const McFlags& mc, const std::string& format,
              const std::string& output) {
    const ExampleId id = require_example(example);
    const DiscountRate rate(alpha);
    const auto thresholds = parse_range(thresholds_spec);
    const auto problem = make_problem(id, rate);
    const auto sweep = threshold_sweep(problem, stopping_side(id), thresholds,
                                       start, mc.config());

    if (format == "csv") {
        std::cout << "threshold,mean,stderr\n";
        for (const auto& p : sweep.points)
            std::cout << fmt(p.threshold) << "," << fmt(p.estimate.mean) << ","
                      << fmt(p.estimate.std_error) << "\n";
        std::cout << "# argmax," << fmt(sweep.points[sweep.argmax_index].threshold)
                  << ",gap_z=" << fmt(sweep.argmax_gap_z) << "\n";
    } else if (format == "plot-data") {
        std::vector<std::pair<double, double>> means, errors;
        for (const auto& p : sweep.points) {
            means.emplace_back(p.threshold, p.estimate.mean);
            errors.emplace_back(p.threshold, p.estimate.std_error);
        }
        write_curve(output + "_sweep_mean.dat", means);
        write_curve(output + "_sweep_stderr.dat", errors);
    } else {
        json j = sweep;
        j["example"] = to_string(id);
        j["alpha"] = alpha;
        j["start"] = start;
        j["argmax_threshold"] = sweep.points[sweep.argmax_index].threshold;
        emit(j, format);
    }
    return kExitOk;
}

// ----------------------------------------------------------------- table

int run_table(const std::string& alphas_spec, const std::string& format) {
    const auto alphas = parse_list(alphas_spec);
    bool all_ordered = true;
    json rows = json::array();
    std::ostringstream csv;
    csv << "alpha,x0_running,x0_stopped,x0_reflected,x0_absorbed,"
           "reflected_over_stopped,ordering_ok\n";
    for (double a : alphas) {
        const DiscountRate rate(a);
        const double running = solve_threshold(ExampleId::LinearRunning, rate).x0;
        const auto triple = threshold_ordering(rate);
        const bool ordered =
            triple.absorbed < triple.standard && triple.standard < triple.reflected;
        all_ordered = all_ordered && ordered;
        const double ratio = triple.reflected / triple.standard;
        csv << fmt(a) << "," << fmt(running) << "," << fmt(triple.standard)
            << "," << fmt(triple.reflected) << "," << fmt(triple.absorbed)
            << "," << fmt(ratio) << "," << (ordered ? "true" : "false") << "\n";
        rows.push_back({{"alpha", a},
                        {"x0_running", running},
                        {"x0_stopped", triple.standard},
                        {"x0_reflected", triple.reflected},
                        {"x0_absorbed", triple.absorbed},
                        {"reflected_over_stopped", ratio},
                        {"ordering_ok", ordered}});
    }
    if (format == "json") {
        emit(json{{"rows", rows}, {"all_ordering_ok", all_ordered}}, format);
    } else {
        std::cout << csv.str();
    }
    if (!all_ordered) {
        std::cerr << "threshold ordering violated\n";
        return kExitCheckFailure;
    }
    return kExitOk;
}

// -------------------------------------------------------------- identity

int run_identity(double alpha, const McFlags& mc, const std::string& format) {
    const DiscountRate rate(alpha);
    struct Case {
        std::string name;
        McEstimate estimate;
        bool pass;
    };
    std::vector<Case> cases;

    const auto run_case = [&](const std::string& name, ProcessKind kind,
                              const PiecewiseFunction& psi,
                              const std::function<double(double)>& value,
                              double start, const TauSpec& tau) {
        const auto estimate = discounted_identity_residual(
            kind, psi, rate, value, start, tau, mc.config());
        const bool pass =
            std::fabs(estimate.mean) <= 3.0 * estimate.std_error;
        cases.push_back({name, estimate, pass});
    };

    {
        const double x0 = solve_threshold(ExampleId::LinearStopped, rate).x0;
        const ClosedFormValue v(ExampleId::LinearStopped, rate, x0);
        run_case("standard_exit_interval", ProcessKind::standard(),
                 make_psi(ExampleId::LinearStopped, rate, x0),
                 [v](double x) { return v(x); }, 0.0,
                 TauSpec::exit_interval(-2.0 / std::sqrt(2.0 * alpha),
                                        2.0 / std::sqrt(2.0 * alpha)));
    }
    {
        const double x0 = solve_threshold(ExampleId::Reflected, rate).x0;
        const ClosedFormValue v(ExampleId::Reflected, rate, x0);
        run_case("reflected_fixed_time", ProcessKind::reflected(),
                 make_psi(ExampleId::Reflected, rate, x0),
                 [v](double x) { return v(x); }, 0.5 / std::sqrt(2.0 * alpha),
                 TauSpec::fixed_time(1.0 / alpha));
    }
    {
        run_case("absorbed_fixed_time", ProcessKind::absorbed(),
                 make_psi(ExampleId::Absorbed, rate, 0.0),
                 [](double x) { return x; }, 1.0 / std::sqrt(2.0 * alpha),
                 TauSpec::fixed_time(1.0 / alpha));
    }

    bool all_pass = true;
    json rows = json::array();
    for (const auto& c : cases) {
        all_pass = all_pass && c.pass;
        rows.push_back({{"case", c.name},
                        {"residual", c.estimate},
                        {"pass", c.pass}});
    }
    if (format == "csv") {
        std::cout << "case,mean,stderr,paths,pass\n";
        for (const auto& c : cases)
            std::cout << c.name << "," << fmt(c.estimate.mean) << ","
                      << fmt(c.estimate.std_error) << "," << c.estimate.paths_used
                      << "," << (c.pass ? "true" : "false") << "\n";
    } else {
        emit(json{{"alpha", alpha}, {"cases", rows}, {"all_pass", all_pass}},
             format);
    }
    if (!all_pass) {
        for (const auto& c : cases)
            if (!c.pass)
                std::cerr << c.name << " residual " << fmt(c.estimate.mean)
                          << " exceeds 3 x stderr "
                          << fmt(3.0 * c.estimate.std_error) << "\n";
        return kExitCheckFailure;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal stopping of Brownian motion variants: thresholds, "
                 "value functions, verification, Monte Carlo"};
    app.require_subcommand(1);

    std::string example, format = "json", output = "curves";
    double alpha = 1.0;

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve the free boundary");
    double solve_tol = 1e-12;
    solve_cmd->add_option("--example", example, "problem name")->required();
    solve_cmd->add_option("--alpha", alpha, "discount rate")
        ->required()
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--tol", solve_tol, "root tolerance")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--format", format, "json or csv");

    // verify
    auto* verify_cmd =
        app.add_subcommand("verify", "check the optimality conditions");
    std::optional<double> x0_override;
    double grid_min = 0.0, grid_max = 0.0, tol = 1e-6, deriv_tol = 1e-4;
    double fd_step = 1e-6;
    int grid_n = 201;
    bool numeric_value = false;
    long max_evals = 1'000'000;
    std::int64_t ui_paths = 0;
    McFlags verify_mc;
    verify_cmd->add_option("--example", example)->required();
    verify_cmd->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    verify_cmd->add_option("--x0", x0_override,
                           "threshold override (default: solved)");
    auto* gmin = verify_cmd->add_option("--grid-min", grid_min);
    auto* gmax = verify_cmd->add_option("--grid-max", grid_max);
    verify_cmd->add_option("--grid-n", grid_n)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--tol", tol, "value tolerance")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--deriv-tol", deriv_tol, "derivative tolerance")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--fd-step", fd_step, "difference step")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_flag("--numeric-value", numeric_value,
                         "back the candidate by quadrature instead of the "
                         "closed form");
    verify_cmd->add_option("--max-evals", max_evals,
                           "quadrature evaluation budget");
    verify_cmd->add_option("--ui-paths", ui_paths,
                           "paths for the uniform-integrability probe "
                           "(0 = skip)");
    add_mc_flags(verify_cmd, verify_mc);
    verify_cmd->add_option("--format", format, "json, csv or plot-data");
    verify_cmd->add_option("--output", output, "plot-data file prefix");

    // simulate
    auto* sim_cmd =
        app.add_subcommand("simulate", "Monte Carlo value of a threshold rule");
    double start = 0.0;
    McFlags sim_mc;
    sim_cmd->add_option("--example", example)->required();
    sim_cmd->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    sim_cmd->add_option("--x0", x0_override, "threshold (default: solved)");
    sim_cmd->add_option("--x", start, "start state")->required();
    add_mc_flags(sim_cmd, sim_mc);
    sim_cmd->add_option("--format", format, "json or csv");

    // sweep
    auto* sweep_cmd =
        app.add_subcommand("sweep", "Monte Carlo sweep over thresholds");
    std::string thresholds_spec;
    McFlags sweep_mc;
    sweep_cmd->add_option("--example", example)->required();
    sweep_cmd->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--thresholds", thresholds_spec, "a:b:n")->required();
    sweep_cmd->add_option("--x", start, "start state")->required();
    add_mc_flags(sweep_cmd, sweep_mc);
    sweep_cmd->add_option("--format", format, "json, csv or plot-data");
    sweep_cmd->add_option("--output", output, "plot-data file prefix");

    // table
    auto* table_cmd = app.add_subcommand(
        "table", "thresholds for several discount rates, with ordering");
    std::string alphas_spec = "0.25,0.5,1,2";
    std::string table_format = "csv";
    table_cmd->add_option("--alphas", alphas_spec, "comma separated rates");
    table_cmd->add_option("--format", table_format, "csv or json");

    // identity
    auto* id_cmd = app.add_subcommand(
        "identity", "Monte Carlo residuals of the resolvent identity");
    McFlags id_mc;
    id_cmd->add_option("--alpha", alpha)->check(CLI::PositiveNumber);
    add_mc_flags(id_cmd, id_mc);
    id_cmd->add_option("--format", format, "json or csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve_cmd->parsed())
            return run_solve(example, alpha, solve_tol, format);
        if (verify_cmd->parsed())
            return run_verify(example, alpha, x0_override, grid_min, grid_max,
                              grid_n, gmin->count() > 0 && gmax->count() > 0,
                              tol, deriv_tol, numeric_value, max_evals, fd_step,
                              ui_paths, verify_mc, format, output);
        if (sim_cmd->parsed())
            return run_simulate(example, alpha, x0_override, start, sim_mc,
                                format);
        if (sweep_cmd->parsed())
            return run_sweep(example, alpha, thresholds_spec, start, sweep_mc,
                             format, output);
        if (table_cmd->parsed()) return run_table(alphas_spec, table_format);
        if (id_cmd->parsed()) return run_identity(alpha, id_mc, format);
    } catch (const NumericalFailure& failure) {
        std::cerr << "numerical failure: " << failure.what()
                  << " (achieved error " << fmt(failure.achieved_error())
                  << ")\n";
        return kExitNumerical;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
