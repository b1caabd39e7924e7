#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ostop/free_boundary.hpp"
#include "ostop/mc.hpp"
#include "ostop/resolvent.hpp"
#include "ostop/sampler.hpp"
#include "ostop/verification.hpp"

namespace py = pybind11;
using namespace ostop;

namespace {

ProcessKind kind_from_name(const std::string& name) {
    if (name == "standard") return ProcessKind::standard();
    if (name == "reflected") return ProcessKind::reflected();
    if (name == "absorbed") return ProcessKind::absorbed();
    throw std::invalid_argument("process must be standard, reflected or absorbed");
}

ExampleId example_from_name(const std::string& name) {
    const auto id = parse_example(name);
    if (!id)
        throw std::invalid_argument(
            "example must be running, stopped, reflected or absorbed");
    return *id;
}

McConfig config_from_kwargs(std::int64_t paths, double dt, double horizon,
                            std::uint64_t seed, bool antithetic, bool bridge,
                            int threads) {
    McConfig cfg;
    cfg.paths = paths;
    cfg.dt = dt;
    cfg.horizon = horizon;
    cfg.seed = seed;
    cfg.antithetic = antithetic;
    cfg.bridge_correction = bridge;
    cfg.threads = threads;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(ostop, m) {
    m.doc() = "optimal stopping of Brownian motion variants: kernels, "
              "resolvents, free boundaries, verification, Monte Carlo";

    py::class_<ThresholdSolution>(m, "ThresholdSolution")
        .def_readonly("alpha", &ThresholdSolution::alpha)
        .def_readonly("u", &ThresholdSolution::u)
        .def_readonly("x0", &ThresholdSolution::x0)
        .def_readonly("residual", &ThresholdSolution::residual)
        .def_readonly("note", &ThresholdSolution::note)
        .def_property_readonly(
            "status",
            [](const ThresholdSolution& s) {
                return std::string(to_string(s.status));
            })
        .def("__repr__", [](const ThresholdSolution& s) {
            return "ThresholdSolution(x0=" + std::to_string(s.x0) +
                   ", status=" + std::string(to_string(s.status)) + ")";
        });

    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("mean", &McEstimate::mean)
        .def_readonly("stderr", &McEstimate::std_error)
        .def_readonly("paths", &McEstimate::paths_used)
        .def_readonly("truncation_bound", &McEstimate::truncation_bound)
        .def("__repr__", [](const McEstimate& e) {
            return "McEstimate(mean=" + std::to_string(e.mean) +
                   ", stderr=" + std::to_string(e.std_error) + ")";
        });

    py::class_<ClosedFormValue>(m, "ClosedFormValue")
        .def("__call__", &ClosedFormValue::operator())
        .def("lower_branch", &ClosedFormValue::lower_branch)
        .def("upper_branch", &ClosedFormValue::upper_branch)
        .def_property_readonly("x0", &ClosedFormValue::threshold)
        .def_property_readonly("alpha", &ClosedFormValue::alpha);

    m.def(
        "transition_density",
        [](const std::string& process, double x, double y, double t) {
            return transition_density(kind_from_name(process), {x, y, t});
        },
        py::arg("process"), py::arg("x"), py::arg("y"), py::arg("t"));

    m.def(
        "survival_probability",
        [](const std::string& process, double x, double t) {
            return survival_probability(kind_from_name(process), x, t);
        },
        py::arg("process"), py::arg("x"), py::arg("t"));

    m.def(
        "sample_path",
        [](const std::string& process, double x0, double dt, double horizon,
           std::uint64_t seed, std::uint64_t stream, bool bridge) {
            RngStream rng(seed, stream);
            SamplerOptions options;
            options.bridge_correction = bridge;
            const auto path =
                sample_path(kind_from_name(process), x0, dt, horizon, rng, options);
            return py::make_tuple(path.times, path.states, path.absorbed,
                                  path.absorption_time);
        },
        py::arg("process"), py::arg("x0"), py::arg("dt"), py::arg("horizon"),
        py::arg("seed") = 12345, py::arg("stream") = 0,
        py::arg("bridge") = true,
        "returns (times, states, absorbed, absorption_time)");

    m.def(
        "solve_threshold",
        [](const std::string& example, double alpha, double tol) {
            return solve_threshold(example_from_name(example),
                                   DiscountRate(alpha), tol);
        },
        py::arg("example"), py::arg("alpha"), py::arg("tol") = 1e-12);

    m.def(
        "threshold_ordering",
        [](double alpha) {
            const auto t = threshold_ordering(DiscountRate(alpha));
            return py::make_tuple(t.absorbed, t.standard, t.reflected);
        },
        py::arg("alpha"), "returns (x0_absorbed, x0_standard, x0_reflected)");

    m.def(
        "closed_form_value",
        [](const std::string& example, double alpha,
           std::optional<double> x0) {
            const auto id = example_from_name(example);
            const DiscountRate rate(alpha);
            const double threshold =
                x0 ? *x0 : solve_threshold(id, rate).x0;
            return ClosedFormValue(id, rate, threshold);
        },
        py::arg("example"), py::arg("alpha"), py::arg("x0") = std::nullopt);

    m.def(
        "resolvent_numeric",
        [](const std::string& example, double alpha, double x,
           std::optional<double> x0, double rel_tol) {
            const auto id = example_from_name(example);
            const DiscountRate rate(alpha);
            const double threshold = x0 ? *x0 : solve_threshold(id, rate).x0;
            ResolventOptions options;
            options.rel_tol = rel_tol;
            return resolvent_numeric(example_process(id), rate,
                                     make_psi(id, rate, threshold), x, options);
        },
        py::arg("example"), py::arg("alpha"), py::arg("x"),
        py::arg("x0") = std::nullopt, py::arg("rel_tol") = 1e-8,
        "quadrature resolvent of the example's psi");

    m.def(
        "erf_laplace",
        [](double alpha, double q) {
            const DiscountRate rate(alpha);
            return py::make_tuple(erf_laplace_quadrature(rate, q),
                                  erf_laplace_closed_form(rate, q));
        },
        py::arg("alpha"), py::arg("q"), "returns (quadrature lhs, closed rhs)");

    m.def(
        "verify_example",
        [](const std::string& example, double alpha, std::optional<double> x0,
           int grid_n, double tol, double deriv_tol) {
            const auto id = example_from_name(example);
            const DiscountRate rate(alpha);
            const double threshold = x0 ? *x0 : solve_threshold(id, rate).x0;
            const auto candidate = make_example_candidate(id, rate, threshold);
            const auto grid = default_grid(id, rate, threshold, grid_n);
            const auto report =
                check_conditions(candidate, grid, tol, deriv_tol);
            py::dict out;
            out["all_pass"] = report.all_pass();
            out["value_geq_terminal"] = report.value_dominates_terminal.pass;
            out["psi_geq_running"] = report.psi_dominates_running.pass;
            out["psi_eq_running_on_region"] =
                report.psi_matches_running_on_region.pass;
            out["continuity"] = report.continuity_pass;
            out["smooth_pasting"] = report.smooth_pasting_pass;
            out["worst_jump"] = report.worst_jump;
            out["worst_derivative_gap"] = report.worst_derivative_gap;
            if (report.region.threshold)
                out["threshold"] = *report.region.threshold;
            return out;
        },
        py::arg("example"), py::arg("alpha"), py::arg("x0") = std::nullopt,
        py::arg("grid_n") = 201, py::arg("tol") = 1e-6,
        py::arg("deriv_tol") = 1e-4);

    m.def(
        "estimate_value",
        [](const std::string& example, double alpha, double x,
           std::optional<double> x0, std::int64_t paths, double dt,
           double horizon, std::uint64_t seed, bool antithetic, bool bridge,
           int threads) {
            const auto id = example_from_name(example);
            const DiscountRate rate(alpha);
            const double threshold = x0 ? *x0 : solve_threshold(id, rate).x0;
            return estimate_value(
                make_problem(id, rate), threshold_rule(id, threshold), x,
                config_from_kwargs(paths, dt, horizon, seed, antithetic,
                                   bridge, threads));
        },
        py::arg("example"), py::arg("alpha"), py::arg("x"),
        py::arg("x0") = std::nullopt, py::arg("paths") = 100000,
        py::arg("dt") = 1e-3, py::arg("horizon") = 0.0,
        py::arg("seed") = 12345, py::arg("antithetic") = false,
        py::arg("bridge") = true, py::arg("threads") = 0);

    m.def(
        "threshold_sweep",
        [](const std::string& example, double alpha, double x,
           const std::vector<double>& thresholds, std::int64_t paths,
           double dt, double horizon, std::uint64_t seed, bool antithetic,
           bool bridge, int threads) {
            const auto id = example_from_name(example);
            const DiscountRate rate(alpha);
            const auto sweep = threshold_sweep(
                make_problem(id, rate), stopping_side(id), thresholds, x,
                config_from_kwargs(paths, dt, horizon, seed, antithetic,
                                   bridge, threads));
            py::list points;
            for (const auto& p : sweep.points)
                points.append(py::make_tuple(p.threshold, p.estimate.mean,
                                             p.estimate.std_error));
            py::dict out;
            out["points"] = points;
            out["argmax_threshold"] =
                sweep.points[sweep.argmax_index].threshold;
            out["argmax_gap_z"] = sweep.argmax_gap_z;
            return out;
        },
        py::arg("example"), py::arg("alpha"), py::arg("x"),
        py::arg("thresholds"), py::arg("paths") = 50000, py::arg("dt") = 1e-3,
        py::arg("horizon") = 0.0, py::arg("seed") = 12345,
        py::arg("antithetic") = false, py::arg("bridge") = true,
        py::arg("threads") = 0);

    m.def(
        "identity_residual",
        [](const std::string& example, double alpha, double x, double fixed_t,
           std::int64_t paths, double dt, std::uint64_t seed) {
            const auto id = example_from_name(example);
            const DiscountRate rate(alpha);
            const double x0 = solve_threshold(id, rate).x0;
            ClosedFormValue value(id, rate, x0);
            McConfig cfg;
            cfg.paths = paths;
            cfg.dt = dt;
            cfg.seed = seed;
            return discounted_identity_residual(
                example_process(id), make_psi(id, rate, x0), rate,
                [value](double s) { return value(s); }, x,
                TauSpec::fixed_time(fixed_t), cfg);
        },
        py::arg("example"), py::arg("alpha"), py::arg("x"),
        py::arg("fixed_t") = 1.0, py::arg("paths") = 20000,
        py::arg("dt") = 1e-3, py::arg("seed") = 12345,
        "Monte Carlo residual of the resolvent identity at a fixed time");
}
