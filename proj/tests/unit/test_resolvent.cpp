#include <doctest.h>

#include <cmath>

#include "ostop/free_boundary.hpp"
#include "ostop/problems.hpp"
#include "ostop/resolvent.hpp"

using namespace ostop;

namespace {

// One-sided difference quotients right at the threshold.
std::pair<double, double> one_sided_derivatives(const ClosedFormValue& v) {
    const double x0 = v.threshold();
    const double h = 1e-6;
    const double left = (v.lower_branch(x0) - v.lower_branch(x0 - h)) / h;
    const double right = (v.upper_branch(x0 + h) - v.upper_branch(x0)) / h;
    return {left, right};
}

}  // namespace

TEST_CASE("resolvent: R_alpha 1 = 1/alpha for conservative kinds") {
    const PiecewiseFunction one = PiecewiseFunction::constant(1.0);
    for (double a : {0.25, 1.0, 2.0}) {
        for (double x : {-1.0, 0.0, 2.0}) {
            const double r = resolvent_numeric(ProcessKind::standard(),
                                               DiscountRate(a), one, x);
            CHECK(r == doctest::Approx(1.0 / a).epsilon(1e-8));
        }
        const double r = resolvent_numeric(ProcessKind::reflected(),
                                           DiscountRate(a), one, 0.7);
        CHECK(r == doctest::Approx(1.0 / a).epsilon(1e-8));
    }
}

TEST_CASE("resolvent: absorbed R_alpha 1 = (1 - e^{-gamma x})/alpha") {
    const PiecewiseFunction one = PiecewiseFunction::constant(1.0);
    const double r = resolvent_numeric(ProcessKind::absorbed(),
                                       DiscountRate(0.5), one, 1.0);
    CHECK(r == doctest::Approx(1.2642411176571154).epsilon(1e-8));

    // Brute-force oracle through the survival probability:
    // integral_0^inf e^{-alpha t} erf(x / sqrt(2t)) dt, via t = s^2.
    const auto oracle = [](double alpha, double x) {
        quadrature::Options opt;
        opt.rel_tol = 1e-12;
        const auto q = quadrature::integrate(
            [&](double s) {
                return 2.0 * s * std::exp(-alpha * s * s) *
                       survival_probability(ProcessKind::absorbed(), x, s * s);
            },
            1e-12, std::sqrt(60.0 / alpha), opt);
        REQUIRE(q.converged);
        return q.value;
    };
    CHECK(r == doctest::Approx(oracle(0.5, 1.0)).epsilon(1e-8));

    const double r2 = resolvent_numeric(ProcessKind::absorbed(),
                                        DiscountRate(1.0), one, 0.5);
    const double gamma = std::sqrt(2.0);
    CHECK(r2 == doctest::Approx((1.0 - std::exp(-gamma * 0.5))).epsilon(1e-8));
    CHECK(r2 == doctest::Approx(oracle(1.0, 0.5)).epsilon(1e-8));
}

TEST_CASE("resolvent: running-payoff example value at the origin") {
    // psi(y) = y 1_{y > -1}, alpha = 0.5: the closed form gives 2/e.
    const auto psi = make_psi(ExampleId::LinearRunning, DiscountRate(0.5), -1.0);
    const double r = resolvent_numeric(ProcessKind::standard(),
                                       DiscountRate(0.5), psi, 0.0);
    CHECK(r == doctest::Approx(0.7357588823428847).epsilon(1e-7));
}

TEST_CASE("resolvent: closed-form reference values") {
    const ClosedFormValue stopped(ExampleId::LinearStopped, DiscountRate(0.5),
                                  1.0);
    CHECK(stopped(0.0) == doctest::Approx(0.36787944117144233).epsilon(1e-12));
    CHECK(stopped(1.0) == 1.0);

    const double u = solve_threshold(ExampleId::Reflected, DiscountRate(0.5)).x0;
    const ClosedFormValue reflected(ExampleId::Reflected, DiscountRate(0.5), u);
    CHECK(reflected(0.0) == doctest::Approx(0.66274341934918158).epsilon(1e-9));
}

TEST_CASE("resolvent: closed forms admissibility") {
    CHECK_THROWS_AS(ClosedFormValue(ExampleId::LinearRunning, DiscountRate(1), 0.5),
                    std::domain_error);
    CHECK_THROWS_AS(ClosedFormValue(ExampleId::LinearStopped, DiscountRate(1), -2.0),
                    std::domain_error);
    CHECK_THROWS_AS(ClosedFormValue(ExampleId::Reflected, DiscountRate(1), 0.0),
                    std::domain_error);
    CHECK_NOTHROW(ClosedFormValue(ExampleId::Absorbed, DiscountRate(1), 0.0));
    const ClosedFormValue reflected(ExampleId::Reflected, DiscountRate(1), 1.0);
    CHECK_THROWS_AS(reflected(-0.5), std::domain_error);
}

TEST_CASE("resolvent: branches paste continuously at solved thresholds") {
    for (double a : {0.25, 0.5, 1.0, 2.0}) {
        const DiscountRate alpha(a);
        for (ExampleId id : {ExampleId::LinearRunning, ExampleId::LinearStopped,
                             ExampleId::Reflected}) {
            const double x0 = solve_threshold(id, alpha).x0;
            const ClosedFormValue v(id, alpha, x0);
            CHECK(std::fabs(v.lower_branch(x0) - v.upper_branch(x0)) < 1e-12);
        }
    }
}

TEST_CASE("resolvent: smooth pasting at solved thresholds") {
    for (double a : {0.25, 0.5, 1.0, 2.0}) {
        const DiscountRate alpha(a);
        for (ExampleId id : {ExampleId::LinearRunning, ExampleId::LinearStopped,
                             ExampleId::Reflected}) {
            const double x0 = solve_threshold(id, alpha).x0;
            const ClosedFormValue v(id, alpha, x0);
            const auto [left, right] = one_sided_derivatives(v);
            CHECK(std::fabs(left - right) < 1e-4);
        }
    }
}

TEST_CASE("resolvent: quadrature matches the closed forms") {
    // Narrow version of the acceptance sweep: alpha = 0.5, 11 points.
    const DiscountRate alpha(0.5);
    for (ExampleId id : {ExampleId::LinearRunning, ExampleId::LinearStopped,
                         ExampleId::Reflected, ExampleId::Absorbed}) {
        const double x0 = solve_threshold(id, alpha).x0;
        const ClosedFormValue closed(id, alpha, x0);
        const auto psi = make_psi(id, alpha, x0);
        const ProcessKind kind = example_process(id);
        const double margin = 2.5 / std::sqrt(2.0 * alpha.value);
        const double lo = std::max(x0 - margin, kind.state_lower_bound());
        const double hi = x0 + margin;
        for (int i = 0; i <= 10; ++i) {
            const double x = lo + (hi - lo) * i / 10.0;
            const double numeric = resolvent_numeric(kind, alpha, psi, x);
            const double exact = closed(x);
            CHECK(std::fabs(numeric - exact) /
                      std::max(1.0, std::fabs(exact)) <
                  1e-6);
        }
    }
}

TEST_CASE("resolvent: linearity") {
    // a psi1 + b psi2 with psi1 the stopped-payoff psi and psi2 == 1.
    const DiscountRate alpha(0.5);
    const double a = 2.0, b = -0.7;
    const auto psi1 = make_psi(ExampleId::LinearStopped, alpha, 1.0);
    const auto psi2 = PiecewiseFunction::constant(1.0);
    const PiecewiseFunction combo(
        {1.0}, {[b](double) { return b; },
                [&, a, b](double x) { return a * 0.5 * x + b; }});
    for (double x : {-0.5, 0.8, 1.5}) {
        const auto kind = ProcessKind::standard();
        const double lhs = resolvent_numeric(kind, alpha, combo, x);
        const double rhs = a * resolvent_numeric(kind, alpha, psi1, x) +
                           b * resolvent_numeric(kind, alpha, psi2, x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
    }
}

TEST_CASE("resolvent: erf-Laplace identity") {
    CHECK(erf_laplace_closed_form(DiscountRate(1.0), 0.0) == 1.0);
    CHECK(erf_laplace_quadrature(DiscountRate(1.0), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(erf_laplace_quadrature(DiscountRate(1.0), 1.0) ==
          doctest::Approx(0.36787944117144233).epsilon(1e-9));

    // q = sqrt(2) (x - x0) turns the right-hand side into
    // e^{-sqrt(2 alpha) (x - x0)} / alpha.
    const double alpha = 0.5, delta = 0.7;
    const double q = std::sqrt(2.0) * delta;
    CHECK(erf_laplace_closed_form(DiscountRate(alpha), q) ==
          doctest::Approx(std::exp(-std::sqrt(2.0 * alpha) * delta) / alpha)
              .epsilon(1e-14));

    for (double a : {0.25, 0.5, 1.0, 2.0, 4.0})
        for (double qq : {0.0, 0.3, 1.0, 2.0, 4.0})
            CHECK(std::fabs(erf_laplace_quadrature(DiscountRate(a), qq) -
                            erf_laplace_closed_form(DiscountRate(a), qq)) <
                  1e-8);

    CHECK_THROWS_AS(erf_laplace_closed_form(DiscountRate(1.0), -0.5),
                    std::domain_error);
}

TEST_CASE("resolvent: equation residual on smooth branches") {
    const DiscountRate alpha(0.5);
    const ClosedFormValue stopped(ExampleId::LinearStopped, alpha, 1.0);
    const auto psi_stopped = make_psi(ExampleId::LinearStopped, alpha, 1.0);
    CHECK(std::fabs(resolvent_equation_residual(stopped, psi_stopped, 0.5,
                                                1e-3)) < 1e-5);
    CHECK(std::fabs(resolvent_equation_residual(stopped, psi_stopped, 2.0,
                                                1e-3)) < 1e-5);

    const ClosedFormValue running(ExampleId::LinearRunning, alpha, -1.0);
    const auto psi_running = make_psi(ExampleId::LinearRunning, alpha, -1.0);
    CHECK(std::fabs(resolvent_equation_residual(running, psi_running, 0.5,
                                                1e-3)) < 1e-5);

    CHECK_THROWS_AS(
        resolvent_equation_residual(stopped, psi_stopped, 1.0, 1e-3),
        std::domain_error);
    CHECK_THROWS_AS(
        resolvent_equation_residual(stopped, psi_stopped, 1.0005, 1e-3),
        std::domain_error);
    const double u = solve_threshold(ExampleId::Reflected, alpha).x0;
    const ClosedFormValue reflected(ExampleId::Reflected, alpha, u);
    const auto psi_reflected = make_psi(ExampleId::Reflected, alpha, u);
    CHECK_THROWS_AS(
        resolvent_equation_residual(reflected, psi_reflected, 1e-4, 1e-3),
        std::domain_error);
}

TEST_CASE("resolvent: numerical failure carries diagnostics") {
    const auto psi = make_psi(ExampleId::LinearStopped, DiscountRate(0.5), 1.0);
    ResolventOptions opts;
    opts.max_evaluations = 100;
    CHECK_THROWS_AS(resolvent_numeric(ProcessKind::standard(), DiscountRate(0.5),
                                      psi, 0.0, opts),
                    NumericalFailure);
    try {
        resolvent_numeric(ProcessKind::standard(), DiscountRate(0.5), psi, 0.0,
                          opts);
    } catch (const NumericalFailure& failure) {
        CHECK(failure.achieved_error() > opts.rel_tol);
        CHECK(std::string(failure.what()).size() > 0);
    }

    CHECK_THROWS_AS(resolvent_numeric(ProcessKind::reflected(),
                                      DiscountRate(0.5), psi, -1.0),
                    std::domain_error);
}
