#include <doctest.h>

#include <cmath>

#include "ostop/free_boundary.hpp"
#include "ostop/mc.hpp"

using namespace ostop;

namespace {

McConfig quick_config(std::int64_t paths, double dt = 2e-3) {
    McConfig cfg;
    cfg.paths = paths;
    cfg.dt = dt;
    cfg.seed = 20240817;
    return cfg;
}

}  // namespace

TEST_CASE("mc: stop-always returns the terminal payoff exactly") {
    const DiscountRate alpha(0.5);
    const auto problem = make_problem(ExampleId::LinearStopped, alpha);
    const auto estimate = estimate_value(
        problem, [](double) { return true; }, 1.7, quick_config(500));
    CHECK(estimate.mean == 1.7);
    CHECK(estimate.std_error == 0.0);
    CHECK(estimate.paths_used == 500);
}

TEST_CASE("mc: absorbed start on the barrier stops with g(0)") {
    const DiscountRate alpha(0.5);
    const auto problem = make_problem(ExampleId::Absorbed, alpha);
    const auto estimate = estimate_value(
        problem, [](double) { return false; }, 0.0, quick_config(200));
    CHECK(estimate.mean == 0.0);
    CHECK(estimate.std_error == 0.0);
}

TEST_CASE("mc: stopped example matches the closed-form value") {
    const DiscountRate alpha(0.5);
    const auto problem = make_problem(ExampleId::LinearStopped, alpha);
    const auto rule = threshold_rule(ExampleId::LinearStopped, 1.0);
    const auto estimate = estimate_value(problem, rule, 0.0, quick_config(20000));
    const double exact = 0.36787944117144233;
    CHECK(estimate.std_error > 0.0);
    CHECK(std::fabs(estimate.mean - exact) < 4.0 * estimate.std_error + 2e-3);
    CHECK(estimate.truncation_bound < 1e-6);
}

TEST_CASE("mc: running example matches the closed-form value") {
    const DiscountRate alpha(0.5);
    const auto problem = make_problem(ExampleId::LinearRunning, alpha);
    const auto rule = threshold_rule(ExampleId::LinearRunning, -1.0);
    const auto estimate = estimate_value(problem, rule, 0.0, quick_config(20000));
    const double exact = 0.7357588823428847;
    CHECK(std::fabs(estimate.mean - exact) < 4.0 * estimate.std_error + 2e-3);
}

TEST_CASE("mc: estimates are bit-identical across worker counts") {
    const DiscountRate alpha(0.5);
    const auto problem = make_problem(ExampleId::LinearStopped, alpha);
    const auto rule = threshold_rule(ExampleId::LinearStopped, 1.0);
    auto cfg = quick_config(6000);
    cfg.threads = 1;
    const auto one = estimate_value(problem, rule, 0.0, cfg);
    cfg.threads = 3;
    const auto three = estimate_value(problem, rule, 0.0, cfg);
    CHECK(one.mean == three.mean);
    CHECK(one.std_error == three.std_error);
}

TEST_CASE("mc: antithetic variates") {
    const DiscountRate alpha(0.5);
    const auto problem = make_problem(ExampleId::LinearStopped, alpha);
    const auto rule = threshold_rule(ExampleId::LinearStopped, 1.0);
    auto cfg = quick_config(10001);
    cfg.antithetic = true;
    const auto estimate = estimate_value(problem, rule, 0.0, cfg);
    CHECK(estimate.paths_used == 10000);
    CHECK(std::fabs(estimate.mean - 0.36787944117144233) <
          5.0 * estimate.std_error + 3e-3);
}

TEST_CASE("mc: sweep resolves already-crossed thresholds at time zero") {
    const DiscountRate alpha(0.5);
    const auto problem = make_problem(ExampleId::Absorbed, alpha);
    const double thresholds[] = {0.5, 2.0};
    const auto sweep = threshold_sweep(problem, ThresholdSide::StopAbove,
                                       thresholds, 1.0, quick_config(2000));
    CHECK(sweep.points[0].estimate.mean == 1.0);   // stopped immediately, g(1)
    CHECK(sweep.points[0].estimate.std_error == 0.0);
    CHECK(sweep.points[1].estimate.mean < 1.0);
}

TEST_CASE("mc: sweep maximum sits at the analytic threshold") {
    const DiscountRate alpha(0.5);
    const auto problem = make_problem(ExampleId::LinearStopped, alpha);
    const double thresholds[] = {0.6, 0.8, 1.0, 1.2, 1.4};
    const auto sweep = threshold_sweep(problem, ThresholdSide::StopAbove,
                                       thresholds, 0.0, quick_config(20000));
    CHECK(sweep.points[sweep.argmax_index].threshold ==
          doctest::Approx(1.0).epsilon(0.21));

    // Suboptimality: no rule beats the optimal value.
    const double optimal = 0.36787944117144233;
    for (const auto& point : sweep.points)
        CHECK(point.estimate.mean <=
              optimal + 3.0 * point.estimate.std_error + 1e-3);
}

TEST_CASE("mc: halving dt moves a hitting-rule estimate within its bias bound") {
    const DiscountRate alpha(0.5);
    const auto problem = make_problem(ExampleId::LinearStopped, alpha);
    const auto rule = threshold_rule(ExampleId::LinearStopped, 1.5);
    auto coarse_cfg = quick_config(30000, 2e-3);
    auto fine_cfg = quick_config(30000, 1e-3);
    fine_cfg.seed = 777;
    const auto coarse = estimate_value(problem, rule, 0.0, coarse_cfg);
    const auto fine = estimate_value(problem, rule, 0.0, fine_cfg);
    // First-passage grid bias shifts the effective barrier by about
    // 0.58 sqrt(dt); |dJ/db| at b = 1.5 is 0.11 for this example.
    const double slope = 0.12;
    const double bias_bound =
        0.6 * slope * (std::sqrt(coarse_cfg.dt) - std::sqrt(fine_cfg.dt));
    CHECK(std::fabs(coarse.mean - fine.mean) <
          bias_bound + 4.0 * (coarse.std_error + fine.std_error));
}

TEST_CASE("mc: identity residual, deterministic cancellation") {
    // psi == 1 and a fixed stopping time: every path gives the same
    // residual, so the standard error is zero and the mean is pure
    // trapezoid discretisation error.
    const DiscountRate alpha(0.5);
    const auto psi = PiecewiseFunction::constant(1.0);
    const auto value = [&](double) { return 1.0 / alpha.value; };
    auto cfg = quick_config(200, 1e-3);
    const auto estimate = discounted_identity_residual(
        ProcessKind::standard(), psi, alpha, value, 0.3,
        TauSpec::fixed_time(2.0), cfg);
    CHECK(estimate.std_error == 0.0);
    CHECK(std::fabs(estimate.mean) < 1e-6);
}

TEST_CASE("mc: identity residual, exit time with the stopped-example psi") {
    const DiscountRate alpha(0.5);
    const auto psi = make_psi(ExampleId::LinearStopped, alpha, 1.0);
    const ClosedFormValue value(ExampleId::LinearStopped, alpha, 1.0);
    const auto estimate = discounted_identity_residual(
        ProcessKind::standard(), psi, alpha,
        [value](double x) { return value(x); }, 0.0,
        TauSpec::exit_interval(-2.0, 2.0), quick_config(20000, 1e-3));
    CHECK(estimate.std_error > 0.0);
    CHECK(std::fabs(estimate.mean) < 3.0 * estimate.std_error + 1e-4);
}

TEST_CASE("mc: identity residual, absorbed martingale case") {
    // x0 = 0 degenerate: psi = alpha x and R psi(x) = x for the
    // absorbed process.
    const DiscountRate alpha(0.5);
    const auto psi = make_psi(ExampleId::Absorbed, alpha, 0.0);
    const auto estimate = discounted_identity_residual(
        ProcessKind::absorbed(), psi, alpha, [](double x) { return x; }, 1.0,
        TauSpec::fixed_time(1.0), quick_config(20000, 1e-3));
    CHECK(std::fabs(estimate.mean) < 3.0 * estimate.std_error + 1e-4);
}

TEST_CASE("mc: uniform integrability proxy decays to zero") {
    const DiscountRate alpha(0.5);
    const auto solution = solve_threshold(ExampleId::Reflected, alpha);
    const ClosedFormValue value(ExampleId::Reflected, alpha, solution.x0);
    const auto rule = threshold_rule(ExampleId::Reflected, solution.x0);
    const double levels[] = {0.25, 0.5, 1.0, 2.0};
    auto cfg = quick_config(4000, 2e-3);
    cfg.horizon = 8.0;
    const auto tails = uniform_integrability_proxy(
        ProcessKind::reflected(), [value](double x) { return value(x); }, rule,
        0.5, levels, cfg);
    REQUIRE(tails.size() == 4);
    for (std::size_t i = 1; i < tails.size(); ++i)
        CHECK(tails[i].worst_tail <= tails[i - 1].worst_tail + 1e-12);
    CHECK(tails.back().worst_tail == 0.0);
}

TEST_CASE("mc: configuration validation") {
    const DiscountRate alpha(0.5);
    const auto problem = make_problem(ExampleId::LinearStopped, alpha);
    const auto rule = threshold_rule(ExampleId::LinearStopped, 1.0);
    McConfig bad;
    bad.paths = 0;
    CHECK_THROWS_AS(estimate_value(problem, rule, 0.0, bad),
                    std::invalid_argument);
    bad = McConfig{};
    bad.dt = 0.0;
    CHECK_THROWS_AS(estimate_value(problem, rule, 0.0, bad),
                    std::invalid_argument);
    const double decreasing[] = {1.0, 0.5};
    CHECK_THROWS_AS(threshold_sweep(problem, ThresholdSide::StopAbove,
                                    decreasing, 0.0, quick_config(10)),
                    std::invalid_argument);
}
