#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ostop/problems.hpp"

namespace ostop {

/// Candidate bundle (psi, value) for the verification checker; value
/// may be an analytic expression or a quadrature-backed closure.
struct Candidate {
    StoppingProblem problem;
    PiecewiseFunction psi;
    std::function<double(double)> value;
};

Candidate build_candidate(StoppingProblem problem, PiecewiseFunction psi,
                          std::function<double(double)> value);

/// Candidate for one of the worked examples at threshold x0 (the solved
/// threshold if omitted), with the closed-form value.
Candidate make_example_candidate(ExampleId id, DiscountRate alpha,
                                 std::optional<double> x0 = std::nullopt);

/// Half-open-ish interval of the continuation region. Endpoints are
/// closed only where the state-space boundary itself belongs to the
/// region (e.g. [0, x0) for the reflected example).
struct RegionInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = false;
    bool hi_closed = false;

    bool contains(double x) const {
        const bool above = lo_closed ? x >= lo : x > lo;
        const bool below = hi_closed ? x <= hi : x < hi;
        return above && below;
    }
};

/// Continuation region D = {x : value(x) > g(x)} as detected on the
/// checked grid, with boundary locations refined by bisection.
struct ContinuationRegion {
    std::vector<RegionInterval> intervals;
    std::optional<double> threshold;  // set when there is one boundary

    bool contains(double x) const {
        for (const auto& i : intervals)
            if (i.contains(x)) return true;
        return false;
    }
};

struct ConditionCheck {
    bool pass = true;
    double worst = 0.0;  // signed margin or magnitude, see field docs
};

struct BoundaryCheck {
    double location = 0.0;
    double jump = 0.0;
    double derivative_gap = 0.0;
    bool continuity_pass = true;
    bool pasting_pass = true;
};

struct VerificationReport {
    /// value >= terminal payoff everywhere; worst = min margin.
    ConditionCheck value_dominates_terminal;
    /// psi >= running payoff everywhere; worst = min margin.
    ConditionCheck psi_dominates_running;
    /// psi = running payoff on D; worst = max |psi - f| over D.
    ConditionCheck psi_matches_running_on_region;
    bool continuity_pass = true;
    double worst_jump = 0.0;
    bool smooth_pasting_pass = true;
    double worst_derivative_gap = 0.0;
    std::vector<BoundaryCheck> boundaries;
    ContinuationRegion region;
    std::vector<double> grid;
    double tol_value = 1e-6;
    double tol_derivative = 1e-4;

    bool all_pass() const {
        return value_dominates_terminal.pass && psi_dominates_running.pass &&
               psi_matches_running_on_region.pass && continuity_pass &&
               smooth_pasting_pass;
    }
};

/// Evaluate the sufficient conditions at every grid point, locate the
/// continuation region, and check value continuity and the one-sided
/// derivative gap at each detected boundary. Grid points must lie in
/// the state space with at least 3 points on each side of any detected
/// boundary. Quadrature failures from a numeric-backed value propagate.
///
/// fd_step is the one-sided difference step for the derivative gap;
/// keep it well above the evaluation noise of a quadrature-backed value
/// (the default suits exact closed forms).
VerificationReport check_conditions(const Candidate& candidate,
                                    std::span<const double> grid,
                                    double tol_value = 1e-6,
                                    double tol_derivative = 1e-4,
                                    double fd_step = 1e-6);

/// Decision function of the region: stop iff the state is outside D.
std::function<bool(double)> stopping_rule(const ContinuationRegion& region);

/// Evenly spaced verification grid for an example: 201 points spanning
/// the threshold with a margin of 2.5 / sqrt(2 alpha) on each side,
/// clipped to the state space.
std::vector<double> default_grid(ExampleId id, DiscountRate alpha, double x0,
                                 int n = 201);

}  // namespace ostop
