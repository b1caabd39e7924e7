#pragma once

#include <functional>
#include <optional>

#include "ostop/piecewise.hpp"
#include "ostop/process.hpp"
#include "ostop/resolvent.hpp"
#include "ostop/types.hpp"

namespace ostop {

/// The optimal stopping data: process, running payoff f, terminal
/// payoff g, discount rate alpha. Payoffs are defined on the whole
/// state space and grow at most linearly.
struct StoppingProblem {
    ProcessKind kind;
    PiecewiseFunction running;
    PiecewiseFunction terminal;
    double alpha = 0.0;
};

/// Which side of the threshold triggers a stop: the running-payoff
/// example stops below its (negative) threshold, the stopped-payoff
/// examples stop at and above theirs.
enum class ThresholdSide { StopBelow, StopAbove };

ProcessKind example_process(ExampleId id);
ThresholdSide stopping_side(ExampleId id);

StoppingProblem make_problem(ExampleId id, DiscountRate alpha);

/// The candidate psi of each example: psi(x) = x 1_{x > x0} for the
/// running-payoff problem, psi(x) = alpha x 1_{x >= x0} for the stopped
/// ones.
PiecewiseFunction make_psi(ExampleId id, DiscountRate alpha, double x0);

/// Pure threshold decision: stop iff the state is on the stopping side
/// of x0 (inclusive).
std::function<bool(double)> threshold_rule(ExampleId id, double x0);

std::optional<ExampleId> parse_example(std::string_view name);

}  // namespace ostop
