#include "ostop/problems.hpp"

namespace ostop {

ProcessKind example_process(ExampleId id) {
    switch (id) {
        case ExampleId::LinearRunning:
        case ExampleId::LinearStopped:
            return ProcessKind::standard();
        case ExampleId::Reflected:
            return ProcessKind::reflected();
        case ExampleId::Absorbed:
            return ProcessKind::absorbed();
    }
    return ProcessKind::standard();
}

ThresholdSide stopping_side(ExampleId id) {
    return id == ExampleId::LinearRunning ? ThresholdSide::StopBelow
                                          : ThresholdSide::StopAbove;
}

StoppingProblem make_problem(ExampleId id, DiscountRate alpha) {
    StoppingProblem p;
    p.kind = example_process(id);
    p.alpha = alpha.value;
    if (id == ExampleId::LinearRunning) {
        p.running = PiecewiseFunction::identity();
        p.terminal = PiecewiseFunction::zero();
    } else {
        p.running = PiecewiseFunction::zero();
        p.terminal = PiecewiseFunction::identity();
    }
    return p;
}

PiecewiseFunction make_psi(ExampleId id, DiscountRate alpha, double x0) {
    if (id == ExampleId::LinearRunning) {
        return PiecewiseFunction({x0}, {[](double) { return 0.0; },
                                        [](double x) { return x; }});
    }
    const double a = alpha.value;
    if (id == ExampleId::Absorbed && x0 == 0.0) {
        // Degenerate boundary: psi(x) = alpha x on the whole state space.
        return PiecewiseFunction::single([a](double x) { return a * x; });
    }
    return PiecewiseFunction({x0}, {[](double) { return 0.0; },
                                    [a](double x) { return a * x; }});
}

std::function<bool(double)> threshold_rule(ExampleId id, double x0) {
    if (stopping_side(id) == ThresholdSide::StopBelow)
        return [x0](double x) { return x <= x0; };
    return [x0](double x) { return x >= x0; };
}

std::optional<ExampleId> parse_example(std::string_view name) {
    if (name == "running" || name == "linear-running")
        return ExampleId::LinearRunning;
    if (name == "stopped" || name == "linear-stopped")
        return ExampleId::LinearStopped;
    if (name == "reflected") return ExampleId::Reflected;
    if (name == "absorbed") return ExampleId::Absorbed;
    return std::nullopt;
}

}  // namespace ostop
