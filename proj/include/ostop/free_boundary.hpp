#pragma once

#include <string>

#include "ostop/types.hpp"

namespace ostop {

enum class ThresholdStatus { ClosedForm, RootFound, NoPositiveRoot };

constexpr std::string_view to_string(ThresholdStatus status) {
    switch (status) {
        case ThresholdStatus::ClosedForm: return "ClosedForm";
        case ThresholdStatus::RootFound: return "RootFound";
        case ThresholdStatus::NoPositiveRoot: return "NoPositiveRoot";
    }
    return "?";
}

/// Solved free boundary of one example. u is the dimensionless root
/// (u = sqrt(2 alpha) x0), so x0 = u / sqrt(2 alpha) exactly.
struct ThresholdSolution {
    ExampleId example = ExampleId::LinearStopped;
    double alpha = 0.0;
    double u = 0.0;
    double x0 = 0.0;
    ThresholdStatus status = ThresholdStatus::ClosedForm;
    double residual = 0.0;
    /// Nonempty only for the absorbed case, where the threshold
    /// equation has no positive root and the boundary degenerates.
    std::string note;
};

/// Threshold equations in the dimensionless variable u:
///   LinearRunning: u = -1 (closed form),
///   LinearStopped: u =  1 (closed form),
///   Reflected:     u tanh(u) = 1, bracketed Brent on [1e-6, 10],
///   Absorbed:      coth(u) = 1/u, equivalently tanh(u) = u, which has
///                  no positive root; the solver reports NoPositiveRoot
///                  with the degenerate boundary x0 = 0.
ThresholdSolution solve_threshold(ExampleId example, DiscountRate alpha,
                                  double tol = 1e-12);

/// The three stopped-payoff thresholds in increasing order:
/// absorbed (degenerate 0) < standard < reflected.
struct ThresholdTriple {
    double absorbed = 0.0;
    double standard = 0.0;
    double reflected = 0.0;
};

ThresholdTriple threshold_ordering(DiscountRate alpha);

}  // namespace ostop
