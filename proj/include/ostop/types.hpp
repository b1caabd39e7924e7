#pragma once

#include <stdexcept>
#include <string_view>

namespace ostop {

/// Exponential discount rate, alpha > 0 (units 1/time).
struct DiscountRate {
    double value;
    explicit DiscountRate(double alpha) : value(alpha) {
        if (!(alpha > 0.0))
            throw std::invalid_argument("discount rate must be positive");
    }
};

/// The four worked stopping problems.
///
/// LinearRunning: running payoff x, no terminal payoff, standard BM.
/// LinearStopped: terminal payoff x at the stop, standard BM.
/// Reflected:     terminal payoff x, Brownian motion reflected at 0.
/// Absorbed:      terminal payoff x, Brownian motion absorbed at 0.
enum class ExampleId { LinearRunning, LinearStopped, Reflected, Absorbed };

constexpr std::string_view to_string(ExampleId id) {
    switch (id) {
        case ExampleId::LinearRunning: return "running";
        case ExampleId::LinearStopped: return "stopped";
        case ExampleId::Reflected: return "reflected";
        case ExampleId::Absorbed: return "absorbed";
    }
    return "?";
}

}  // namespace ostop
