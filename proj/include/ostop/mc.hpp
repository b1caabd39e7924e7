#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ostop/problems.hpp"

namespace ostop {

struct McConfig {
    std::int64_t paths = 100'000;
    double dt = 1e-3;
    /// Truncation time for the perpetual problems; <= 0 selects the
    /// default 40 / alpha, at which the omitted discounted tail is of
    /// order e^{-40}.
    double horizon = 0.0;
    std::uint64_t seed = 12345;
    bool antithetic = false;
    bool bridge_correction = true;
    /// Worker threads; <= 0 uses the hardware count. Estimates are
    /// bit-identical for any thread count (fixed-block reduction over
    /// per-path counter streams).
    int threads = 0;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t paths_used = 0;
    /// Analytic bound on the expectation omitted by truncating at the
    /// horizon: e^{-alpha T} times a linear-growth envelope of the
    /// payoffs.
    double truncation_bound = 0.0;
};

/// Monte Carlo estimate of
///   E_x[ integral_0^tau e^{-alpha t} f(X_t) dt + e^{-alpha tau} g(X_tau) ]
/// for the stopping time induced by applying `rule` at each grid time.
/// The running integral is accumulated by the trapezoid rule; absorbed
/// paths stop at the absorption step with terminal payoff g(0); paths
/// still running at the horizon contribute their truncated value, with
/// the omitted tail reported via truncation_bound.
McEstimate estimate_value(const StoppingProblem& problem,
                          const std::function<bool(double)>& rule,
                          double start, const McConfig& config);

struct SweepPoint {
    double threshold = 0.0;
    McEstimate estimate;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::size_t argmax_index = 0;
    /// Gap between the best and second-best mean in combined standard
    /// errors (infinite when both are deterministic and distinct).
    double argmax_gap_z = 0.0;
};

/// Value estimates for a family of threshold rules evaluated on common
/// random numbers: every path is simulated once and each threshold is
/// resolved at its own first crossing, which makes differences between
/// neighbouring thresholds far less noisy than independent runs.
/// Thresholds must be strictly increasing.
SweepResult threshold_sweep(const StoppingProblem& problem,
                            ThresholdSide side,
                            std::span<const double> thresholds, double start,
                            const McConfig& config);

/// Simple stopping time: a fixed grid time or the first grid time the
/// state leaves an open interval, both capped at the horizon.
struct TauSpec {
    enum class Kind { FixedTime, ExitInterval };
    Kind kind = Kind::FixedTime;
    double t0 = 1.0;
    double lo = 0.0;
    double hi = 0.0;

    static TauSpec fixed_time(double t) { return {Kind::FixedTime, t, 0, 0}; }
    static TauSpec exit_interval(double lo, double hi) {
        return {Kind::ExitInterval, 0, lo, hi};
    }
};

/// Monte Carlo estimate of the identity residual
///   e^{-alpha tau} R psi(X_tau) - R psi(x) + integral_0^tau e^{-alpha t} psi(X_t) dt,
/// whose expectation is 0 for every stopping time. `resolvent_value`
/// evaluates R_alpha psi (closed form or quadrature closure).
McEstimate discounted_identity_residual(
    ProcessKind kind, const PiecewiseFunction& psi, DiscountRate alpha,
    const std::function<double(double)>& resolvent_value, double start,
    const TauSpec& tau, const McConfig& config);

struct TailPoint {
    double level = 0.0;
    /// max over the probed stopping times of E[|v(X_tau)| 1{|v| > level}].
    double worst_tail = 0.0;
};

/// Empirical uniform-integrability probe for the family
/// {v(X_tau), tau <= tau_D}: tail expectations of |v(X_tau)| above a
/// ladder of levels, maximised over the rule stopping time and a few
/// fixed times capped by it. Reported, not pass/fail. config.horizon
/// caps the fixed-time candidates (<= 0 falls back to 40).
std::vector<TailPoint> uniform_integrability_proxy(
    ProcessKind kind, const std::function<double(double)>& value,
    const std::function<bool(double)>& rule, double start,
    std::span<const double> levels, const McConfig& config);

}  // namespace ostop
