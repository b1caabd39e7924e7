#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace ostop {

/// Thrown when an adaptive integration cannot reach the requested
/// tolerance within its evaluation budget. Carries the best value and
/// the error estimate actually achieved.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, double best_value,
                     double achieved_error)
        : std::runtime_error(what),
          best_value_(best_value),
          achieved_error_(achieved_error) {}

    double best_value() const { return best_value_; }
    double achieved_error() const { return achieved_error_; }

private:
    double best_value_;
    double achieved_error_;
};

namespace quadrature {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 2000;
};

struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
/// Stops when the summed error estimate drops below
/// max(abs_tol, rel_tol * |value|) or the interval budget is spent;
/// converged is false in the latter case, no exception is thrown here.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& options = {});

/// Same, with the interval pre-split at the given interior points
/// (unsorted input is fine; points outside (a, b) are ignored).
Result integrate_split(const std::function<double(double)>& f, double a,
                       double b, std::span<const double> interior_points,
                       const Options& options = {});

}  // namespace quadrature
}  // namespace ostop
