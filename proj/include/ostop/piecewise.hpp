#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ostop {

/// Scalar function defined piecewise on the real line. Piece i applies
/// on [breakpoints[i-1], breakpoints[i]), the last piece on
/// [breakpoints.back(), inf); evaluation is total.
class PiecewiseFunction {
public:
    using Fn = std::function<double(double)>;

    PiecewiseFunction() : PiecewiseFunction(zero()) {}

    PiecewiseFunction(std::vector<double> breakpoints, std::vector<Fn> pieces);

    static PiecewiseFunction zero();
    static PiecewiseFunction constant(double c);
    /// f(x) = x on the whole line.
    static PiecewiseFunction identity();
    static PiecewiseFunction single(Fn fn);

    double operator()(double x) const;

    std::span<const double> breakpoints() const { return breaks_; }

    /// True when the function was constructed as identically zero; lets
    /// hot loops skip the running-payoff accumulation.
    bool is_zero() const { return zero_; }

private:
    std::vector<double> breaks_;
    std::vector<Fn> pieces_;
    bool zero_ = false;
};

}  // namespace ostop
