#include "ostop/piecewise.hpp"

#include <algorithm>
#include <stdexcept>

namespace ostop {

PiecewiseFunction::PiecewiseFunction(std::vector<double> breakpoints,
                                     std::vector<Fn> pieces)
    : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)) {
    if (pieces_.empty() || pieces_.size() != breaks_.size() + 1)
        throw std::invalid_argument(
            "piecewise function needs breakpoints.size() + 1 pieces");
    if (!std::is_sorted(breaks_.begin(), breaks_.end()))
        throw std::invalid_argument("breakpoints must be sorted");
    for (const auto& p : pieces_)
        if (!p) throw std::invalid_argument("null piece");
}

PiecewiseFunction PiecewiseFunction::zero() {
    PiecewiseFunction f({}, {[](double) { return 0.0; }});
    f.zero_ = true;
    return f;
}

PiecewiseFunction PiecewiseFunction::constant(double c) {
    return PiecewiseFunction({}, {[c](double) { return c; }});
}

PiecewiseFunction PiecewiseFunction::identity() {
    return PiecewiseFunction({}, {[](double x) { return x; }});
}

PiecewiseFunction PiecewiseFunction::single(Fn fn) {
    return PiecewiseFunction({}, {std::move(fn)});
}

double PiecewiseFunction::operator()(double x) const {
    std::size_t i = 0;
    while (i < breaks_.size() && x >= breaks_[i]) ++i;
    return pieces_[i](x);
}

}  // namespace ostop
