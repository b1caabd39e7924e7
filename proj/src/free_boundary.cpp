#include "ostop/free_boundary.hpp"

#include <cmath>
#include <stdexcept>

#include "ostop/root_finding.hpp"

namespace ostop {

namespace {

constexpr double kBracketLo = 1e-6;
constexpr double kBracketHi = 10.0;

ThresholdSolution solve_reflected(DiscountRate alpha, double tol) {
    // g(u) = u tanh(u) - 1: g(0+) < 0, g(10) > 0, one positive root.
    const auto g = [](double u) { return u * std::tanh(u) - 1.0; };
    const RootResult r = brent_root(g, kBracketLo, kBracketHi, tol);
    if (!r.converged)
        throw std::runtime_error("reflected threshold solve did not converge");
    ThresholdSolution s;
    s.example = ExampleId::Reflected;
    s.alpha = alpha.value;
    s.u = r.root;
    s.x0 = r.root / std::sqrt(2.0 * alpha.value);
    s.status = ThresholdStatus::RootFound;
    s.residual = r.residual;
    return s;
}

ThresholdSolution solve_absorbed(DiscountRate alpha) {
    // coth(u) = 1/u reduces to tanh(u) = u, and tanh(u) < u for every
    // u > 0: a sign scan over (0, 10] finds no change, so the boundary
    // degenerates to 0 and stopping immediately is optimal.
    const auto h = [](double u) { return std::tanh(u) - u; };
    constexpr int kScanPoints = 4096;
    bool sign_change = false;
    double prev = h(kBracketLo);
    for (int i = 1; i <= kScanPoints; ++i) {
        const double u =
            kBracketLo + (kBracketHi - kBracketLo) * i / kScanPoints;
        const double value = h(u);
        if ((prev < 0.0) != (value < 0.0)) sign_change = true;
        prev = value;
    }
    if (sign_change)
        throw std::logic_error("unexpected sign change in tanh(u) - u");

    ThresholdSolution s;
    s.example = ExampleId::Absorbed;
    s.alpha = alpha.value;
    s.u = 0.0;
    s.x0 = 0.0;
    s.status = ThresholdStatus::NoPositiveRoot;
    s.residual = 0.0;
    s.note =
        "smooth-fit equation coth(u) = 1/u reduces to tanh(u) = u, which has "
        "no positive root (sign scan of tanh(u) - u on (0, 10] is strictly "
        "negative); the expected positive/negative root pair does not exist "
        "and the boundary degenerates to x0 = 0: stop immediately";
    return s;
}

}  // namespace

ThresholdSolution solve_threshold(ExampleId example, DiscountRate alpha,
                                  double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    const double gamma = std::sqrt(2.0 * alpha.value);
    ThresholdSolution s;
    s.example = example;
    s.alpha = alpha.value;
    switch (example) {
        case ExampleId::LinearRunning:
            s.u = -1.0;
            s.x0 = -1.0 / gamma;
            s.status = ThresholdStatus::ClosedForm;
            return s;
        case ExampleId::LinearStopped:
            s.u = 1.0;
            s.x0 = 1.0 / gamma;
            s.status = ThresholdStatus::ClosedForm;
            return s;
        case ExampleId::Reflected:
            return solve_reflected(alpha, tol);
        case ExampleId::Absorbed:
            return solve_absorbed(alpha);
    }
    throw std::logic_error("unknown example");
}

ThresholdTriple threshold_ordering(DiscountRate alpha) {
    ThresholdTriple t;
    t.absorbed = solve_threshold(ExampleId::Absorbed, alpha).x0;
    t.standard = solve_threshold(ExampleId::LinearStopped, alpha).x0;
    t.reflected = solve_threshold(ExampleId::Reflected, alpha).x0;
    return t;
}

}  // namespace ostop
