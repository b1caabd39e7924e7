#include "ostop/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ostop {

namespace {

constexpr double kInvSqrtTwoPi = 0.39894228040143267793994605993438;

struct BudgetExceeded {};

// Extend psi from the state space to the whole line so the inner
// integral is a plain Gaussian average for every variant:
// identity for standard BM, even extension for reflected, odd
// extension for absorbed (the image-kernel identities).
double extended_psi(ProcessKind kind, const PiecewiseFunction& psi, double w) {
    switch (kind.variant) {
        case ProcessVariant::StandardBM: return psi(w);
        case ProcessVariant::ReflectedBM: return psi(std::fabs(w));
        case ProcessVariant::AbsorbedBM:
            if (w > 0.0) return psi(w);
            if (w < 0.0) return -psi(-w);
            return 0.0;
    }
    return 0.0;
}

// Linear-growth constant K with |psi(y)| <= K (1 + |y|), estimated from
// probe points; exact for the piecewise-linear payoffs used here.
double growth_constant(ProcessKind kind, const PiecewiseFunction& psi,
                       double x, double span) {
    double k = 0.0;
    const double probes[] = {0.0,  0.5,        1.0,        x,
                             span, 2.0 * span, -span,      -2.0 * span,
                             -1.0, x + span,   x - span};
    for (double y : probes) {
        if (!kind.contains(y)) continue;
        k = std::max(k, std::fabs(psi(y)) / (1.0 + std::fabs(y)));
    }
    return k;
}

}  // namespace

double resolvent_numeric(ProcessKind kind, DiscountRate alpha,
                         const PiecewiseFunction& psi, double x,
                         const ResolventOptions& options) {
    if (!kind.contains(x))
        throw std::domain_error("state outside the process state space");

    const double a = alpha.value;
    double span = std::max(1.0, std::fabs(x));
    for (double b : psi.breakpoints()) span = std::max(span, std::fabs(b));

    const double t_max = std::max(40.0 / a, 40.0 * span * span);
    const double s_max = std::sqrt(t_max);
    const double k_growth = growth_constant(kind, psi, x, span);

    long evaluations = 0;
    constexpr double kZMax = 10.0;

    const auto inner_mean = [&](double t) -> double {
        const double st = std::sqrt(t);
        std::vector<double> cuts;
        for (double b : psi.breakpoints()) {
            cuts.push_back((b - x) / st);
            if (kind.barrier_at_zero()) cuts.push_back((-b - x) / st);
        }
        if (kind.barrier_at_zero()) cuts.push_back(-x / st);

        const auto integrand = [&](double z) {
            if (++evaluations > options.max_evaluations) throw BudgetExceeded{};
            const double w = x + st * z;
            return extended_psi(kind, psi, w) * kInvSqrtTwoPi *
                   std::exp(-0.5 * z * z);
        };
        // The inner errors integrate against 2s e^{-alpha s^2}, whose
        // mass is 1/alpha; this absolute floor keeps the accumulated
        // pollution a small fraction of the outer tolerance.
        quadrature::Options inner_options;
        inner_options.rel_tol = 0.01 * options.rel_tol;
        inner_options.abs_tol = 0.05 * options.rel_tol * a;
        inner_options.max_intervals = 128;
        const auto r =
            quadrature::integrate_split(integrand, -kZMax, kZMax, cuts, inner_options);
        return r.value;
    };

    const auto outer_integrand = [&](double s) {
        return 2.0 * s * std::exp(-a * s * s) * inner_mean(s * s);
    };

    // Seed the outer subdivision around the discount time scale.
    const double s_alpha = std::min(1.0 / std::sqrt(a), 0.5 * s_max);
    const double seeds[] = {1e-3 * s_max, 0.3 * s_alpha, s_alpha, 3.0 * s_alpha,
                            0.3 * s_max};

    // The convergence target is rel_tol against max(1, |value|): the
    // relative branch covers large values, the absolute one the regions
    // where the resolvent vanishes (below the running-payoff threshold).
    quadrature::Options outer_options;
    outer_options.rel_tol = 0.35 * options.rel_tol;
    outer_options.abs_tol = 0.35 * options.rel_tol;
    outer_options.max_intervals = 512;

    quadrature::Result outer;
    try {
        outer = quadrature::integrate_split(outer_integrand, 0.0, s_max, seeds,
                                            outer_options);
    } catch (const BudgetExceeded&) {
        throw NumericalFailure(
            "resolvent quadrature exceeded its evaluation budget",
            std::numeric_limits<double>::quiet_NaN(),
            std::numeric_limits<double>::infinity());
    }

    // Truncation tail: |E e^{-alpha t} psi(X_t)| <= e^{-alpha t} K (1 + |x| + sqrt(t)),
    // integrated past T_max and bounded crudely by the value below.
    const double tail_bound = std::exp(-a * t_max) * k_growth *
                              (1.0 + std::fabs(x) + std::sqrt(t_max) + 1.0 / std::sqrt(a)) /
                              a;

    const double achieved =
        (outer.error_estimate + tail_bound) / std::max(1.0, std::fabs(outer.value));
    if (!outer.converged || achieved > options.rel_tol)
        throw NumericalFailure("resolvent quadrature did not converge",
                               outer.value, achieved);
    return outer.value;
}

ClosedFormValue::ClosedFormValue(ExampleId example, DiscountRate alpha,
                                 double x0)
    : example_(example), alpha_(alpha.value), x0_(x0) {
    const double a = alpha_;
    const double g = std::sqrt(2.0 * a);
    constants_.gamma = g;
    switch (example_) {
        case ExampleId::LinearRunning:
            if (!(x0 < 0.0))
                throw std::domain_error(
                    "running-payoff threshold must be negative");
            constants_.c1 = 0.0;
            constants_.c2 = -x0 * std::exp(g * x0) / a;
            constants_.continuation_coeff = 1.0 / (a * g);
            break;
        case ExampleId::LinearStopped:
            if (!(x0 > 0.0))
                throw std::domain_error(
                    "stopped-payoff threshold must be positive");
            constants_.c1 = x0 * std::exp(-g * x0);
            constants_.c2 = 0.0;
            constants_.continuation_coeff = 0.5 / g + 0.5 * x0;
            break;
        case ExampleId::Reflected: {
            if (!(x0 > 0.0))
                throw std::domain_error("reflected threshold must be positive");
            const double c = x0 / (2.0 * std::cosh(g * x0));
            constants_.c1 = c;
            constants_.c2 = c;
            constants_.continuation_coeff = x0 / std::cosh(g * x0);
            break;
        }
        case ExampleId::Absorbed: {
            if (!(x0 >= 0.0))
                throw std::domain_error(
                    "absorbed threshold must be nonnegative");
            if (x0 > 0.0) {
                const double c = x0 / (2.0 * std::sinh(g * x0));
                constants_.c1 = c;
                constants_.c2 = -c;
                constants_.continuation_coeff = x0 / std::sinh(g * x0);
            } else {
                // Degenerate boundary: continuation region empty, the
                // coefficients below are the x0 -> 0 limits.
                constants_.c1 = 0.5 / g;
                constants_.c2 = -0.5 / g;
                constants_.continuation_coeff = 1.0 / g;
            }
            break;
        }
    }
}

double ClosedFormValue::lower_branch(double x) const {
    const double g = constants_.gamma;
    switch (example_) {
        case ExampleId::LinearRunning:
            return 0.0;
        case ExampleId::LinearStopped:
            return std::exp(-g * (x0_ - x)) * constants_.continuation_coeff;
        case ExampleId::Reflected:
            if (x < 0.0) throw std::domain_error("state below the barrier");
            return constants_.continuation_coeff * std::cosh(g * x);
        case ExampleId::Absorbed:
            if (x < 0.0) throw std::domain_error("state below the barrier");
            if (x0_ == 0.0) return x;
            return constants_.continuation_coeff * std::sinh(g * x);
    }
    throw std::logic_error("unknown example");
}

double ClosedFormValue::upper_branch(double x) const {
    switch (example_) {
        case ExampleId::LinearRunning:
            return std::exp(-constants_.gamma * (x - x0_)) *
                       constants_.continuation_coeff +
                   x / alpha_;
        case ExampleId::LinearStopped:
            return x;
        case ExampleId::Reflected:
        case ExampleId::Absorbed:
            if (x < 0.0) throw std::domain_error("state below the barrier");
            return x;
    }
    throw std::logic_error("unknown example");
}

double ClosedFormValue::operator()(double x) const {
    if (example_ == ExampleId::LinearRunning)
        return x <= x0_ ? lower_branch(x) : upper_branch(x);
    return x < x0_ ? lower_branch(x) : upper_branch(x);
}

ClosedFormValue resolvent_closed_form(ExampleId example, DiscountRate alpha,
                                      double x0) {
    return ClosedFormValue(example, alpha, x0);
}

double erf_laplace_closed_form(DiscountRate alpha, double q) {
    if (!(q >= 0.0)) throw std::domain_error("q must be nonnegative");
    return std::exp(-q * std::sqrt(alpha.value)) / alpha.value;
}

double erf_laplace_quadrature(DiscountRate alpha, double q, double rel_tol) {
    if (!(q >= 0.0)) throw std::domain_error("q must be nonnegative");
    const double a = alpha.value;
    const double s_max = std::sqrt(50.0 / a);

    // t = s^2; erfc(q / (2 s)) vanishes fast as s -> 0 when q > 0.
    const auto integrand = [&](double s) {
        return 2.0 * s * std::erfc(q / (2.0 * s)) * std::exp(-a * s * s);
    };
    const double cuts[] = {q / 8.0, q / 2.0, 2.0 * q};
    quadrature::Options options{rel_tol, 1e-14, 1024};
    const auto r = quadrature::integrate_split(integrand, 0.0, s_max, cuts, options);
    if (!r.converged)
        throw NumericalFailure("erf-Laplace quadrature did not converge",
                               r.value, r.error_estimate);
    return r.value;
}

double resolvent_equation_residual(const ClosedFormValue& value,
                                   const PiecewiseFunction& psi, double x,
                                   double h) {
    if (!(h > 0.0)) throw std::domain_error("step h must be positive");
    if (std::fabs(x - value.threshold()) <= h)
        throw std::domain_error("stencil straddles the threshold kink");
    const bool barrier = value.example() == ExampleId::Reflected ||
                         value.example() == ExampleId::Absorbed;
    if (barrier && !(x - h > 0.0))
        throw std::domain_error("stencil straddles the barrier");

    const double second =
        (value(x + h) - 2.0 * value(x) + value(x - h)) / (h * h);
    return value.alpha() * value(x) - 0.5 * second - psi(x);
}

}  // namespace ostop
