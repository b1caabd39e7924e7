#pragma once

#include "ostop/piecewise.hpp"
#include "ostop/process.hpp"
#include "ostop/quadrature.hpp"
#include "ostop/types.hpp"

namespace ostop {

struct ResolventOptions {
    double rel_tol = 1e-8;
    long max_evaluations = 1'000'000;
};

/// Resolvent R_alpha psi(x) = E_x[ integral_0^inf e^{-alpha t} psi(X_t) dt ]
/// by nested quadrature.
///
/// The outer time integral is computed after the substitution t = s^2,
/// which removes the 1/sqrt(t) endpoint behaviour, and truncated at
/// T_max = max(40/alpha, 40 * span^2) with an analytically bounded tail.
/// The inner space integral is taken in the scaled variable
/// z = (y - x)/sqrt(t) and split at the images of psi's breakpoints, so
/// the kink of a piecewise psi never sits inside a panel.
///
/// Throws NumericalFailure when the requested relative tolerance is not
/// reached within the evaluation budget.
double resolvent_numeric(ProcessKind kind, DiscountRate alpha,
                         const PiecewiseFunction& psi, double x,
                         const ResolventOptions& options = {});

/// Coefficients produced by the ODE solves behind the closed forms:
/// the general solution is c1 e^{gamma x} + c2 e^{-gamma x} (plus x/alpha
/// for the running-payoff problem), gamma = sqrt(2 alpha).
struct ClosedFormConstants {
    double gamma = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    /// Pre-exponential factor of the continuation branch, in the form
    /// each example's final expression is written in.
    double continuation_coeff = 0.0;
};

/// Analytic value function of one example: the two-branch expression
/// with threshold x0, exact (no quadrature).
///
/// Branches (gamma = sqrt(2 alpha)):
///   LinearRunning: 0 for x <= x0;
///                  e^{-gamma (x - x0)} / (alpha gamma) + x/alpha above.
///   LinearStopped: e^{-gamma (x0 - x)} (1/(2 gamma) + x0/2) below x0;
///                  x at and above.
///   Reflected:     x0 cosh(gamma x) / cosh(gamma x0) below x0; x above.
///   Absorbed:      x0 sinh(gamma x) / sinh(gamma x0) below x0; x above;
///                  the degenerate x0 = 0 collapses to x everywhere.
///
/// The two branches paste continuously (and with matching first
/// derivatives where the examples claim smooth fit) exactly at the
/// example's solved threshold; at any other x0 the mismatch is what the
/// verification checker is designed to detect.
class ClosedFormValue {
public:
    ClosedFormValue(ExampleId example, DiscountRate alpha, double x0);

    double operator()(double x) const;
    double evaluate(double x) const { return (*this)(x); }

    /// Continuation-side expression, defined for any state in the state
    /// space (used for branch-wise plots and two-sided limit tests).
    double lower_branch(double x) const;
    /// Stopping-side expression.
    double upper_branch(double x) const;

    ExampleId example() const { return example_; }
    double alpha() const { return alpha_; }
    double threshold() const { return x0_; }
    const ClosedFormConstants& constants() const { return constants_; }

private:
    ExampleId example_;
    double alpha_;
    double x0_;
    ClosedFormConstants constants_;
};

/// Factory mirroring the solver vocabulary: builds the two-branch value
/// for the example at threshold x0 (x0 < 0 for LinearRunning, > 0 for
/// the stopped examples; Absorbed also admits the degenerate x0 = 0).
ClosedFormValue resolvent_closed_form(ExampleId example, DiscountRate alpha,
                                      double x0);

/// Right-hand side of the Laplace-transform identity
///   integral_0^inf (1 - erf(q / (2 sqrt(t)))) e^{-alpha t} dt
///     = e^{-q sqrt(alpha)} / alpha,  q >= 0.
double erf_laplace_closed_form(DiscountRate alpha, double q);

/// Left-hand side of the same identity by adaptive quadrature.
double erf_laplace_quadrature(DiscountRate alpha, double q,
                              double rel_tol = 1e-11);

/// Residual of alpha v - (1/2) v'' = psi at x, with v'' taken by the
/// central second difference of step h. O(h^2) on smooth branches.
/// Throws std::domain_error when the stencil would straddle the
/// threshold kink or the barrier.
double resolvent_equation_residual(const ClosedFormValue& value,
                                   const PiecewiseFunction& psi, double x,
                                   double h);

}  // namespace ostop
