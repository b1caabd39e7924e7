#pragma once

#include <limits>
#include <string>

namespace ostop {

enum class ProcessVariant { StandardBM, ReflectedBM, AbsorbedBM };

/// One of the three Brownian variants together with its state space:
/// the whole line for standard Brownian motion, [0, inf) for the
/// reflected and absorbed variants (barrier fixed at 0).
struct ProcessKind {
    ProcessVariant variant = ProcessVariant::StandardBM;

    static constexpr ProcessKind standard() {
        return {ProcessVariant::StandardBM};
    }
    static constexpr ProcessKind reflected() {
        return {ProcessVariant::ReflectedBM};
    }
    static constexpr ProcessKind absorbed() {
        return {ProcessVariant::AbsorbedBM};
    }

    bool barrier_at_zero() const {
        return variant != ProcessVariant::StandardBM;
    }
    double state_lower_bound() const {
        return barrier_at_zero() ? 0.0
                                 : -std::numeric_limits<double>::infinity();
    }
    bool contains(double x) const { return x >= state_lower_bound(); }

    const char* name() const {
        switch (variant) {
            case ProcessVariant::StandardBM: return "standard";
            case ProcessVariant::ReflectedBM: return "reflected";
            case ProcessVariant::AbsorbedBM: return "absorbed";
        }
        return "?";
    }
};

/// Transition-density query: start state x, end state y, elapsed time t > 0.
struct DensityQuery {
    double x = 0.0;
    double y = 0.0;
    double t = 1.0;
};

/// Transition density p_t(x, y) in 1/state-units.
///
/// Standard: the Gaussian kernel. Reflected: sum of the two image
/// Gaussians. Absorbed: difference of the two image Gaussians (the
/// sub-probability density of paths that have not hit 0). Exponents
/// below -745 return exact zero instead of denormal noise.
double transition_density(ProcessKind kind, const DensityQuery& q);

/// Probability that the process is still in the state space at time t:
/// 1 for the conservative variants, erf(x / sqrt(2t)) for absorbed
/// Brownian motion started at x.
double survival_probability(ProcessKind kind, double x, double t);

}  // namespace ostop
