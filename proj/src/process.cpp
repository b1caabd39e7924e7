#include "ostop/process.hpp"

#include <cmath>
#include <stdexcept>

namespace ostop {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// One Gaussian image term e^{-d^2/(2t)} / sqrt(2 pi t), with the
// underflow cutoff applied to the exponent.
double gauss_term(double d, double t) {
    const double expo = -d * d / (2.0 * t);
    if (expo < -745.0) return 0.0;
    return std::exp(expo) / std::sqrt(kTwoPi * t);
}

void validate(ProcessKind kind, double x, double t) {
    if (!(t > 0.0)) throw std::domain_error("elapsed time must be positive");
    if (!std::isfinite(x) || !kind.contains(x))
        throw std::domain_error("state outside the process state space");
}

}  // namespace

double transition_density(ProcessKind kind, const DensityQuery& q) {
    validate(kind, q.x, q.t);
    if (!std::isfinite(q.y) || !kind.contains(q.y))
        throw std::domain_error("state outside the process state space");

    switch (kind.variant) {
        case ProcessVariant::StandardBM:
            return gauss_term(q.y - q.x, q.t);
        case ProcessVariant::ReflectedBM:
            return gauss_term(q.y - q.x, q.t) + gauss_term(q.y + q.x, q.t);
        case ProcessVariant::AbsorbedBM: {
            const double d = gauss_term(q.y - q.x, q.t) - gauss_term(q.y + q.x, q.t);
            // The image terms cancel exactly at the barrier; clamp the
            // rounding residue so the density is never negative.
            return d > 0.0 ? d : 0.0;
        }
    }
    throw std::logic_error("unknown process variant");
}

double survival_probability(ProcessKind kind, double x, double t) {
    validate(kind, x, t);
    if (kind.variant != ProcessVariant::AbsorbedBM) return 1.0;
    if (x == 0.0) return 0.0;
    return std::erf(x / std::sqrt(2.0 * t));
}

}  // namespace ostop
