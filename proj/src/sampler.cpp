#include "ostop/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace ostop {

SamplePath sample_path(ProcessKind kind, double x0, double dt, double horizon,
                       RngStream& rng, const SamplerOptions& options) {
    if (!(dt > 0.0)) throw std::domain_error("dt must be positive");
    if (!(horizon >= dt)) throw std::domain_error("horizon must be >= dt");
    if (!kind.contains(x0))
        throw std::domain_error("start state outside the state space");

    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-12));
    const double sqrt_dt = std::sqrt(dt);

    SamplePath path;
    path.times.resize(steps + 1);
    path.states.resize(steps + 1);
    path.times[0] = 0.0;
    path.states[0] = x0;

    double w = x0;  // underlying free Brownian path
    bool absorbed = kind.variant == ProcessVariant::AbsorbedBM && x0 == 0.0;
    if (absorbed) {
        path.absorbed = true;
        path.absorption_time = 0.0;
    }

    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        path.times[k] = t;
        if (absorbed) {
            path.states[k] = 0.0;
            continue;
        }
        const double prev = w;
        w += sqrt_dt * rng.next_normal();
        switch (kind.variant) {
            case ProcessVariant::StandardBM:
                path.states[k] = w;
                break;
            case ProcessVariant::ReflectedBM:
                path.states[k] = std::fabs(w);
                break;
            case ProcessVariant::AbsorbedBM: {
                if (w <= 0.0) {
                    absorbed = true;
                } else if (options.bridge_correction && prev > 0.0) {
                    const double p = std::exp(-2.0 * prev * w / dt);
                    if (rng.next_uniform() < p) absorbed = true;
                }
                if (absorbed) {
                    path.absorbed = true;
                    path.absorption_time = t;
                    path.states[k] = 0.0;
                    w = 0.0;
                } else {
                    path.states[k] = w;
                }
                break;
            }
        }
    }
    return path;
}

}  // namespace ostop
