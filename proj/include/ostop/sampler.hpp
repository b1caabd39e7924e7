#pragma once

#include <limits>
#include <vector>

#include "ostop/process.hpp"
#include "ostop/rng.hpp"

namespace ostop {

/// A discretely sampled path on the uniform grid 0, dt, 2 dt, ...
struct SamplePath {
    std::vector<double> times;
    std::vector<double> states;
    bool absorbed = false;
    /// Grid time at which absorption was detected (NaN if never).
    double absorption_time = std::numeric_limits<double>::quiet_NaN();
};

struct SamplerOptions {
    /// Brownian-bridge crossing correction for absorbed paths: when two
    /// consecutive states are positive, absorb with probability
    /// exp(-2 x_k x_{k+1} / dt). Removes the O(sqrt(dt)) undercount of
    /// barrier crossings on a discrete grid.
    bool bridge_correction = true;
};

/// Exact-in-law samplers for the three variants.
///
/// Standard: Gaussian increments. Reflected: the absolute value of a
/// standard path started at x0 (no Euler reflection step). Absorbed:
/// a standard path frozen at 0 from the first grid step whose sign
/// crosses, with the optional bridge correction above; once absorbed
/// the state stays 0.
SamplePath sample_path(ProcessKind kind, double x0, double dt, double horizon,
                       RngStream& rng, const SamplerOptions& options = {});

}  // namespace ostop
