#pragma once

#include <functional>

namespace ostop {

struct RootResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Brent's method on a sign-changing bracket [lo, hi]. Converges when
/// both the bracket width and |f(root)| drop below tol, capped at
/// max_iterations. Throws std::invalid_argument when f(lo) and f(hi)
/// do not bracket a root.
RootResult brent_root(const std::function<double(double)>& f, double lo,
                      double hi, double tol, int max_iterations = 200);

}  // namespace ostop
