#include "ostop/verification.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ostop/free_boundary.hpp"

namespace ostop {

namespace {

// Strict-inequality margin classifying a grid point as inside D.
constexpr double kStrictEps = 1e-12;

// Offsets for the two-sided limit and one-sided difference quotients at
// a detected boundary.
constexpr double kSideOffset = 1e-8;

double refine_boundary(const std::function<double(double)>& gap, double lo,
                       double hi) {
    // gap(lo) > kStrictEps != gap(hi) > kStrictEps on entry.
    const bool lo_inside = gap(lo) > kStrictEps;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if ((gap(mid) > kStrictEps) == lo_inside)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * std::max(1.0, std::fabs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Candidate build_candidate(StoppingProblem problem, PiecewiseFunction psi,
                          std::function<double(double)> value) {
    if (!value) throw std::invalid_argument("candidate value is null");
    return {std::move(problem), std::move(psi), std::move(value)};
}

Candidate make_example_candidate(ExampleId id, DiscountRate alpha,
                                 std::optional<double> x0) {
    const double threshold =
        x0.has_value() ? *x0 : solve_threshold(id, alpha).x0;
    Candidate c;
    c.problem = make_problem(id, alpha);
    c.psi = make_psi(id, alpha, threshold);
    c.value = ClosedFormValue(id, alpha, threshold);
    return c;
}

VerificationReport check_conditions(const Candidate& candidate,
                                    std::span<const double> grid,
                                    double tol_value, double tol_derivative,
                                    double fd_step) {
    if (!(fd_step > 0.0)) throw std::invalid_argument("fd_step must be positive");
    if (grid.size() < 3)
        throw std::invalid_argument("grid needs at least 3 points");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("grid must be sorted");
    const ProcessKind kind = candidate.problem.kind;
    for (double x : grid)
        if (!kind.contains(x))
            throw std::invalid_argument("grid point outside the state space");

    VerificationReport report;
    report.grid.assign(grid.begin(), grid.end());
    report.tol_value = tol_value;
    report.tol_derivative = tol_derivative;

    const auto& value = candidate.value;
    const auto& f = candidate.problem.running;
    const auto& g = candidate.problem.terminal;
    const auto& psi = candidate.psi;
    const auto gap = [&](double x) { return value(x) - g(x); };

    const std::size_t n = grid.size();
    std::vector<double> margin(n), psi_margin(n);
    std::vector<char> inside(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid[i];
        margin[i] = gap(x);
        psi_margin[i] = psi(x) - f(x);
        inside[i] = margin[i] > kStrictEps;
    }

    auto& cond_value = report.value_dominates_terminal;
    cond_value.worst = *std::min_element(margin.begin(), margin.end());
    cond_value.pass = cond_value.worst >= -tol_value;

    auto& cond_psi = report.psi_dominates_running;
    cond_psi.worst = *std::min_element(psi_margin.begin(), psi_margin.end());
    cond_psi.pass = cond_psi.worst >= -tol_value;

    auto& cond_match = report.psi_matches_running_on_region;
    cond_match.worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (inside[i])
            cond_match.worst =
                std::max(cond_match.worst, std::fabs(psi_margin[i]));
    cond_match.pass = cond_match.worst <= tol_value;

    // Locate region boundaries between grid points of opposite
    // classification and refine each by bisection.
    std::vector<std::pair<std::size_t, double>> boundaries;  // (left index, location)
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (inside[i] == inside[i + 1]) continue;
        boundaries.emplace_back(i, refine_boundary(gap, grid[i], grid[i + 1]));
        const std::size_t below = i + 1;
        const std::size_t above = n - below;
        if (below < 3 || above < 3)
            throw std::invalid_argument(
                "grid needs at least 3 points on each side of a boundary");
    }

    // Continuity and pasting are examined at every detected region
    // boundary and additionally at the candidate's own kinks (the psi
    // breakpoints): a misplaced threshold keeps its value kink away
    // from the region boundary, and the kink is where the mismatch
    // shows.
    std::vector<double> check_locations;
    for (const auto& [left_index, b] : boundaries) check_locations.push_back(b);
    for (double bp : psi.breakpoints()) {
        if (!(bp > grid.front() && bp < grid.back())) continue;
        bool near_boundary = false;
        for (const auto& [left_index, b] : boundaries)
            near_boundary =
                near_boundary ||
                std::fabs(bp - b) < 1e-3 * (1.0 + std::fabs(bp));
        if (!near_boundary) check_locations.push_back(bp);
    }

    for (double b : check_locations) {
        BoundaryCheck check;
        check.location = b;
        const double d = kSideOffset;
        const double h = fd_step;
        check.jump = std::fabs(value(b + d) - value(b - d));
        check.continuity_pass = check.jump <= tol_value;
        if (b - d - h >= kind.state_lower_bound()) {
            const double left =
                (value(b - d) - value(b - d - h)) / h;
            const double right =
                (value(b + d + h) - value(b + d)) / h;
            check.derivative_gap = std::fabs(right - left);
        } else {
            // Stencil would leave the state space; the boundary sits on
            // the barrier and there is no interior side to compare.
            check.derivative_gap = 0.0;
        }
        check.pasting_pass = check.derivative_gap <= tol_derivative;
        report.worst_jump = std::max(report.worst_jump, check.jump);
        report.worst_derivative_gap =
            std::max(report.worst_derivative_gap, check.derivative_gap);
        report.continuity_pass =
            report.continuity_pass && check.continuity_pass;
        report.smooth_pasting_pass =
            report.smooth_pasting_pass && check.pasting_pass;
        report.boundaries.push_back(check);
    }

    // Assemble the region intervals over the checked window. Endpoints
    // at the grid edge are closed (membership measured there); endpoints
    // at a refined boundary are open (strict inequality fails there).
    const auto boundary_after = [&](std::size_t left_index) {
        for (const auto& [idx, loc] : boundaries)
            if (idx == left_index) return loc;
        throw std::logic_error("missing refined boundary");
    };
    std::size_t i = 0;
    while (i < n) {
        if (!inside[i]) {
            ++i;
            continue;
        }
        RegionInterval interval;
        if (i == 0) {
            interval.lo = grid.front();
            interval.lo_closed = true;
        } else {
            interval.lo = boundary_after(i - 1);
            interval.lo_closed = false;
        }
        while (i + 1 < n && inside[i + 1]) ++i;
        if (i == n - 1) {
            interval.hi = grid.back();
            interval.hi_closed = true;
        } else {
            interval.hi = boundary_after(i);
            interval.hi_closed = false;
        }
        report.region.intervals.push_back(interval);
        ++i;
    }
    if (boundaries.size() == 1)
        report.region.threshold = boundaries.front().second;

    return report;
}

std::function<bool(double)> stopping_rule(const ContinuationRegion& region) {
    return [region](double x) { return !region.contains(x); };
}

std::vector<double> default_grid(ExampleId id, DiscountRate alpha, double x0,
                                 int n) {
    if (n < 7) throw std::invalid_argument("grid needs at least 7 points");
    const double margin = 2.5 / std::sqrt(2.0 * alpha.value);
    const double floor = example_process(id).state_lower_bound();
    const double lo = std::max(x0 - margin, floor);
    const double hi = x0 + margin;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[i] = lo + (hi - lo) * i / (n - 1);
    return grid;
}

}  // namespace ostop
