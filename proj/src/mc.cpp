#include "ostop/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "ostop/rng.hpp"

namespace ostop {

namespace {

constexpr std::int64_t kBlockSize = 4096;

void validate(const McConfig& config, ProcessKind kind, double start) {
    if (config.paths < 1) throw std::invalid_argument("paths must be >= 1");
    if (!(config.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (config.horizon > 0.0 && config.horizon < config.dt)
        throw std::invalid_argument("horizon must be >= dt");
    if (!kind.contains(start))
        throw std::domain_error("start state outside the state space");
}

double effective_horizon(const McConfig& config, double alpha) {
    return config.horizon > 0.0 ? config.horizon : 40.0 / alpha;
}

int worker_count(const McConfig& config) {
    if (config.threads > 0) return config.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Deterministic blocked reduction: workers claim fixed blocks of units,
// per-block partial sums are combined in block order, so the result is
// bit-identical for any worker count.
void run_blocked(std::int64_t units, int threads, std::size_t width,
                 const std::function<void(std::int64_t, double*)>& per_unit,
                 double* totals) {
    const std::int64_t blocks = (units + kBlockSize - 1) / kBlockSize;
    std::vector<double> partials(static_cast<std::size_t>(blocks) * width, 0.0);
    std::atomic<std::int64_t> next{0};

    const auto worker = [&] {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= blocks) break;
            double* acc = partials.data() + static_cast<std::size_t>(b) * width;
            const std::int64_t lo = b * kBlockSize;
            const std::int64_t hi = std::min(units, lo + kBlockSize);
            for (std::int64_t u = lo; u < hi; ++u) per_unit(u, acc);
        }
    };

    const int n_threads = std::max(
        1, std::min<int>(threads, static_cast<int>(std::min<std::int64_t>(
               blocks, std::numeric_limits<int>::max()))));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::fill(totals, totals + width, 0.0);
    for (std::int64_t b = 0; b < blocks; ++b) {
        const double* acc = partials.data() + static_cast<std::size_t>(b) * width;
        for (std::size_t j = 0; j < width; ++j) totals[j] += acc[j];
    }
}

// One grid step of the chosen variant; tracks the underlying free path
// so reflected states are exact in law and absorbed states are frozen
// at the first (bridge-corrected) crossing.
struct PathSim {
    ProcessVariant variant;
    double dt;
    double sqrt_dt;
    bool bridge;
    double sign;

    double w = 0.0;
    double state = 0.0;
    bool absorbed = false;

    void reset(double x0) {
        w = x0;
        state = x0;
        absorbed = variant == ProcessVariant::AbsorbedBM && x0 <= 0.0;
        if (absorbed) state = 0.0;
    }

    void step(RngStream& rng) {
        if (absorbed) return;
        const double prev = state;
        w += sqrt_dt * sign * rng.next_normal();
        switch (variant) {
            case ProcessVariant::StandardBM:
                state = w;
                break;
            case ProcessVariant::ReflectedBM:
                state = std::fabs(w);
                break;
            case ProcessVariant::AbsorbedBM:
                if (w <= 0.0) {
                    absorbed = true;
                } else if (bridge && prev > 0.0 &&
                           rng.next_uniform() < std::exp(-2.0 * prev * w / dt)) {
                    absorbed = true;
                }
                if (absorbed) {
                    state = 0.0;
                    w = 0.0;
                } else {
                    state = w;
                }
                break;
        }
    }
};

double linear_growth_constant(const PiecewiseFunction& fn, ProcessKind kind,
                              double start, double horizon) {
    const double reach = std::fabs(start) + 4.0 * std::sqrt(horizon) + 1.0;
    double k = 0.0;
    const double probes[] = {0.0, 1.0, -1.0, start, reach, -reach,
                             0.5 * reach, -0.5 * reach};
    for (double y : probes) {
        if (!kind.contains(y)) continue;
        k = std::max(k, std::fabs(fn(y)) / (1.0 + std::fabs(y)));
    }
    return k;
}

McEstimate finish_estimate(double sum, double sum_sq, std::int64_t units,
                           std::int64_t paths_used, double truncation_bound) {
    McEstimate e;
    e.paths_used = paths_used;
    e.truncation_bound = truncation_bound;
    e.mean = sum / static_cast<double>(units);
    if (units > 1) {
        const double variance =
            std::max(0.0, (sum_sq - sum * e.mean) / static_cast<double>(units - 1));
        e.std_error = std::sqrt(variance / static_cast<double>(units));
    }
    return e;
}

}  // namespace

McEstimate estimate_value(const StoppingProblem& problem,
                          const std::function<bool(double)>& rule,
                          double start, const McConfig& config) {
    validate(config, problem.kind, start);
    if (!rule) throw std::invalid_argument("stopping rule is null");

    const double alpha = problem.alpha;
    const double horizon = effective_horizon(config, alpha);
    const auto n_steps =
        static_cast<std::int64_t>(std::ceil(horizon / config.dt - 1e-12));
    const double decay = std::exp(-alpha * config.dt);
    const bool has_running = !problem.running.is_zero();
    const auto& running = problem.running;
    const auto& terminal = problem.terminal;

    // tau = 0 branch: the outcome is deterministic, return it exactly.
    const bool absorbed_at_start =
        problem.kind.variant == ProcessVariant::AbsorbedBM && start <= 0.0;
    if (absorbed_at_start || rule(start)) {
        McEstimate exact;
        exact.mean = terminal(absorbed_at_start ? 0.0 : start);
        exact.paths_used = config.paths;
        return exact;
    }

    const auto simulate_one = [&](RngStream& rng, double sign) -> double {
        PathSim sim{problem.kind.variant, config.dt, std::sqrt(config.dt),
                    config.bridge_correction, sign};
        sim.reset(start);
        if (sim.absorbed) return terminal(0.0);
        if (rule(start)) return terminal(start);

        double disc = 1.0;
        double run = 0.0;
        double f_prev = has_running ? running(start) : 0.0;
        for (std::int64_t k = 0; k < n_steps; ++k) {
            sim.step(rng);
            const double disc_prev = disc;
            disc *= decay;
            if (sim.absorbed) {
                if (has_running)
                    run += 0.5 * config.dt * (disc_prev * f_prev + disc * running(0.0));
                return run + disc * terminal(0.0);
            }
            if (has_running) {
                const double f_here = running(sim.state);
                run += 0.5 * config.dt * (disc_prev * f_prev + disc * f_here);
                f_prev = f_here;
            }
            if (rule(sim.state)) return run + disc * terminal(sim.state);
        }
        return run;
    };

    const bool anti = config.antithetic;
    const std::int64_t units = anti ? config.paths / 2 : config.paths;
    if (units < 1) throw std::invalid_argument("antithetic needs >= 2 paths");

    const auto per_unit = [&](std::int64_t u, double* acc) {
        double v;
        if (anti) {
            RngStream plus(config.seed, static_cast<std::uint64_t>(u));
            RngStream minus(config.seed, static_cast<std::uint64_t>(u));
            v = 0.5 * (simulate_one(plus, 1.0) + simulate_one(minus, -1.0));
        } else {
            RngStream rng(config.seed, static_cast<std::uint64_t>(u));
            v = simulate_one(rng, 1.0);
        }
        acc[0] += v;
        acc[1] += v * v;
    };

    double totals[2];
    run_blocked(units, worker_count(config), 2, per_unit, totals);

    const double envelope = 1.0 + std::fabs(start) + std::sqrt(horizon) +
                            1.0 / std::sqrt(2.0 * alpha);
    const double k_g =
        linear_growth_constant(terminal, problem.kind, start, horizon);
    const double k_f =
        linear_growth_constant(running, problem.kind, start, horizon);
    const double bound =
        std::exp(-alpha * horizon) * envelope * (k_g + k_f / alpha);

    return finish_estimate(totals[0], totals[1], units,
                           anti ? 2 * units : units, bound);
}

SweepResult threshold_sweep(const StoppingProblem& problem,
                            ThresholdSide side,
                            std::span<const double> thresholds, double start,
                            const McConfig& config) {
    validate(config, problem.kind, start);
    if (thresholds.empty()) throw std::invalid_argument("no thresholds");
    for (std::size_t j = 0; j + 1 < thresholds.size(); ++j)
        if (!(thresholds[j] < thresholds[j + 1]))
            throw std::invalid_argument("thresholds must be strictly increasing");

    const std::size_t m = thresholds.size();
    const double alpha = problem.alpha;
    const double horizon = effective_horizon(config, alpha);
    const auto n_steps =
        static_cast<std::int64_t>(std::ceil(horizon / config.dt - 1e-12));
    const double decay = std::exp(-alpha * config.dt);
    const bool has_running = !problem.running.is_zero();
    const auto& running = problem.running;
    const auto& terminal = problem.terminal;
    const bool stop_above = side == ThresholdSide::StopAbove;

    // One pass per path resolves every threshold at its own crossing
    // (common random numbers across the sweep).
    const auto simulate_one = [&](RngStream& rng, double sign, double* vals) {
        PathSim sim{problem.kind.variant, config.dt, std::sqrt(config.dt),
                    config.bridge_correction, sign};
        sim.reset(start);

        // Unresolved thresholds form a contiguous range; `cursor` walks
        // toward the far end in crossing order.
        std::ptrdiff_t cursor = stop_above ? 0 : static_cast<std::ptrdiff_t>(m) - 1;
        const auto done = [&] {
            return stop_above ? cursor >= static_cast<std::ptrdiff_t>(m)
                              : cursor < 0;
        };
        const auto crossed = [&](double x) {
            return stop_above ? x >= thresholds[static_cast<std::size_t>(cursor)]
                              : x <= thresholds[static_cast<std::size_t>(cursor)];
        };
        const auto resolve = [&](double contribution) {
            vals[stop_above ? cursor++ : cursor--] = contribution;
        };

        double disc = 1.0;
        double run = 0.0;

        if (sim.absorbed) {
            while (!done()) resolve(terminal(0.0));
            return;
        }
        while (!done() && crossed(start)) resolve(terminal(start));

        double f_prev = has_running ? running(start) : 0.0;
        for (std::int64_t k = 0; k < n_steps && !done(); ++k) {
            sim.step(rng);
            const double disc_prev = disc;
            disc *= decay;
            if (sim.absorbed) {
                if (has_running)
                    run += 0.5 * config.dt * (disc_prev * f_prev + disc * running(0.0));
                while (!done()) resolve(run + disc * terminal(0.0));
                return;
            }
            if (has_running) {
                const double f_here = running(sim.state);
                run += 0.5 * config.dt * (disc_prev * f_prev + disc * f_here);
                f_prev = f_here;
            }
            while (!done() && crossed(sim.state))
                resolve(run + disc * terminal(sim.state));
        }
        while (!done()) resolve(run);
    };

    const bool anti = config.antithetic;
    const std::int64_t units = anti ? config.paths / 2 : config.paths;
    if (units < 1) throw std::invalid_argument("antithetic needs >= 2 paths");

    const auto per_unit = [&](std::int64_t u, double* acc) {
        thread_local std::vector<double> vals, vals_minus;
        vals.assign(m, 0.0);
        if (anti) {
            vals_minus.assign(m, 0.0);
            RngStream plus(config.seed, static_cast<std::uint64_t>(u));
            RngStream minus(config.seed, static_cast<std::uint64_t>(u));
            simulate_one(plus, 1.0, vals.data());
            simulate_one(minus, -1.0, vals_minus.data());
            for (std::size_t j = 0; j < m; ++j)
                vals[j] = 0.5 * (vals[j] + vals_minus[j]);
        } else {
            RngStream rng(config.seed, static_cast<std::uint64_t>(u));
            simulate_one(rng, 1.0, vals.data());
        }
        for (std::size_t j = 0; j < m; ++j) {
            acc[2 * j] += vals[j];
            acc[2 * j + 1] += vals[j] * vals[j];
        }
    };

    std::vector<double> totals(2 * m);
    run_blocked(units, worker_count(config), 2 * m, per_unit, totals.data());

    const double envelope = 1.0 + std::fabs(start) + std::sqrt(horizon) +
                            1.0 / std::sqrt(2.0 * alpha);
    const double k_g =
        linear_growth_constant(terminal, problem.kind, start, horizon);
    const double k_f =
        linear_growth_constant(running, problem.kind, start, horizon);
    const double bound =
        std::exp(-alpha * horizon) * envelope * (k_g + k_f / alpha);

    SweepResult result;
    result.points.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        result.points[j].threshold = thresholds[j];
        result.points[j].estimate =
            finish_estimate(totals[2 * j], totals[2 * j + 1], units,
                            anti ? 2 * units : units, bound);
    }

    result.argmax_index = 0;
    for (std::size_t j = 1; j < m; ++j)
        if (result.points[j].estimate.mean >
            result.points[result.argmax_index].estimate.mean)
            result.argmax_index = j;
    if (m > 1) {
        double second = -std::numeric_limits<double>::infinity();
        double second_se = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == result.argmax_index) continue;
            if (result.points[j].estimate.mean > second) {
                second = result.points[j].estimate.mean;
                second_se = result.points[j].estimate.std_error;
            }
        }
        const auto& best = result.points[result.argmax_index].estimate;
        const double denom = std::hypot(best.std_error, second_se);
        const double diff = best.mean - second;
        result.argmax_gap_z =
            denom > 0.0 ? diff / denom
                        : (diff > 0.0 ? std::numeric_limits<double>::infinity()
                                      : 0.0);
    }
    return result;
}

McEstimate discounted_identity_residual(
    ProcessKind kind, const PiecewiseFunction& psi, DiscountRate alpha,
    const std::function<double(double)>& resolvent_value, double start,
    const TauSpec& tau, const McConfig& config) {
    validate(config, kind, start);
    if (!resolvent_value)
        throw std::invalid_argument("resolvent value closure is null");
    if (tau.kind == TauSpec::Kind::FixedTime && !(tau.t0 >= 0.0))
        throw std::invalid_argument("fixed stopping time must be >= 0");
    if (tau.kind == TauSpec::Kind::ExitInterval && !(tau.lo < tau.hi))
        throw std::invalid_argument("exit interval must be nonempty");

    const double a = alpha.value;
    const double horizon = effective_horizon(config, a);
    const auto n_steps =
        static_cast<std::int64_t>(std::ceil(horizon / config.dt - 1e-12));
    const double decay = std::exp(-a * config.dt);
    const std::int64_t k_fixed =
        tau.kind == TauSpec::Kind::FixedTime
            ? std::min<std::int64_t>(
                  n_steps, static_cast<std::int64_t>(
                               std::ceil(tau.t0 / config.dt - 1e-12)))
            : n_steps;
    const double value_at_start = resolvent_value(start);

    const auto exited = [&](double x) {
        return tau.kind == TauSpec::Kind::ExitInterval &&
               !(x > tau.lo && x < tau.hi);
    };

    const auto simulate_one = [&](RngStream& rng, double sign) -> double {
        PathSim sim{kind.variant, config.dt, std::sqrt(config.dt),
                    config.bridge_correction, sign};
        sim.reset(start);
        double disc = 1.0;
        double run = 0.0;
        double psi_prev = psi(sim.state);
        std::int64_t k = 0;
        while (k < k_fixed && !exited(sim.state)) {
            sim.step(rng);
            ++k;
            const double disc_prev = disc;
            disc *= decay;
            const double psi_here = psi(sim.state);
            run += 0.5 * config.dt * (disc_prev * psi_prev + disc * psi_here);
            psi_prev = psi_here;
        }
        return disc * resolvent_value(sim.state) + run - value_at_start;
    };

    const bool anti = config.antithetic;
    const std::int64_t units = anti ? config.paths / 2 : config.paths;
    if (units < 1) throw std::invalid_argument("antithetic needs >= 2 paths");

    const auto per_unit = [&](std::int64_t u, double* acc) {
        double v;
        if (anti) {
            RngStream plus(config.seed, static_cast<std::uint64_t>(u));
            RngStream minus(config.seed, static_cast<std::uint64_t>(u));
            v = 0.5 * (simulate_one(plus, 1.0) + simulate_one(minus, -1.0));
        } else {
            RngStream rng(config.seed, static_cast<std::uint64_t>(u));
            v = simulate_one(rng, 1.0);
        }
        acc[0] += v;
        acc[1] += v * v;
    };

    double totals[2];
    run_blocked(units, worker_count(config), 2, per_unit, totals);
    return finish_estimate(totals[0], totals[1], units,
                           anti ? 2 * units : units, 0.0);
}

std::vector<TailPoint> uniform_integrability_proxy(
    ProcessKind kind, const std::function<double(double)>& value,
    const std::function<bool(double)>& rule, double start,
    std::span<const double> levels, const McConfig& config) {
    validate(config, kind, start);
    if (!value || !rule) throw std::invalid_argument("null closure");
    if (levels.empty()) throw std::invalid_argument("no levels");

    const double horizon = effective_horizon(config, 1.0);
    const auto n_steps =
        static_cast<std::int64_t>(std::ceil(horizon / config.dt - 1e-12));
    const std::size_t n_levels = levels.size();

    // Stopping-time candidates: the rule itself and fixed fractions of
    // the horizon (all are <= tau_rule-capped-at-horizon candidates for
    // the uniform-integrability family).
    const std::int64_t caps[] = {n_steps, n_steps / 8, n_steps / 4,
                                 n_steps / 2};

    std::vector<TailPoint> out(n_levels);
    for (std::size_t j = 0; j < n_levels; ++j) out[j].level = levels[j];

    for (std::int64_t cap : caps) {
        const std::int64_t effective_cap = std::max<std::int64_t>(1, cap);
        const auto per_unit = [&](std::int64_t u, double* acc) {
            RngStream rng(config.seed, static_cast<std::uint64_t>(u));
            PathSim sim{kind.variant, config.dt, std::sqrt(config.dt),
                        config.bridge_correction, 1.0};
            sim.reset(start);
            std::int64_t k = 0;
            while (k < effective_cap && !sim.absorbed && !rule(sim.state)) {
                sim.step(rng);
                ++k;
            }
            const double magnitude = std::fabs(value(sim.state));
            for (std::size_t j = 0; j < n_levels; ++j)
                if (magnitude > levels[j]) acc[j] += magnitude;
        };
        std::vector<double> totals(n_levels);
        run_blocked(config.paths, worker_count(config), n_levels, per_unit,
                    totals.data());
        for (std::size_t j = 0; j < n_levels; ++j)
            out[j].worst_tail =
                std::max(out[j].worst_tail,
                         totals[j] / static_cast<double>(config.paths));
    }
    return out;
}

}  // namespace ostop
