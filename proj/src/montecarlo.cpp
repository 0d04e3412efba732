#include "slv/montecarlo.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace slv {

namespace {

// Static partition of [0,n) over workers; per_replica(i) must only touch
// slot i of its output arrays.  Worker count never affects any value.
template <class Fn>
void parallel_replicas(std::uint64_t n, int threads, const Fn& per_replica) {
    if (threads <= 1 || n < 2) {
        for (std::uint64_t i = 0; i < n; ++i) per_replica(i);
        return;
    }
    const std::uint64_t workers =
        std::min<std::uint64_t>(std::uint64_t(threads), n);
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t lo = n * w / workers;
        const std::uint64_t hi = n * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::uint64_t i = lo; i < hi; ++i) per_replica(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace

WilsonInterval wilson95(std::uint64_t successes, std::uint64_t n) {
    if (n == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double z2 = z * z;
    const double nn = double(n);
    const double p = double(successes) / nn;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

EstimateResult estimate_extinction(const PowerModel& m, const SimConfig& cfg,
                                   std::uint64_t n, std::uint64_t seed,
                                   int threads, bool exclude_errors) {
    if (n == 0) throw ConfigError("estimate needs at least one replica");
    SimConfig run_cfg = cfg;
    run_cfg.stop_on_y_absorption = true;
    run_cfg.validate();

    struct Slot {
        double tau_y = 0;
        bool success = false, error = false, exploded = false;
    };
    std::vector<Slot> slots(n);
    parallel_replicas(n, threads, [&](std::uint64_t i) {
        const TrajectoryOutcome o =
            simulate_path(m, run_cfg, run_cfg.x0, run_cfg.y0, RngStream(seed, i));
        Slot& s = slots[i];
        s.error = o.numeric_error;
        s.exploded = o.exploded;
        if (!s.error && o.tau_y) {
            s.success = true;
            s.tau_y = *o.tau_y;
        }
    });

    EstimateResult r;
    r.n = n;
    r.seed = seed;
    r.dt = run_cfg.dt;
    r.t_max = run_cfg.t_max;
    r.eps_abs = run_cfg.eps_abs;
    double sum = 0, sum2 = 0;
    for (const Slot& s : slots) { // fixed reduction order
        if (s.error) {
            ++r.errors;
            continue;
        }
        if (s.exploded) ++r.exploded;
        if (s.success) {
            ++r.successes;
            sum += s.tau_y;
            sum2 += s.tau_y * s.tau_y;
        } else {
            ++r.censored;
        }
    }
    const std::uint64_t denom = exclude_errors ? n - r.errors : n;
    r.p_hat = denom == 0 ? 0.0 : double(r.successes) / double(denom);
    const WilsonInterval w = wilson95(r.successes, denom);
    r.ci_low = w.low;
    r.ci_high = w.high;
    if (r.successes > 0) {
        r.mean_tau_y = sum / double(r.successes);
        const double var =
            std::max(0.0, sum2 / double(r.successes) - r.mean_tau_y * r.mean_tau_y);
        r.sd_tau_y = std::sqrt(var);
    }
    return r;
}

HittingTimeEstimate estimate_hitting_time(const PowerModel& m,
                                          const SimConfig& cfg, double xi,
                                          double zeta, std::uint64_t n,
                                          std::uint64_t seed, int threads) {
    if (!(0 < xi && xi < cfg.x0 && cfg.x0 < zeta))
        throw DomainError("need 0 < xi < x0 < zeta");
    SimConfig run_cfg = cfg;
    run_cfg.x_only = true;
    run_cfg.x_down_thresholds = {xi};
    run_cfg.x_up_thresholds = {zeta};
    run_cfg.validate();

    struct Slot {
        double time = 0;
        bool hit = false, error = false;
    };
    std::vector<Slot> slots(n);
    parallel_replicas(n, threads, [&](std::uint64_t i) {
        const TrajectoryOutcome o =
            simulate_path(m, run_cfg, run_cfg.x0, 0.0, RngStream(seed, i));
        Slot& s = slots[i];
        s.error = o.numeric_error;
        if (s.error) return;
        const auto& down = o.x_down_hits[0];
        const auto& up = o.x_up_hits[0];
        if (down || up) {
            s.hit = true;
            if (down && up)
                s.time = std::min(*down, *up);
            else
                s.time = down ? *down : *up;
        }
    });

    HittingTimeEstimate r;
    r.n = n;
    r.xi = xi;
    r.zeta = zeta;
    double sum = 0, sum2 = 0;
    std::uint64_t hits = 0;
    for (const Slot& s : slots) {
        if (s.error) {
            ++r.errors;
            continue;
        }
        if (!s.hit) {
            ++r.censored;
            continue;
        }
        ++hits;
        sum += s.time;
        sum2 += s.time * s.time;
    }
    if (hits > 0) {
        r.mean = sum / double(hits);
        r.sd = std::sqrt(std::max(0.0, sum2 / double(hits) - r.mean * r.mean));
        const double half = 1.959963984540054 * r.sd / std::sqrt(double(hits));
        r.ci_low = r.mean - half;
        r.ci_high = r.mean + half;
    }
    return r;
}

SupBoundEstimate sup_bound_probe(const PowerModel& m, const SimConfig& cfg,
                                 double eps1, double eps2, std::uint64_t n,
                                 std::uint64_t seed, int threads) {
    if (!(0 < eps2 && eps2 <= eps1))
        throw DomainError("need 0 < eps2 <= eps1");
    SimConfig run_cfg = cfg;
    run_cfg.x_only = true;
    run_cfg.x0 = eps2;
    run_cfg.x_up_thresholds = {eps1};
    run_cfg.x_down_thresholds.clear();
    run_cfg.validate();

    std::vector<unsigned char> hit(n, 0);
    parallel_replicas(n, threads, [&](std::uint64_t i) {
        const TrajectoryOutcome o =
            simulate_path(m, run_cfg, run_cfg.x0, 0.0, RngStream(seed, i));
        hit[i] = o.x_up_hits[0].has_value() ? 1 : 0;
    });

    SupBoundEstimate r;
    r.n = n;
    r.eps1 = eps1;
    r.eps2 = eps2;
    for (unsigned char h : hit) r.hits += h;
    r.p_hat = n == 0 ? 0.0 : double(r.hits) / double(n);
    const WilsonInterval w = wilson95(r.hits, n);
    r.ci_low = w.low;
    r.ci_high = w.high;
    return r;
}

CoupledReplicaStats coupled_replicas(const CoupledSpec& spec,
                                     const SimConfig& cfg, double x1_0,
                                     double x2_0, std::uint64_t n,
                                     std::uint64_t seed, int threads,
                                     double tol_order) {
    struct Slot {
        std::uint64_t violations = 0;
        double max_violation = 0;
        bool error = false;
    };
    std::vector<Slot> slots(n);
    parallel_replicas(n, threads, [&](std::uint64_t i) {
        const CoupledOutcome o = simulate_coupled(spec, cfg, x1_0, x2_0,
                                                  RngStream(seed, i), tol_order);
        slots[i].violations = o.violations;
        slots[i].max_violation = o.max_violation;
        slots[i].error = o.numeric_error;
    });
    CoupledReplicaStats r;
    r.n = n;
    for (const Slot& s : slots) {
        if (s.error) ++r.errors;
        r.violations += s.violations;
        if (s.violations > 0) ++r.replicas_with_violation;
        r.max_violation = std::max(r.max_violation, s.max_violation);
    }
    return r;
}

} // namespace slv
