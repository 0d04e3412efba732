#pragma once

#include <cstdint>

#include "slv/simulator.hpp"

namespace slv {

struct WilsonInterval {
    double low = 0, high = 1;
};

/// Wilson 95% confidence interval for a binomial proportion.
WilsonInterval wilson95(std::uint64_t successes, std::uint64_t n);

/// Finite-horizon, finite-threshold estimate of the extinction probability:
/// success means Y absorbed by t_max.  Censored replicas (alive at the
/// horizon) are never counted as successes; they are the reason p_hat only
/// bounds the asymptotic probability from below.
struct EstimateResult {
    std::uint64_t n = 0;
    std::uint64_t successes = 0;
    std::uint64_t censored = 0; // reached t_max with Y alive
    std::uint64_t errors = 0;   // numeric failures, reported separately
    std::uint64_t exploded = 0; // explosion-guard hits (numerical anomalies)
    double p_hat = 0;
    double ci_low = 0, ci_high = 1;
    double mean_tau_y = 0, sd_tau_y = 0; // over extinct replicas
    // config echo
    double dt = 0, t_max = 0, eps_abs = 0;
    std::uint64_t seed = 0;
};

/// Runs n independent replicas with stream_id = replica index.  The result is
/// bit-identical for any thread count: replicas are statically partitioned
/// and reduced in index order.  With exclude_errors, numeric-failure replicas
/// leave the denominator (they always stay out of the numerator).
EstimateResult estimate_extinction(const PowerModel& m, const SimConfig& cfg,
                                   std::uint64_t n, std::uint64_t seed,
                                   int threads = 1, bool exclude_errors = false);

/// First time X leaves the corridor (xi, zeta): mean of tau_xi ^ sigma_zeta
/// with a normal-approximation interval over uncensored replicas.
struct HittingTimeEstimate {
    std::uint64_t n = 0;
    std::uint64_t censored = 0; // never left the corridor by t_max
    std::uint64_t errors = 0;
    double mean = 0, sd = 0;
    double ci_low = 0, ci_high = 0;
    double xi = 0, zeta = 0;
};

HittingTimeEstimate estimate_hitting_time(const PowerModel& m,
                                          const SimConfig& cfg, double xi,
                                          double zeta, std::uint64_t n,
                                          std::uint64_t seed, int threads = 1);

/// P{ sup_t X_t >= eps1 } started from X_0 = eps2 <= eps1.
struct SupBoundEstimate {
    std::uint64_t n = 0;
    std::uint64_t hits = 0;
    double p_hat = 0;
    double ci_low = 0, ci_high = 1;
    double eps1 = 0, eps2 = 0;
};

SupBoundEstimate sup_bound_probe(const PowerModel& m, const SimConfig& cfg,
                                 double eps1, double eps2, std::uint64_t n,
                                 std::uint64_t seed, int threads = 1);

/// Replicated comparison runs; violation counts aggregate over replicas.
struct CoupledReplicaStats {
    std::uint64_t n = 0;
    std::uint64_t violations = 0;
    std::uint64_t replicas_with_violation = 0;
    double max_violation = 0;
    std::uint64_t errors = 0;
};

CoupledReplicaStats coupled_replicas(const CoupledSpec& spec,
                                     const SimConfig& cfg, double x1_0,
                                     double x2_0, std::uint64_t n,
                                     std::uint64_t seed, int threads = 1,
                                     double tol_order = 1e-12);

} // namespace slv
