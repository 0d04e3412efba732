#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "slv/coefficients.hpp"
#include "slv/rng.hpp"
#include "slv/stable.hpp"

namespace slv {

/// What to do when a coordinate crosses the absorption threshold within a
/// step: treat it as extinction, or clip back to the threshold (for regimes
/// where hitting zero is a discretization artifact).
enum class PositivityPolicy { Absorb, ClipToEpsilon };

struct SimConfig {
    double dt = 1e-3;
    double t_max = 10.0;
    double eps_abs = 1e-9; // state <= eps_abs counts as "at zero"
    double x_cap = 1e6;    // explosion guard; the dynamics preclude explosion
    double x0 = 1.0;
    double y0 = 1.0;
    std::uint64_t snapshot_stride = 0; // 0 = no snapshots
    PositivityPolicy policy_x = PositivityPolicy::ClipToEpsilon;
    PositivityPolicy policy_y = PositivityPolicy::Absorb;
    std::vector<double> x_down_thresholds; // tau levels for X (first x <= xi)
    std::vector<double> x_up_thresholds;   // sigma levels for X (first x >= xi)
    bool stop_on_y_absorption = false;
    bool x_only = false; // skip the Y coordinate entirely

    void validate() const;
};

struct Snapshot {
    double t, x, y;
};

struct TrajectoryOutcome {
    double final_x = 0, final_y = 0;
    std::optional<double> tau_x, tau_y;                  // absorption times
    std::vector<std::optional<double>> x_down_hits;      // aligned with config
    std::vector<std::optional<double>> x_up_hits;
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;   // over alive states
    std::uint64_t steps_taken = 0;
    bool exploded = false;
    bool numeric_error = false;
    std::vector<Snapshot> snapshots;
};

/// Power model compiled to flat exponents for the inner loop.
struct CompiledModel {
    double a1, a2, a3, b1, b2, b3, eta;
    double ea1, ea2, ea3, eb1, eb2, eb3, etheta, kappa;
    double alpha1, alpha2;

    static CompiledModel compile(const PowerModel& m);
    double drift_x(double x) const;
    double diffusion2_x(double x) const; // a2(x)
    double jump_rate_x(double x) const;  // a3(x)
    double drift_y(double x, double y) const;
    double diffusion2_y(double y) const;
    double jump_rate_y(double y) const;
};

/// Standard draws feeding one step; jump draws are unit-scale stable variates
/// rescaled by (rate * dt)^{1/alpha} inside the step (exact in law by
/// self-similarity).
struct StepDraws {
    double gauss_x = 0, gauss_y = 0;
    double stable_x = 0, stable_y = 0;
};

struct StepResult {
    double x, y;
    bool x_crossed = false; // went at or below eps_abs this step
    bool y_crossed = false;
};

/// One Euler step from (x,y), both coordinates alive.  Positivity policies
/// are applied by the caller; this reports the raw crossing flags.
StepResult step(const CompiledModel& m, const SimConfig& cfg, double x,
                double y, const StepDraws& draws);

/// Full path with event detection.  Deterministic given (model, config,
/// init, stream): replica draws depend only on the stream ids, never on
/// thread scheduling or on t_max (a longer horizon extends the same path).
TrajectoryOutcome simulate_path(const PowerModel& m, const SimConfig& cfg,
                                double x0, double y0, RngStream base);

/// One-dimensional comparison harness: two drifts sharing every draw.
struct CoupledSpec {
    std::function<double(double t, double u)> drift1, drift2;
    std::function<double(double u)> diffusion; // shared U
    std::function<double(double u)> jump_rate; // shared nondecreasing V
    double alpha = 1.5;
};

struct CoupledOutcome {
    double final_x1 = 0, final_x2 = 0;
    std::uint64_t steps_taken = 0;
    std::uint64_t violations = 0;    // steps with x1 > x2 + tol
    double max_violation = 0;
    std::optional<double> first_violation_t;
    bool exploded = false;
    bool numeric_error = false;
};

/// Simulates both paths with the same Gaussian and stable draws per step;
/// each path scales the shared jump draw by its own (V(x) dt)^{1/alpha}.
/// Ordering x1 <= x2 is reported, not asserted: with state-dependent V the
/// discrete coupling can break it, so callers get violation statistics.
CoupledOutcome simulate_coupled(const CoupledSpec& spec, const SimConfig& cfg,
                                double x1_0, double x2_0, RngStream base,
                                double tol_order = 1e-12);

} // namespace slv
