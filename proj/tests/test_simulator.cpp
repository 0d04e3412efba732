#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "slv/simulator.hpp"

using namespace slv;

namespace {

SimConfig quiet_config() {
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_max = 10.0;
    cfg.eps_abs = 1e-9;
    return cfg;
}

PowerModel pure_drift_x(double a1, double p1) {
    PowerModel m;
    m.a1 = a1;
    m.p1 = p1;
    return m;
}

} // namespace

TEST_CASE("zero dynamics leave the state unchanged") {
    PowerModel m; // every amplitude zero
    SimConfig cfg = quiet_config();
    const CompiledModel cm = CompiledModel::compile(m);
    const StepResult r = step(cm, cfg, 0.7, 1.3, StepDraws{1.0, -2.0, 3.0, 0.5});
    CHECK(r.x == 0.7);
    CHECK(r.y == 1.3);

    const TrajectoryOutcome o = simulate_path(m, cfg, 0.7, 1.3, RngStream(1, 0));
    CHECK(o.final_x == 0.7);
    CHECK(o.final_y == 1.3);
    CHECK(!o.tau_x);
    CHECK(!o.tau_y);
}

TEST_CASE("pure-drift X integrates the exact exponential") {
    PowerModel m = pure_drift_x(1.0, 0.0); // a1(u) = u
    SimConfig cfg = quiet_config();
    cfg.t_max = 1.0;
    cfg.eps_abs = 1e-12;
    cfg.x_only = true;

    auto run = [&](double dt) {
        SimConfig c = cfg;
        c.dt = dt;
        const TrajectoryOutcome o = simulate_path(m, c, 1.0, 0.0, RngStream(0, 0));
        return std::abs(o.final_x - std::exp(-1.0)) / std::exp(-1.0);
    };
    const double err = run(1e-4);
    CHECK(err <= 1e-3);
    const double err_half = run(5e-5);
    CHECK(err_half <= 0.51 * err);
}

TEST_CASE("larger frozen x pulls y down harder") {
    PowerModel m;
    m.eta = 1.0;
    m.theta_exp = 1.0;
    m.kappa_exp = 1.0;
    m.b1 = 0.5;
    m.q1 = 0.0;
    const CompiledModel cm = CompiledModel::compile(m);
    SimConfig cfg = quiet_config();
    const StepResult lo = step(cm, cfg, 1.0, 1.0, StepDraws{});
    const StepResult hi = step(cm, cfg, 2.0, 1.0, StepDraws{});
    CHECK(hi.y < lo.y);
    CHECK(hi.x <= 2.0); // drift is nonpositive
}

TEST_CASE("deterministic decay hits the threshold at the ODE time") {
    PowerModel m;
    m.b1 = 1.0;
    m.q1 = 0.0; // b1(u) = u
    SimConfig cfg = quiet_config();
    cfg.dt = 1e-3;
    cfg.t_max = 20.0;
    cfg.policy_y = PositivityPolicy::Absorb;

    cfg.eps_abs = 0.2; // short horizon: discretization error below one step
    TrajectoryOutcome o = simulate_path(m, cfg, 1.0, 1.0, RngStream(3, 0));
    REQUIRE(o.tau_y.has_value());
    CHECK(std::abs(*o.tau_y - std::log(1.0 / 0.2)) <= cfg.dt);

    cfg.eps_abs = 1e-6; // longer horizon: first-order Euler bias ~ tau dt/2
    o = simulate_path(m, cfg, 1.0, 1.0, RngStream(3, 0));
    REQUIRE(o.tau_y.has_value());
    const double tau_exact = std::log(1.0 / 1e-6);
    CHECK(std::abs(*o.tau_y - tau_exact) <= tau_exact * cfg.dt);
    CHECK(*o.tau_y <= cfg.t_max);
}

TEST_CASE("scheme preserves the linear mean despite multiplicative noise") {
    PowerModel m;
    m.a1 = 1.0;
    m.p1 = 0.0; // a1(u) = u: E[X_t] = x0 e^{-t}
    m.a2 = 0.5;
    m.p2 = 0.0; // multiplicative diffusion, mean-neutral
    SimConfig cfg = quiet_config();
    cfg.t_max = 1.0;
    cfg.eps_abs = 1e-12;
    cfg.x_only = true;
    const int n = 4000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        const TrajectoryOutcome o =
            simulate_path(m, cfg, 1.0, 0.0, RngStream(2020, i));
        sum += o.final_x;
        sq += o.final_x * o.final_x;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sq / n - mean * mean) / n);
    // statistical band plus the O(dt) weak bias of the scheme
    CHECK(std::abs(mean - std::exp(-1.0)) <= 4.0 * se + 5.0 * cfg.dt);
}

TEST_CASE("identical seeds reproduce the trajectory bit for bit") {
    const PowerModel m = fixtures::regime_iiib();
    SimConfig cfg = quiet_config();
    cfg.t_max = 5.0;
    cfg.snapshot_stride = 100;
    const TrajectoryOutcome a = simulate_path(m, cfg, 1.0, 1.0, RngStream(9, 3));
    const TrajectoryOutcome b = simulate_path(m, cfg, 1.0, 1.0, RngStream(9, 3));
    if (a.tau_y) CHECK(*a.tau_y <= cfg.t_max);
    if (!a.tau_x) {
        CHECK(a.min_x <= a.final_x);
        CHECK(a.final_x <= a.max_x);
    }
    CHECK(a.final_x == b.final_x);
    CHECK(a.final_y == b.final_y);
    CHECK(a.steps_taken == b.steps_taken);
    CHECK(a.min_y == b.min_y);
    CHECK(a.snapshots.size() == b.snapshots.size());
    for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
        CHECK(a.snapshots[i].x == b.snapshots[i].x);
        CHECK(a.snapshots[i].y == b.snapshots[i].y);
    }
    const TrajectoryOutcome c = simulate_path(m, cfg, 1.0, 1.0, RngStream(9, 4));
    CHECK(c.min_y != a.min_y); // distinct streams, distinct paths
}

TEST_CASE("absorption events nest across thresholds on identical draws") {
    const PowerModel m = fixtures::regime_i();
    SimConfig coarse = quiet_config();
    coarse.dt = 1e-2;
    coarse.t_max = 20.0;
    coarse.eps_abs = 1e-3;
    SimConfig fine = coarse;
    fine.eps_abs = 1e-6;

    int coarse_hits = 0, fine_hits = 0;
    for (int i = 0; i < 200; ++i) {
        const TrajectoryOutcome big =
            simulate_path(m, coarse, 1.0, 1.0, RngStream(100, i));
        const TrajectoryOutcome small =
            simulate_path(m, fine, 1.0, 1.0, RngStream(100, i));
        if (small.tau_y) CHECK(big.tau_y.has_value()); // subset property
        coarse_hits += big.tau_y.has_value();
        fine_hits += small.tau_y.has_value();
    }
    CHECK(fine_hits <= coarse_hits);
}

TEST_CASE("absorption is terminal") {
    PowerModel m;
    m.b1 = 1.0;
    m.q1 = 0.0;
    m.b2 = 0.5;
    m.q2 = 0.0;
    SimConfig cfg = quiet_config();
    cfg.eps_abs = 0.05;
    cfg.t_max = 30.0;
    cfg.snapshot_stride = 1;
    const TrajectoryOutcome o = simulate_path(m, cfg, 1.0, 1.0, RngStream(5, 1));
    REQUIRE(o.tau_y.has_value());
    bool seen_zero = false;
    for (const Snapshot& s : o.snapshots) {
        if (seen_zero) CHECK(s.y == 0.0);
        if (s.y == 0.0) seen_zero = true;
    }
    CHECK(seen_zero);
}

TEST_CASE("explosion guard flags runaway paths") {
    PowerModel m;
    m.a3 = 500.0; // violent jumps: some replica clears the cap early
    m.p3 = 0.0;
    m.alpha1 = 1.5;
    SimConfig cfg = quiet_config();
    cfg.x_cap = 1.5;
    cfg.t_max = 50.0;
    cfg.x_only = true;
    bool any_exploded = false;
    for (int i = 0; i < 20 && !any_exploded; ++i) {
        const TrajectoryOutcome o =
            simulate_path(m, cfg, 1.0, 0.0, RngStream(8, i));
        if (o.exploded) {
            any_exploded = true;
            CHECK(o.steps_taken < 50000); // guard stops the path
            CHECK(o.max_x >= cfg.x_cap);
        }
    }
    CHECK(any_exploded);
}

TEST_CASE("clip policy keeps X at the floor instead of absorbing") {
    PowerModel m = pure_drift_x(1.0, 0.0);
    SimConfig cfg = quiet_config();
    cfg.eps_abs = 0.1;
    cfg.t_max = 40.0;
    cfg.x_only = true;
    cfg.policy_x = PositivityPolicy::ClipToEpsilon;
    const TrajectoryOutcome o = simulate_path(m, cfg, 1.0, 0.0, RngStream(4, 0));
    CHECK(!o.tau_x);
    CHECK(o.final_x == doctest::Approx(0.1));

    cfg.policy_x = PositivityPolicy::Absorb;
    const TrajectoryOutcome p = simulate_path(m, cfg, 1.0, 0.0, RngStream(4, 0));
    REQUIRE(p.tau_x.has_value());
    CHECK(p.final_x == 0.0);
}

TEST_CASE("first-passage levels are recorded on the way down") {
    PowerModel m = pure_drift_x(1.0, 0.0);
    SimConfig cfg = quiet_config();
    cfg.dt = 1e-4;
    cfg.t_max = 10.0;
    cfg.x_only = true;
    cfg.eps_abs = 1e-6;
    cfg.x_down_thresholds = {0.5, 0.1};
    cfg.x_up_thresholds = {2.0};
    const TrajectoryOutcome o = simulate_path(m, cfg, 1.0, 0.0, RngStream(4, 2));
    REQUIRE(o.x_down_hits[0].has_value());
    REQUIRE(o.x_down_hits[1].has_value());
    CHECK(!o.x_up_hits[0].has_value());
    CHECK(*o.x_down_hits[0] == doctest::Approx(std::log(2.0)).epsilon(2e-3));
    CHECK(*o.x_down_hits[1] == doctest::Approx(std::log(10.0)).epsilon(2e-3));
    CHECK(*o.x_down_hits[0] < *o.x_down_hits[1]);
}

TEST_CASE("coupled paths with identical inputs never separate") {
    CoupledSpec spec;
    spec.drift1 = spec.drift2 = [](double, double u) { return -u; };
    spec.diffusion = [](double) { return 0.3; };
    spec.jump_rate = [](double) { return 0.2; };
    spec.alpha = 1.5;
    SimConfig cfg = quiet_config();
    cfg.t_max = 5.0;
    const CoupledOutcome o = simulate_coupled(spec, cfg, 1.0, 1.0, RngStream(6, 0));
    CHECK(o.violations == 0);
    CHECK(o.final_x1 == o.final_x2);
}

TEST_CASE("constant drift shift accumulates linearly without noise") {
    CoupledSpec spec;
    spec.drift1 = [](double, double) { return 0.0; };
    spec.drift2 = [](double, double) { return 1.0; };
    spec.alpha = 1.5; // no diffusion/jump maps: deterministic
    SimConfig cfg = quiet_config();
    cfg.dt = 1e-3;
    cfg.t_max = 2.0;
    const CoupledOutcome o = simulate_coupled(spec, cfg, 1.0, 1.0, RngStream(6, 1));
    CHECK(o.violations == 0);
    CHECK(o.final_x2 - o.final_x1 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("ordered drifts with constant noise maps preserve order exactly") {
    CoupledSpec spec;
    spec.drift1 = [](double, double u) { return -u; };
    spec.drift2 = [](double, double u) { return -u + 0.1; };
    spec.diffusion = [](double) { return 0.4; };
    spec.jump_rate = [](double) { return 0.3; };
    spec.alpha = 1.6;
    SimConfig cfg = quiet_config();
    cfg.t_max = 5.0;
    cfg.eps_abs = 1e-6;
    for (int i = 0; i < 50; ++i) {
        const CoupledOutcome o =
            simulate_coupled(spec, cfg, 0.5, 0.5, RngStream(77, i));
        CHECK(o.violations == 0);
    }
}

TEST_CASE("config validation") {
    SimConfig cfg = quiet_config();
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = quiet_config();
    cfg.eps_abs = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = quiet_config();
    cfg.t_max = cfg.dt / 2;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = quiet_config();
    CHECK_THROWS_AS(
        simulate_path(PowerModel{}, cfg, cfg.eps_abs / 2, 1.0, RngStream(0, 0)),
        DomainError);
}
