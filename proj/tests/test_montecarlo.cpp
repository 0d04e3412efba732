#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "slv/montecarlo.hpp"
#include "slv/rng.hpp"

using namespace slv;

namespace {

SimConfig fast_config() {
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_max = 10.0;
    cfg.eps_abs = 1e-6;
    return cfg;
}

bool same_result(const EstimateResult& a, const EstimateResult& b) {
    return a.n == b.n && a.successes == b.successes && a.censored == b.censored &&
           a.errors == b.errors && a.p_hat == b.p_hat && a.ci_low == b.ci_low &&
           a.ci_high == b.ci_high && a.mean_tau_y == b.mean_tau_y &&
           a.sd_tau_y == b.sd_tau_y;
}

} // namespace

TEST_CASE("wilson interval basics") {
    const WilsonInterval w = wilson95(30, 100);
    CHECK(w.low < 0.3);
    CHECK(w.high > 0.3);
    CHECK(w.low > 0.2);
    CHECK(w.high < 0.42);
    CHECK(wilson95(0, 0).low == 0.0);
    // all-successes lower bound is 1/(1+z^2/n)
    CHECK(wilson95(100, 100).low == doctest::Approx(1.0 / (1.0 + 3.8414588 / 100))
                                        .epsilon(1e-6));
}

TEST_CASE("drift-dominated extinction estimates one") {
    PowerModel m;
    m.b1 = 1.0;
    m.q1 = 0.0; // deterministic exponential decay for Y
    SimConfig cfg = fast_config();
    cfg.eps_abs = 0.01;
    const EstimateResult r = estimate_extinction(m, cfg, 100, 7, 2);
    CHECK(r.n == 100);
    CHECK(r.successes == 100);
    CHECK(r.censored == 0);
    CHECK(r.p_hat == 1.0);
    CHECK(r.ci_low > 0.96); // Wilson-95 all-success bound at n=100
    CHECK(r.ci_low <= 1.0);
    CHECK(r.mean_tau_y == doctest::Approx(std::log(100.0)).epsilon(5e-3));
    CHECK(r.sd_tau_y == doctest::Approx(0.0));

    const EstimateResult big = estimate_extinction(m, cfg, 500, 7, 4);
    CHECK(big.ci_low > 0.99);
}

TEST_CASE("estimates are invariant to worker count") {
    const PowerModel m = fixtures::regime_iiib();
    SimConfig cfg = fast_config();
    cfg.t_max = 5.0;
    const EstimateResult one = estimate_extinction(m, cfg, 400, 11, 1);
    const EstimateResult eight = estimate_extinction(m, cfg, 400, 11, 8);
    const EstimateResult three = estimate_extinction(m, cfg, 400, 11, 3);
    CHECK(same_result(one, eight));
    CHECK(same_result(one, three));
    CHECK(one.successes + one.censored + one.errors == one.n);
}

TEST_CASE("success count is nondecreasing in the horizon on identical seeds") {
    const PowerModel m = fixtures::regime_iiib();
    SimConfig short_cfg = fast_config();
    short_cfg.t_max = 2.0;
    SimConfig long_cfg = fast_config();
    long_cfg.t_max = 4.0;
    const EstimateResult s = estimate_extinction(m, short_cfg, 300, 3, 4);
    const EstimateResult l = estimate_extinction(m, long_cfg, 300, 3, 4);
    CHECK(s.successes <= l.successes);
}

TEST_CASE("success count is nonincreasing in the threshold on identical seeds") {
    const PowerModel m = fixtures::regime_i();
    SimConfig loose = fast_config();
    loose.dt = 1e-2;
    loose.t_max = 20.0;
    loose.eps_abs = 1e-3;
    SimConfig tight = loose;
    tight.eps_abs = 1e-5;
    const EstimateResult a = estimate_extinction(m, loose, 300, 5, 4);
    const EstimateResult b = estimate_extinction(m, tight, 300, 5, 4);
    CHECK(b.successes <= a.successes);
}

TEST_CASE("wilson coverage on the synthetic bernoulli harness") {
    // bypasses the simulator entirely: Bernoulli(p) replicas from the stream
    int cell = 0;
    for (double p : {0.05, 0.5, 0.95}) {
        int covered = 0;
        const int reps = 200, n = 1000;
        for (int rep = 0; rep < reps; ++rep) {
            RngStream rng(556 + cell, rep);
            std::uint64_t s = 0;
            for (int i = 0; i < n; ++i) s += rng.uniform01() < p;
            const WilsonInterval w = wilson95(s, n);
            covered += (w.low <= p && p <= w.high);
        }
        INFO("p=", p, " covered=", covered);
        CHECK(covered >= 0.93 * reps);
        ++cell;
    }
}

TEST_CASE("hitting time of a deterministic decay has zero variance") {
    PowerModel m;
    m.a1 = 1.0;
    m.p1 = 0.0; // a1(u) = u
    SimConfig cfg = fast_config();
    cfg.dt = 1e-4;
    cfg.x0 = 1.0;
    const HittingTimeEstimate h =
        estimate_hitting_time(m, cfg, 0.1, 5.0, 50, 13, 2);
    CHECK(h.censored == 0);
    CHECK(h.mean == doctest::Approx(std::log(10.0)).epsilon(2e-3));
    CHECK(h.sd == doctest::Approx(0.0));
    CHECK(h.ci_low == doctest::Approx(h.mean));

    // an upper corridor wall that is never approached changes nothing
    const HittingTimeEstimate far =
        estimate_hitting_time(m, cfg, 0.1, 50.0, 50, 13, 2);
    CHECK(far.mean == h.mean);
    CHECK(far.censored == h.censored);

    CHECK_THROWS_AS(estimate_hitting_time(m, cfg, 1.5, 5.0, 10, 0), DomainError);
}

TEST_CASE("hitting times shorten when the corridor floor rises") {
    PowerModel m;
    m.a1 = 1.0;
    m.p1 = 0.5;
    m.a2 = 0.2;
    m.p2 = 0.5;
    SimConfig cfg = fast_config();
    cfg.dt = 1e-3;
    cfg.t_max = 100.0;
    const HittingTimeEstimate near =
        estimate_hitting_time(m, cfg, 0.2, 4.0, 200, 17, 4);
    const HittingTimeEstimate far =
        estimate_hitting_time(m, cfg, 0.05, 4.0, 200, 17, 4);
    CHECK(near.mean < far.mean);
    CHECK(near.censored == 0);
    CHECK(far.censored == 0);
}

TEST_CASE("sup bound probe boundaries") {
    PowerModel m;
    m.a1 = 1.0;
    m.p1 = 0.0;
    SimConfig cfg = fast_config();
    // zero-noise decay never climbs
    const SupBoundEstimate none = sup_bound_probe(m, cfg, 0.5, 0.1, 50, 19, 2);
    CHECK(none.hits == 0);
    // already at the level
    const SupBoundEstimate all = sup_bound_probe(m, cfg, 0.1, 0.1, 50, 19, 2);
    CHECK(all.hits == 50);
    CHECK(all.p_hat == 1.0);
    CHECK_THROWS_AS(sup_bound_probe(m, cfg, 0.1, 0.5, 10, 0), DomainError);
}

TEST_CASE("sup bound probability shrinks with the start level") {
    PowerModel m;
    m.a1 = 1.0;
    m.p1 = 0.3;
    m.a2 = 0.5;
    m.p2 = 0.3;
    SimConfig cfg = fast_config();
    cfg.dt = 1e-3;
    cfg.t_max = 20.0;
    cfg.eps_abs = 1e-12;
    const SupBoundEstimate low = sup_bound_probe(m, cfg, 1.0, 0.01, 400, 23, 4);
    const SupBoundEstimate high = sup_bound_probe(m, cfg, 1.0, 0.1, 400, 23, 4);
    INFO("low ratio p=", low.p_hat, " high ratio p=", high.p_hat);
    CHECK(low.p_hat <= high.p_hat);
    // quarter-power envelope consistency: a tenfold smaller start ratio must
    // cut the probability by at least ~10^{-1/4} (generous constant for noise)
    CHECK(low.p_hat <= 2.0 * high.p_hat * std::pow(0.1, 0.25));
}

TEST_CASE("numeric-failure replicas are reported and optionally excluded") {
    PowerModel m;
    m.a1 = 1.0;
    m.p1 = 2999.0; // pow overflows to inf on the first step from x0 = 2
    m.b1 = 1.0;
    SimConfig cfg = fast_config();
    cfg.x0 = 2.0;
    cfg.eps_abs = 0.01;
    const EstimateResult keep = estimate_extinction(m, cfg, 40, 1, 2, false);
    CHECK(keep.errors == 40);
    CHECK(keep.successes == 0);
    CHECK(keep.p_hat == 0.0);
    const EstimateResult drop = estimate_extinction(m, cfg, 40, 1, 2, true);
    CHECK(drop.errors == 40);
    CHECK(drop.p_hat == 0.0); // empty effective sample
    CHECK(drop.ci_high == 1.0);
}

TEST_CASE("coupled replicas of a power model against a lifted drift") {
    // Y-side style dynamics with shared noise; drift shifted upward
    CoupledSpec spec;
    spec.drift1 = [](double, double u) { return -u; };
    spec.drift2 = [](double, double u) { return -u + 0.5; };
    spec.diffusion = [](double u) { return 0.5 * u; };
    spec.jump_rate = [](double u) { return 0.3 * u; };
    spec.alpha = 1.5;
    SimConfig cfg = fast_config();
    cfg.t_max = 5.0;
    cfg.eps_abs = 1e-4;
    const CoupledReplicaStats st =
        coupled_replicas(spec, cfg, 1.0, 1.0, 200, 29, 4);
    CHECK(st.n == 200);
    CHECK(st.errors == 0);
    // state-dependent V makes the coupling inexact in principle; at this
    // step size violations are still overwhelmingly unlikely
    CHECK(st.violations == 0);
}
