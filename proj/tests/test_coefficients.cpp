#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "slv/coefficients.hpp"
#include "slv/rng.hpp"

using namespace slv;

namespace {

PowerModel base_model() {
    PowerModel m;
    m.a1 = 1.0;
    m.p1 = 0.5;
    m.a2 = 0.5;
    m.p2 = 1.0;
    m.b1 = 1.0;
    m.q1 = 0.0;
    m.b2 = 2.0;
    m.q2 = 0.0;
    m.eta = 1.0;
    m.kappa_exp = 1.0;
    return m;
}

} // namespace

TEST_CASE("gamma function meets the accuracy contract on (1,2)") {
    CHECK(std::abs(std::tgamma(1.5) - std::sqrt(M_PI) / 2.0) <=
          1e-12 * std::tgamma(1.5));
    // independent oracle: Gamma(s) = int_0^inf t^{s-1} e^{-t} dt by Simpson,
    // with t = x^5 smoothing the endpoint
    auto gamma_quad = [](double s) {
        const int n = 200000;
        const double hi = std::pow(60.0, 0.2);
        double sum = 0.0;
        const double h = hi / n;
        for (int i = 0; i <= n; ++i) {
            const double x = i * h;
            const double t = std::pow(x, 5.0);
            const double f =
                x > 0 ? std::pow(t, s - 1.0) * std::exp(-t) * 5.0 * std::pow(x, 4.0)
                      : 0.0;
            const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            sum += w * f;
        }
        return sum * h / 3.0;
    };
    for (double s : {1.2, 1.5, 1.8})
        CHECK(std::tgamma(s) == doctest::Approx(gamma_quad(s)).epsilon(1e-9));
}

TEST_CASE("power coefficient evaluation") {
    PowerModel m = base_model();
    m.a1 = 2.0;
    m.p1 = 1.0;
    CHECK(eval_power_coefficient(m, Coefficient::A1, 0.5) ==
          doctest::Approx(0.5).epsilon(1e-14));

    PowerModel m2 = base_model();
    m2.a3 = 1.0;
    m2.p3 = 0.0;
    m2.alpha1 = 1.5;
    CHECK(eval_power_coefficient(m2, Coefficient::A3, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-14));

    PowerModel m3 = base_model();
    m3.eta = 3.0;
    m3.theta_exp = 0.5;
    CHECK(eval_power_coefficient(m3, Coefficient::Theta, 4.0) ==
          doctest::Approx(6.0).epsilon(1e-14));

    CHECK(eval_power_coefficient(m3, Coefficient::Kappa, 2.0) ==
          doctest::Approx(2.0).epsilon(1e-14));

    CHECK_THROWS_AS(eval_power_coefficient(m, Coefficient::A1, 0.0), DomainError);
    CHECK_THROWS_AS(eval_power_coefficient(m, Coefficient::A1, -1.0), DomainError);
    CHECK_THROWS_AS(coefficient_from_name("nosuch"), UsageError);
    CHECK(coefficient_from_name("b3") == Coefficient::B3);
}

TEST_CASE("model invariants") {
    PowerModel m = base_model();
    CHECK_NOTHROW(m.validate());

    PowerModel bad = base_model();
    bad.a2 = 0.0;
    bad.a3 = 0.0;
    CHECK_THROWS_AS(bad.validate(), ModelError);

    bad = base_model();
    bad.alpha1 = 2.0;
    CHECK_THROWS_AS(bad.validate(), ModelError);

    bad = base_model();
    bad.p2 = -0.1;
    CHECK_THROWS_AS(bad.validate(), ModelError);

    bad = base_model();
    bad.kappa_exp = 0.0;
    CHECK_THROWS_AS(bad.validate(), ModelError);
}

TEST_CASE("effective exponents: jump-only side picks up Gamma(alpha)") {
    PowerModel m = base_model();
    m.a1 = 0.0;
    m.a2 = 0.0;
    m.a3 = 1.0;
    m.p3 = 0.3;
    m.alpha1 = 1.5;
    const EffectiveExponents e = effective_exponents(m);
    CHECK(e.p == doctest::Approx(0.3));
    CHECK(e.a == doctest::Approx(std::tgamma(1.5)).epsilon(1e-12));
    CHECK(e.a == doctest::Approx(0.8862269254527580).epsilon(1e-12));
}

TEST_CASE("effective exponents: diffusion term contributes half its amplitude") {
    PowerModel m = base_model();
    m.b1 = 1.0;
    m.q1 = 0.0;
    m.b2 = 2.0;
    m.q2 = 0.0;
    m.b3 = 0.0;
    const EffectiveExponents e = effective_exponents(m);
    CHECK(e.q == doctest::Approx(0.0));
    CHECK(e.b == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("effective exponents: only the attaining term fires") {
    PowerModel m = base_model();
    m.a1 = 1.0;
    m.p1 = 1.0;
    m.a2 = 1.0;
    m.p2 = 0.5;
    m.a3 = 0.0;
    const EffectiveExponents e = effective_exponents(m);
    CHECK(e.p == doctest::Approx(0.5));
    CHECK(e.a == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("effective exponents are stable under non-attaining perturbations") {
    RngStream rng(42, 0);
    for (int trial = 0; trial < 200; ++trial) {
        PowerModel m = base_model();
        m.a1 = rng.uniform01();
        m.a2 = rng.uniform01() + 0.1;
        m.a3 = rng.uniform01();
        m.p1 = rng.uniform01();
        m.p2 = rng.uniform01();
        m.p3 = rng.uniform01();
        const EffectiveExponents e0 = effective_exponents(m);

        // push every non-attaining exponent upward
        PowerModel m2 = m;
        const double bump = 0.5 + rng.uniform01();
        if (m2.a1 != 0 && m2.p1 != e0.p) m2.p1 += bump;
        if (m2.a2 != 0 && m2.p2 != e0.p) m2.p2 += bump;
        if (m2.a3 != 0 && m2.p3 != e0.p) m2.p3 += bump;
        const EffectiveExponents e1 = effective_exponents(m2);
        CHECK(e1.p == doctest::Approx(e0.p).epsilon(1e-14));
        CHECK(e1.a == doctest::Approx(e0.a).epsilon(1e-14));
    }
}

TEST_CASE("amplitude scaling with a unique minimizer scales the effective amplitude") {
    PowerModel m = base_model();
    m.a1 = 0.7;
    m.p1 = 0.2;
    m.a2 = 0.3;
    m.p2 = 0.9;
    const EffectiveExponents e0 = effective_exponents(m);
    m.a1 *= 3.0;
    const EffectiveExponents e1 = effective_exponents(m);
    CHECK(e1.p == doctest::Approx(e0.p));
    CHECK(e1.a == doctest::Approx(3.0 * e0.a).epsilon(1e-14));
}

TEST_CASE("coefficient maps return finite nonnegative values on the probe grid") {
    const PowerModel m = base_model();
    const CoefficientBundle c = CoefficientBundle::from_power(m);
    CHECK_NOTHROW(c.probe_local_boundedness());

    CoefficientBundle bad = c;
    bad.b2 = [](double u) { return u < 1e-6 ? -1.0 : u; };
    CHECK_THROWS_AS(bad.probe_local_boundedness(), ModelError);

    CoefficientBundle nan_map = c;
    nan_map.theta = [](double u) { return std::log(u - 0.5); }; // NaN below 0.5
    CHECK_THROWS_AS(nan_map.probe_local_boundedness(), ModelError);
}

TEST_CASE("power coefficients are monotone in u for positive exponents") {
    const PowerModel m = base_model();
    double prev = 0.0;
    for (int k = 1; k <= 40; ++k) {
        const double u = 0.1 * k;
        const double v = eval_power_coefficient(m, Coefficient::A1, u);
        CHECK(std::isfinite(v));
        CHECK(v >= prev);
        prev = v;
    }
}
