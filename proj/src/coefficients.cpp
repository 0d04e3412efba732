#include "slv/coefficients.hpp"

#include <cmath>
#include <vector>

namespace slv {

void PowerModel::validate() const {
    const double amps[] = {a1, a2, a3, b1, b2, b3, eta};
    for (double v : amps)
        if (!(v >= 0) || !std::isfinite(v))
            throw ModelError("amplitude must be finite and nonnegative");
    const double offs[] = {p1, p2, p3, q1, q2, q3, theta_exp};
    for (double v : offs)
        if (!(v >= 0) || !std::isfinite(v))
            throw ModelError("exponent offset must be finite and nonnegative");
    if (!(a2 + a3 > 0)) throw ModelError("model requires a2 + a3 > 0");
    if (!(b2 + b3 > 0)) throw ModelError("model requires b2 + b3 > 0");
    if (!(kappa_exp > 0)) throw ModelError("kappa exponent must be positive");
    if (!(alpha1 > 1 && alpha1 < 2) || !(alpha2 > 1 && alpha2 < 2))
        throw ModelError("stable indices must lie in (1,2)");
}

Coefficient coefficient_from_name(const std::string& name) {
    if (name == "a1") return Coefficient::A1;
    if (name == "a2") return Coefficient::A2;
    if (name == "a3") return Coefficient::A3;
    if (name == "b1") return Coefficient::B1;
    if (name == "b2") return Coefficient::B2;
    if (name == "b3") return Coefficient::B3;
    if (name == "theta") return Coefficient::Theta;
    if (name == "kappa") return Coefficient::Kappa;
    throw UsageError("unknown coefficient selector: " + name);
}

double eval_power_coefficient(const PowerModel& m, Coefficient which, double u) {
    if (!(u > 0)) throw DomainError("coefficient maps are defined for u > 0");
    switch (which) {
        case Coefficient::A1: return m.a1 * std::pow(u, m.p1 + 1.0);
        case Coefficient::A2: return m.a2 * std::pow(u, m.p2 + 2.0);
        case Coefficient::A3: return m.a3 * std::pow(u, m.p3 + m.alpha1);
        case Coefficient::B1: return m.b1 * std::pow(u, m.q1 + 1.0);
        case Coefficient::B2: return m.b2 * std::pow(u, m.q2 + 2.0);
        case Coefficient::B3: return m.b3 * std::pow(u, m.q3 + m.alpha2);
        case Coefficient::Theta: return m.eta * std::pow(u, m.theta_exp);
        case Coefficient::Kappa: return std::pow(u, m.kappa_exp);
    }
    throw UsageError("unknown coefficient selector");
}

CoefficientBundle CoefficientBundle::from_power(const PowerModel& m) {
    CoefficientBundle c;
    c.a1 = [m](double u) { return eval_power_coefficient(m, Coefficient::A1, u); };
    c.a2 = [m](double u) { return eval_power_coefficient(m, Coefficient::A2, u); };
    c.a3 = [m](double u) { return eval_power_coefficient(m, Coefficient::A3, u); };
    c.b1 = [m](double u) { return eval_power_coefficient(m, Coefficient::B1, u); };
    c.b2 = [m](double u) { return eval_power_coefficient(m, Coefficient::B2, u); };
    c.b3 = [m](double u) { return eval_power_coefficient(m, Coefficient::B3, u); };
    c.theta = [m](double u) { return eval_power_coefficient(m, Coefficient::Theta, u); };
    c.kappa = [m](double u) { return eval_power_coefficient(m, Coefficient::Kappa, u); };
    return c;
}

void CoefficientBundle::probe_local_boundedness() const {
    const std::function<double(double)>* maps[] = {&a1, &a2, &a3, &b1,
                                                   &b2, &b3, &theta, &kappa};
    const char* names[] = {"a1", "a2", "a3", "b1", "b2", "b3", "theta", "kappa"};
    // 12 decades, 10 probe points per decade
    for (int i = 0; i < 8; ++i) {
        if (!*maps[i]) throw ModelError(std::string("coefficient map ") + names[i] + " is empty");
        for (int k = 0; k <= 120; ++k) {
            const double u = std::pow(10.0, -8.0 + 0.1 * k);
            const double v = (*maps[i])(u);
            if (!std::isfinite(v) || v < 0)
                throw ModelError(std::string("coefficient map ") + names[i] +
                                 " returned an invalid value at u=" + std::to_string(u));
        }
    }
}

EffectiveExponents effective_exponents(const PowerModel& m) {
    m.validate();
    EffectiveExponents e;

    // Minimum exponent over the nonzero-amplitude terms; ties contribute every
    // attaining term to the amplitude sum.
    auto reduce = [](double c1, double e1, double c2, double e2, double c3,
                     double e3, double gamma3, double& exponent, double& amp) {
        bool any = false;
        double mn = 0;
        auto consider = [&](double c, double ex) {
            if (c != 0) {
                mn = any ? std::min(mn, ex) : ex;
                any = true;
            }
        };
        consider(c1, e1);
        consider(c2, e2);
        consider(c3, e3);
        if (!any) throw ModelError("all amplitudes on one side are zero");
        exponent = mn;
        amp = 0;
        if (c1 != 0 && e1 == mn) amp += c1;
        if (c2 != 0 && e2 == mn) amp += c2 / 2.0;
        if (c3 != 0 && e3 == mn) amp += c3 * gamma3;
    };

    reduce(m.a1, m.p1, m.a2, m.p2, m.a3, m.p3, std::tgamma(m.alpha1), e.p, e.a);
    reduce(m.b1, m.q1, m.b2, m.q2, m.b3, m.q3, std::tgamma(m.alpha2), e.q, e.b);
    return e;
}

} // namespace slv
