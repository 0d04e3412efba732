#pragma once

#include "slv/coefficients.hpp"

// Model fixtures spanning every clause of the regime table.  The same models
// drive the classifier golden tests and the acceptance suite.
namespace fixtures {

using slv::PowerModel;

// theta exponent 1: multiplicative interaction, Y extinguishes
inline PowerModel regime_i() {
    PowerModel m;
    m.a1 = 1.0;  m.p1 = 0.5;
    m.a2 = 0.2;  m.p2 = 0.5;
    m.b1 = 0.1;  m.q1 = 1.0;
    m.b2 = 0.2;  m.q2 = 0.0;
    m.b3 = 0.1;  m.q3 = 0.0;
    m.eta = 0.5;
    m.theta_exp = 1.0;
    m.kappa_exp = 1.0;
    m.alpha1 = 1.5;
    m.alpha2 = 1.5;
    return m;
}

// p = q = 0 with b/a = 3 > kappa/(1-theta) = 2
inline PowerModel regime_iiia() {
    PowerModel m;
    m.a1 = 1.0;  m.p1 = 0.0;
    m.a2 = 0.5;  m.p2 = 1.0;
    m.a3 = 0.3;  m.p3 = 1.0;
    m.b1 = 3.0;  m.q1 = 0.0;
    m.b2 = 0.5;  m.q2 = 0.5;
    m.b3 = 0.4;  m.q3 = 1.0;
    m.eta = 1.0;
    m.theta_exp = 0.0;
    m.kappa_exp = 2.0;
    m.alpha1 = 1.5;
    m.alpha2 = 1.7;
    return m;
}

// p = 0.2 > 0, q = 0, theta = 0.5
inline PowerModel regime_iiib() {
    PowerModel m;
    m.a1 = 0.2;  m.p1 = 0.2;
    m.a2 = 0.2;  m.p2 = 0.2;
    m.b1 = 0.5;  m.q1 = 0.0;
    m.b2 = 0.3;  m.q2 = 0.0;
    m.b3 = 0.2;  m.q3 = 0.0;
    m.eta = 2.0;
    m.theta_exp = 0.5;
    m.kappa_exp = 1.0;
    m.alpha1 = 1.5;
    m.alpha2 = 1.5;
    return m;
}

// p = 0.7, q = 1, crit = 0.5 < p
inline PowerModel regime_iiic() {
    PowerModel m;
    m.a1 = 1.0;  m.p1 = 0.7;
    m.a2 = 0.5;  m.p2 = 0.7;
    m.b1 = 1.0;  m.q1 = 1.0;
    m.b2 = 0.6;  m.q2 = 1.0;
    m.eta = 1.0;
    m.theta_exp = 0.0;
    m.kappa_exp = 1.0;
    m.alpha1 = 1.5;
    m.alpha2 = 1.5;
    return m;
}

// critical surface crit = p = 0.5 with lhs = 0.25 < rhs = 1
inline PowerModel regime_iiid() {
    PowerModel m;
    m.a1 = 1.0;  m.p1 = 0.5;
    m.a2 = 0.4;  m.p2 = 2.0;
    m.b1 = 1.0;  m.q1 = 1.0;
    m.b2 = 0.5;  m.q2 = 3.0;
    m.eta = 1.0;
    m.theta_exp = 0.0;
    m.kappa_exp = 1.0;
    m.alpha1 = 1.5;
    m.alpha2 = 1.5;
    return m;
}

// p = q = 0 with b/a = 1 < kappa/(1-theta) = 2
inline PowerModel regime_iva() {
    PowerModel m;
    m.a1 = 1.0;  m.p1 = 0.0;
    m.a2 = 0.5;  m.p2 = 1.0;
    m.b1 = 1.0;  m.q1 = 0.0;
    m.b2 = 0.4;  m.q2 = 1.0;
    m.eta = 1.0;
    m.theta_exp = 0.0;
    m.kappa_exp = 2.0;
    m.alpha1 = 1.5;
    m.alpha2 = 1.5;
    return m;
}

// p = 0, q = 0.5
inline PowerModel regime_ivb() {
    PowerModel m;
    m.a1 = 1.0;  m.p1 = 0.0;
    m.a2 = 0.3;  m.p2 = 0.5;
    m.b1 = 1.0;  m.q1 = 0.5;
    m.b2 = 0.5;  m.q2 = 0.5;
    m.eta = 1.0;
    m.theta_exp = 0.3;
    m.kappa_exp = 1.0;
    m.alpha1 = 1.5;
    m.alpha2 = 1.5;
    return m;
}

// p = 0.1, q = 1, crit = 0.5 > p
inline PowerModel regime_ivc() {
    PowerModel m;
    m.a1 = 1.0;  m.p1 = 0.1;
    m.a2 = 0.2;  m.p2 = 0.5;
    m.b1 = 1.0;  m.q1 = 1.0;
    m.b2 = 0.5;  m.q2 = 1.0;
    m.eta = 1.0;
    m.theta_exp = 0.0;
    m.kappa_exp = 1.0;
    m.alpha1 = 1.5;
    m.alpha2 = 1.5;
    return m;
}

// critical surface with lhs = 2 > rhs = 1
inline PowerModel conjecture_region() {
    PowerModel m = regime_iiid();
    m.a1 = 8.0;
    return m;
}

} // namespace fixtures
