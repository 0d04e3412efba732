#pragma once

#include <functional>
#include <string>

#include "slv/errors.hpp"

namespace slv {

/// Power-law coefficient bundle for the two-type jump-diffusion system:
///
///   a1(u) = a1 u^{p1+1}   a2(u) = a2 u^{p2+2}   a3(u) = a3 u^{p3+alpha1}
///   b1(u) = b1 u^{q1+1}   b2(u) = b2 u^{q2+2}   b3(u) = b3 u^{q3+alpha2}
///   theta(u) = eta u^{theta_exp}                kappa(u) = u^{kappa_exp}
///
/// alpha1, alpha2 are the stable indices of the driving jump measures.
struct PowerModel {
    double a1 = 0, a2 = 0, a3 = 0;
    double p1 = 0, p2 = 0, p3 = 0;
    double b1 = 0, b2 = 0, b3 = 0;
    double q1 = 0, q2 = 0, q3 = 0;
    double eta = 0;
    double theta_exp = 0;
    double kappa_exp = 1;
    double alpha1 = 1.5, alpha2 = 1.5;

    /// Throws ModelError unless amplitudes and exponent offsets are >= 0,
    /// a2+a3 > 0, b2+b3 > 0, kappa_exp > 0 and both alphas lie in (1,2).
    void validate() const;
};

enum class Coefficient { A1, A2, A3, B1, B2, B3, Theta, Kappa };

/// Maps "a1".."b3", "theta", "kappa" to a selector; anything else is a
/// UsageError.
Coefficient coefficient_from_name(const std::string& name);

/// Evaluates one coefficient map of the model at u > 0.
double eval_power_coefficient(const PowerModel& m, Coefficient which, double u);

/// General evaluable coefficient maps for models outside the power family.
/// Each map must be defined on (0,inf) and return finite nonnegative values.
struct CoefficientBundle {
    std::function<double(double)> a1, a2, a3, b1, b2, b3, theta, kappa;

    static CoefficientBundle from_power(const PowerModel& m);

    /// Local-boundedness probe: evaluates every map on a log-spaced grid over
    /// [1e-8, 1e4] and throws ModelError on any non-finite or negative value.
    /// (A black-box map cannot be certified analytically; the grid is the
    /// operational check.)
    void probe_local_boundedness() const;
};

/// Small-u leading behavior of the drift aggregates: G_{1,0}(u) ~ a u^p and
/// G_{2,0}(u) ~ b u^q with p,q the minimal exponents over the nonzero
/// amplitudes and a,b the sums of the attaining terms.
struct EffectiveExponents {
    double p = 0, q = 0;
    double a = 0, b = 0;
};

EffectiveExponents effective_exponents(const PowerModel& m);

} // namespace slv
