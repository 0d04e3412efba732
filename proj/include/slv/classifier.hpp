#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slv/coefficients.hpp"

namespace slv {

/// Classification of P{tau_0^Y < inf}, the probability that the Y population
/// hits zero in finite time.
enum class Verdict {
    ExtinguishAlmostSurely, // P = 0
    ExtinctionAlmostSurely, // P = 1
    Mixed,                  // 0 < P < 1
    PositiveExtinction,     // P > 0, complement unresolved
    Unknown,
};

std::string verdict_name(Verdict v);

struct RegimeVerdict {
    Verdict verdict = Verdict::Unknown;
    std::string fired_rule; // clause tag; always set for non-Unknown verdicts
    std::optional<double> boundary_gap; // rhs - lhs on the critical surface
    EffectiveExponents exponents;
    double crit = 0.0; // q kappa / (q + 1 - theta)
    std::string note;
};

/// Decision tree on (p, q, a, b, theta_exp, kappa_exp, eta).  Exactly one
/// branch fires; equalities the theory does not cover map to Unknown.
RegimeVerdict classify(const PowerModel& m);

/// rhs - lhs of the critical-surface refinement inequality.  Positive means
/// almost-sure extinction, negative the conjectured mixed region.
/// Precondition: p, q > 0 and q kappa/(q+1-theta) = p within relative 1e-12.
double boundary_gap(const PowerModel& m);

/// Which of the standing conditions and the power-form bounds hold, with the
/// grid-verified constants on (0, 1].
struct ConditionReport {
    bool c1 = false, c2 = false, c3 = false;
    bool bound_i = false;   // G10 <= A u^p, G20 >= b u^q, theta/kappa lower bounds
    bool bound_ii = false;  // G10 >= a u^p, G20 <= B u^q, theta/kappa upper bounds
    bool bound_iii = false; // b3 nondecreasing + local Lipschitz coefficients
    double grid_const_upper_a = 0.0; // sup G10(u)/u^p over the grid
    double grid_const_lower_b = 0.0; // inf G20(u)/u^q over the grid
    double noise_delta = 0.0;        // delta > 1 witnessing the noise lower bound
    std::vector<std::string> violations;

    bool all_pass() const {
        return c1 && c2 && c3 && bound_i && bound_ii && bound_iii;
    }
};

ConditionReport check_conditions(const PowerModel& m);

} // namespace slv
