#include "slv/classifier.hpp"

#include <cmath>
#include <limits>

#include "slv/levy.hpp"

namespace slv {

namespace {

constexpr double kCritTol = 1e-12;

bool nearly_equal(double x, double y) {
    return std::abs(x - y) <= kCritTol * std::max({std::abs(x), std::abs(y), 1e-300});
}

struct CriticalSides {
    double lhs, rhs;
};

CriticalSides critical_sides(const PowerModel& m, const EffectiveExponents& e) {
    const double th = m.theta_exp;
    const double lhs = e.a * e.p / (e.q * (e.q + 1.0 - th));
    const double rhs = std::pow(e.b / (1.0 - th), (1.0 - th) / (e.q + 1.0 - th)) *
                       std::pow(m.eta / e.q, e.q / (e.q + 1.0 - th));
    return {lhs, rhs};
}

} // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::ExtinguishAlmostSurely: return "ExtinguishAlmostSurely";
        case Verdict::ExtinctionAlmostSurely: return "ExtinctionAlmostSurely";
        case Verdict::Mixed: return "Mixed";
        case Verdict::PositiveExtinction: return "PositiveExtinction";
        case Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

RegimeVerdict classify(const PowerModel& m) {
    m.validate();
    RegimeVerdict out;
    out.exponents = effective_exponents(m);
    out.crit = std::numeric_limits<double>::quiet_NaN();

    if (m.eta == 0.0) {
        // no interaction at all: Y is a plain subcritical nonlinear branching
        // process and never hits zero
        out.verdict = Verdict::ExtinguishAlmostSurely;
        out.fired_rule = "Lemma 2.1(ii)";
        return out;
    }

    const double th = m.theta_exp;
    if (th >= 1.0) {
        out.verdict = Verdict::ExtinguishAlmostSurely;
        out.fired_rule = "Example(i)";
        return out;
    }

    const EffectiveExponents e = out.exponents;
    const double kap = m.kappa_exp;
    out.crit = e.q * kap / (e.q + 1.0 - th);
    const std::string mixed_note =
        "P>0 by Theorem 1.2 and P<1 by Theorem 1.5/1.7";

    if (e.p == 0.0 && e.q == 0.0) {
        const double ratio = e.b / e.a;
        const double thresh = kap / (1.0 - th);
        if (nearly_equal(ratio, thresh)) {
            out.verdict = Verdict::Unknown;
            out.note = "b/a equals kappa/(1-theta); not covered";
            return out;
        }
        if (ratio > thresh) {
            out.verdict = Verdict::ExtinctionAlmostSurely;
            out.fired_rule = "Example(iiia)";
        } else {
            out.verdict = Verdict::Mixed;
            out.fired_rule = "Example(iva)";
            out.note = mixed_note;
        }
        return out;
    }
    if (e.p > 0.0 && e.q == 0.0) {
        out.verdict = Verdict::ExtinctionAlmostSurely;
        out.fired_rule = "Example(iiib)";
        return out;
    }
    if (e.p == 0.0 && e.q > 0.0) {
        out.verdict = Verdict::Mixed;
        out.fired_rule = "Example(ivb)";
        out.note = mixed_note;
        return out;
    }

    // p, q > 0
    if (nearly_equal(out.crit, e.p)) {
        const CriticalSides s = critical_sides(m, e);
        out.boundary_gap = s.rhs - s.lhs;
        if (nearly_equal(s.lhs, s.rhs)) {
            out.verdict = Verdict::Unknown;
            out.note = "critical surface with equal sides; not covered";
            return out;
        }
        if (s.lhs < s.rhs) {
            out.verdict = Verdict::ExtinctionAlmostSurely;
            out.fired_rule = "Example(iiid)";
        } else {
            out.verdict = Verdict::Unknown;
            out.fired_rule = "Conjecture 1.1";
            out.note = "critical surface, conjectured Mixed";
        }
        return out;
    }
    if (out.crit < e.p) {
        out.verdict = Verdict::ExtinctionAlmostSurely;
        out.fired_rule = "Example(iiic)";
    } else {
        out.verdict = Verdict::Mixed;
        out.fired_rule = "Example(ivc)";
        out.note = mixed_note;
    }
    return out;
}

double boundary_gap(const PowerModel& m) {
    m.validate();
    if (!(m.theta_exp < 1.0))
        throw DomainError("boundary_gap requires theta exponent < 1");
    const EffectiveExponents e = effective_exponents(m);
    if (!(e.p > 0.0 && e.q > 0.0))
        throw DomainError("boundary_gap requires p, q > 0");
    const double crit = e.q * m.kappa_exp / (e.q + 1.0 - m.theta_exp);
    if (!nearly_equal(crit, e.p))
        throw DomainError("boundary_gap is defined on the critical surface only");
    const CriticalSides s = critical_sides(m, e);
    return s.rhs - s.lhs;
}

ConditionReport check_conditions(const PowerModel& m) {
    // basic sanity only; degraded models are reported, not rejected
    const double vals[] = {m.a1, m.a2, m.a3, m.b1, m.b2, m.b3,
                           m.p1, m.p2, m.p3, m.q1, m.q2, m.q3, m.eta};
    for (double v : vals)
        if (!std::isfinite(v) || v < 0)
            throw ModelError("coefficients must be finite and nonnegative");
    if (!(m.alpha1 > 1 && m.alpha1 < 2) || !(m.alpha2 > 1 && m.alpha2 < 2))
        throw ModelError("stable indices must lie in (1,2)");
    if (!(m.kappa_exp > 0)) throw ModelError("kappa exponent must be positive");

    ConditionReport rep;
    // (C1): power maps are bounded on bounded intervals
    rep.c1 = true;
    // (C2): G_{1,0} + G_{2,0} is a nonnegative power sum, bounded on (0,c']
    rep.c2 = true;
    // (C3): noise present on both sides and jump mass near zero
    rep.c3 = true;
    if (!(m.a2 + m.a3 > 0)) {
        rep.c3 = false;
        rep.violations.push_back(
            "inf over [c',c''] of a2(x)+a3(x) is 0 (need a2+a3 > 0)");
    }
    if (!(m.b2 + m.b3 > 0)) {
        rep.c3 = false;
        rep.violations.push_back(
            "inf over [c',c''] of b2(x)+b3(x) is 0 (need b2+b3 > 0)");
    }

    if (!rep.c3) return rep;

    const EffectiveExponents e = effective_exponents(m);

    // power-form bounds on (0, c*] with c* = 1, grid-verified constants
    double sup_ratio_a = 0.0, inf_ratio_a = HUGE_VAL;
    double sup_ratio_b = 0.0, inf_ratio_b = HUGE_VAL;
    for (int k = 0; k <= 240; ++k) {
        const double u = std::pow(10.0, -6.0 + 6.0 * k / 240.0);
        const double ra = g10(m, u) / std::pow(u, e.p);
        const double rb = g20(m, u) / std::pow(u, e.q);
        sup_ratio_a = std::max(sup_ratio_a, ra);
        inf_ratio_a = std::min(inf_ratio_a, ra);
        sup_ratio_b = std::max(sup_ratio_b, rb);
        inf_ratio_b = std::min(inf_ratio_b, rb);
    }
    rep.grid_const_upper_a = sup_ratio_a;
    rep.grid_const_lower_b = inf_ratio_b;

    const double tol = 1e-9;
    const bool g_bounds_ok = std::isfinite(sup_ratio_a) &&
                             inf_ratio_a >= e.a * (1.0 - tol) &&
                             std::isfinite(sup_ratio_b) &&
                             inf_ratio_b >= e.b * (1.0 - tol);
    if (!g_bounds_ok)
        rep.violations.push_back("grid bounds on G_{1,0}/G_{2,0} failed");

    // theta/kappa power bounds: exact in the power family when eta > 0
    const bool interaction_ok = m.eta > 0.0;
    if (!interaction_ok)
        rep.violations.push_back("theta lower bound fails: eta = 0");

    rep.bound_i = g_bounds_ok && interaction_ok;
    rep.bound_ii = g_bounds_ok && interaction_ok;
    // b3(u) = b3 u^{q3+alpha2} is nondecreasing, all maps locally Lipschitz
    rep.bound_iii = true;

    // noise lower bound a2(u)u^{-2-delta} + a3(u)u^{-delta-1} for some
    // delta > 1: pick the smallest admissible exponent and record it
    double delta_req = HUGE_VAL;
    if (m.a2 > 0) delta_req = std::min(delta_req, m.p2);
    if (m.a3 > 0) delta_req = std::min(delta_req, m.p3 + m.alpha1 - 1.0);
    rep.noise_delta = std::max(1.0 + 1e-6, delta_req);

    return rep;
}

} // namespace slv
