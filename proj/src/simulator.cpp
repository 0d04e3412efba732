#include "slv/simulator.hpp"

#include <cmath>
#include <optional>

namespace slv {

namespace {

inline double fast_pow(double u, double e) {
    if (e == 0.0) return 1.0;
    if (e == 1.0) return u;
    if (e == 2.0) return u * u;
    return std::pow(u, e);
}

} // namespace

void SimConfig::validate() const {
    if (!(dt > 0)) throw ConfigError("dt must be positive");
    if (!(t_max > dt)) throw ConfigError("tmax must exceed dt");
    if (!(eps_abs > 0 && eps_abs < 1))
        throw ConfigError("eps must lie in (0,1)");
    if (!(x_cap >= 1.0)) throw ConfigError("xcap must be at least 1");
    if (!std::isfinite(x0) || !std::isfinite(y0))
        throw ConfigError("initial state must be finite");
    for (double v : x_down_thresholds)
        if (!(v > 0)) throw ConfigError("thresholds must be positive");
    for (double v : x_up_thresholds)
        if (!(v > 0)) throw ConfigError("thresholds must be positive");
}

CompiledModel CompiledModel::compile(const PowerModel& m) {
    CompiledModel c{};
    c.a1 = m.a1;
    c.a2 = m.a2;
    c.a3 = m.a3;
    c.b1 = m.b1;
    c.b2 = m.b2;
    c.b3 = m.b3;
    c.eta = m.eta;
    c.ea1 = m.p1 + 1.0;
    c.ea2 = m.p2 + 2.0;
    c.ea3 = m.p3 + m.alpha1;
    c.eb1 = m.q1 + 1.0;
    c.eb2 = m.q2 + 2.0;
    c.eb3 = m.q3 + m.alpha2;
    c.etheta = m.theta_exp;
    c.kappa = m.kappa_exp;
    c.alpha1 = m.alpha1;
    c.alpha2 = m.alpha2;
    return c;
}

double CompiledModel::drift_x(double x) const {
    return -a1 * fast_pow(x, ea1);
}
double CompiledModel::diffusion2_x(double x) const {
    return a2 * fast_pow(x, ea2);
}
double CompiledModel::jump_rate_x(double x) const {
    return a3 * fast_pow(x, ea3);
}
double CompiledModel::drift_y(double x, double y) const {
    const double interaction =
        eta == 0.0 ? 0.0 : eta * fast_pow(y, etheta) * fast_pow(x, kappa);
    return -(b1 * fast_pow(y, eb1) + interaction);
}
double CompiledModel::diffusion2_y(double y) const {
    return b2 * fast_pow(y, eb2);
}
double CompiledModel::jump_rate_y(double y) const {
    return b3 * fast_pow(y, eb3);
}

StepResult step(const CompiledModel& m, const SimConfig& cfg, double x,
                double y, const StepDraws& draws) {
    const double dt = cfg.dt;
    double nx = x + m.drift_x(x) * dt;
    if (m.a2 != 0) nx += std::sqrt(m.diffusion2_x(x) * dt) * draws.gauss_x;
    if (m.a3 != 0)
        nx += std::pow(m.jump_rate_x(x) * dt, 1.0 / m.alpha1) * draws.stable_x;
    double ny = y + m.drift_y(x, y) * dt;
    if (m.b2 != 0) ny += std::sqrt(m.diffusion2_y(y) * dt) * draws.gauss_y;
    if (m.b3 != 0)
        ny += std::pow(m.jump_rate_y(y) * dt, 1.0 / m.alpha2) * draws.stable_y;
    StepResult r{nx, ny, false, false};
    r.x_crossed = nx <= cfg.eps_abs;
    r.y_crossed = ny <= cfg.eps_abs;
    return r;
}

TrajectoryOutcome simulate_path(const PowerModel& m, const SimConfig& cfg,
                                double x0, double y0, RngStream base) {
    cfg.validate();
    if (!(x0 > cfg.eps_abs))
        throw DomainError("x0 must exceed the absorption threshold");
    if (!cfg.x_only && !(y0 > cfg.eps_abs))
        throw DomainError("y0 must exceed the absorption threshold");

    const CompiledModel cm = CompiledModel::compile(m);
    RngStream gauss_x_rng = base.fork(0);
    RngStream gauss_y_rng = base.fork(1);
    RngStream stable_x_rng = base.fork(2);
    RngStream stable_y_rng = base.fork(3);
    std::optional<StableIncrementSampler> stable_x, stable_y;
    if (cm.a3 != 0) stable_x.emplace(cm.alpha1);
    if (cm.b3 != 0 && !cfg.x_only) stable_y.emplace(cm.alpha2);

    TrajectoryOutcome out;
    out.x_down_hits.assign(cfg.x_down_thresholds.size(), std::nullopt);
    out.x_up_hits.assign(cfg.x_up_thresholds.size(), std::nullopt);

    double x = x0, y = cfg.x_only ? 0.0 : y0;
    bool x_alive = true, y_alive = !cfg.x_only;
    out.min_x = out.max_x = x;
    out.min_y = out.max_y = y;

    auto record_levels = [&](double t, double value) {
        for (std::size_t j = 0; j < cfg.x_down_thresholds.size(); ++j)
            if (!out.x_down_hits[j] && value <= cfg.x_down_thresholds[j])
                out.x_down_hits[j] = t;
        for (std::size_t j = 0; j < cfg.x_up_thresholds.size(); ++j)
            if (!out.x_up_hits[j] && value >= cfg.x_up_thresholds[j])
                out.x_up_hits[j] = t;
    };
    record_levels(0.0, x);
    if (cfg.snapshot_stride > 0) out.snapshots.push_back({0.0, x, y});

    const std::uint64_t n_steps =
        std::uint64_t(std::ceil(cfg.t_max / cfg.dt - 1e-9));

    for (std::uint64_t k = 0; k < n_steps; ++k) {
        const double t = (k + 1) * cfg.dt;

        double nx = x, ny = y;
        if (x_alive) {
            nx = x + cm.drift_x(x) * cfg.dt;
            if (cm.a2 != 0)
                nx += std::sqrt(cm.diffusion2_x(x) * cfg.dt) *
                      sample_gaussian(gauss_x_rng);
            if (cm.a3 != 0)
                nx += std::pow(cm.jump_rate_x(x) * cfg.dt, 1.0 / cm.alpha1) *
                      stable_x->draw(1.0, stable_x_rng);
        }
        if (y_alive) {
            // drift uses the pre-step x (frozen coefficients over the step)
            ny = y + cm.drift_y(x_alive ? x : 0.0, y) * cfg.dt;
            if (cm.b2 != 0)
                ny += std::sqrt(cm.diffusion2_y(y) * cfg.dt) *
                      sample_gaussian(gauss_y_rng);
            if (cm.b3 != 0)
                ny += std::pow(cm.jump_rate_y(y) * cfg.dt, 1.0 / cm.alpha2) *
                      stable_y->draw(1.0, stable_y_rng);
        }
        out.steps_taken = k + 1;

        if ((x_alive && !std::isfinite(nx)) || (y_alive && !std::isfinite(ny))) {
            out.numeric_error = true;
            break;
        }

        if (x_alive) {
            if (nx <= cfg.eps_abs) {
                if (cfg.policy_x == PositivityPolicy::Absorb) {
                    x = 0.0;
                    x_alive = false;
                    out.tau_x = t - 0.5 * cfg.dt;
                } else {
                    x = cfg.eps_abs;
                }
            } else {
                x = nx;
            }
            if (x_alive) {
                out.min_x = std::min(out.min_x, x);
                out.max_x = std::max(out.max_x, x);
                if (x >= cfg.x_cap) out.exploded = true;
            }
            record_levels(t, x);
        }
        if (y_alive) {
            if (ny <= cfg.eps_abs) {
                if (cfg.policy_y == PositivityPolicy::Absorb) {
                    y = 0.0;
                    y_alive = false;
                    out.tau_y = t - 0.5 * cfg.dt;
                } else {
                    y = cfg.eps_abs;
                }
            } else {
                y = ny;
            }
            if (y_alive) {
                out.min_y = std::min(out.min_y, y);
                out.max_y = std::max(out.max_y, y);
                if (y >= cfg.x_cap) out.exploded = true;
            }
        }

        if (cfg.snapshot_stride > 0 && (k + 1) % cfg.snapshot_stride == 0)
            out.snapshots.push_back({t, x, y});

        if (out.exploded) break;
        if (!x_alive && !y_alive) break;
        if (cfg.x_only && !x_alive) break;
        if (cfg.stop_on_y_absorption && !y_alive) break;
    }

    out.final_x = x;
    out.final_y = y;
    return out;
}

CoupledOutcome simulate_coupled(const CoupledSpec& spec, const SimConfig& cfg,
                                double x1_0, double x2_0, RngStream base,
                                double tol_order) {
    cfg.validate();
    if (!spec.drift1 || !spec.drift2)
        throw ConfigError("coupled harness needs both drift maps");

    RngStream gauss_rng = base.fork(0);
    RngStream stable_rng = base.fork(1);
    std::optional<StableIncrementSampler> stable;
    if (spec.jump_rate) stable.emplace(spec.alpha);

    CoupledOutcome out;
    double x1 = x1_0, x2 = x2_0;
    const std::uint64_t n_steps =
        std::uint64_t(std::ceil(cfg.t_max / cfg.dt - 1e-9));
    const double sqrt_dt = std::sqrt(cfg.dt);

    for (std::uint64_t k = 0; k < n_steps; ++k) {
        const double t_prev = k * cfg.dt;
        const double gauss = spec.diffusion ? sample_gaussian(gauss_rng) : 0.0;
        const double jump = stable ? stable->draw(1.0, stable_rng) : 0.0;

        double n1 = x1 + spec.drift1(t_prev, x1) * cfg.dt;
        double n2 = x2 + spec.drift2(t_prev, x2) * cfg.dt;
        if (spec.diffusion) {
            n1 += spec.diffusion(x1) * sqrt_dt * gauss;
            n2 += spec.diffusion(x2) * sqrt_dt * gauss;
        }
        if (stable) {
            n1 += std::pow(spec.jump_rate(x1) * cfg.dt, 1.0 / spec.alpha) * jump;
            n2 += std::pow(spec.jump_rate(x2) * cfg.dt, 1.0 / spec.alpha) * jump;
        }
        if (!std::isfinite(n1) || !std::isfinite(n2)) {
            out.numeric_error = true;
            break;
        }
        x1 = n1;
        x2 = n2;
        out.steps_taken = k + 1;

        const double t = (k + 1) * cfg.dt;
        if (x1 > x2 + tol_order) {
            ++out.violations;
            out.max_violation = std::max(out.max_violation, x1 - x2);
            if (!out.first_violation_t) out.first_violation_t = t;
        }
        if (std::min(x1, x2) <= cfg.eps_abs) break;
        if (std::max(x1, x2) >= cfg.x_cap) {
            out.exploded = true;
            break;
        }
    }
    out.final_x1 = x1;
    out.final_x2 = x2;
    return out;
}

} // namespace slv
