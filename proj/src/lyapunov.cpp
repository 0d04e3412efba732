#include "slv/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "slv/quadrature.hpp"

namespace slv {

namespace {

class InversePower final : public TestFunction {
  public:
    explicit InversePower(double rho) : rho_(rho) {
        if (!(rho > 0)) throw DomainError("inverse-power exponent must be positive");
    }
    std::string name() const override { return "inverse_power"; }
    double value(double x, double y) const override {
        return std::pow(x, -rho_) + std::pow(y, -rho_) + 1.0;
    }
    double dx(double x, double) const override {
        return -rho_ * std::pow(x, -rho_ - 1.0);
    }
    double dy(double, double y) const override {
        return -rho_ * std::pow(y, -rho_ - 1.0);
    }
    double dxx(double x, double) const override {
        return rho_ * (rho_ + 1.0) * std::pow(x, -rho_ - 2.0);
    }
    double dyy(double, double y) const override {
        return rho_ * (rho_ + 1.0) * std::pow(y, -rho_ - 2.0);
    }
    bool dxx_one_signed() const override { return true; }
    bool dyy_one_signed() const override { return true; }

  private:
    double rho_;
};

class ExpRatio final : public TestFunction {
  public:
    ExpRatio(double lambda, double r, double beta)
        : lambda_(lambda), r_(r), beta_(beta) {
        if (!(lambda > 0)) throw DomainError("lambda must be positive");
        if (!(r > 0 && r < 1)) throw DomainError("r must lie in (0,1)");
        if (!(beta > 0)) throw DomainError("beta must be positive");
    }
    std::string name() const override { return "exp_ratio"; }
    double value(double x, double y) const override {
        return std::exp(-lambda_ * std::pow(ratio(x, y), r_));
    }
    double dx(double x, double y) const override {
        const double ur = std::pow(ratio(x, y), r_);
        return lambda_ * r_ * beta_ * ur * value(x, y) / x;
    }
    double dy(double x, double y) const override {
        const double ur = std::pow(ratio(x, y), r_);
        return -lambda_ * r_ * ur * value(x, y) / y;
    }
    double dxx(double x, double y) const override {
        const double ur = std::pow(ratio(x, y), r_);
        const double lrb = lambda_ * r_ * beta_;
        return lrb * ur / (x * x) * value(x, y) *
               (lrb * ur - (1.0 + r_ * beta_));
    }
    double dyy(double x, double y) const override {
        const double ur = std::pow(ratio(x, y), r_);
        const double lr = lambda_ * r_;
        return lr * ur / (y * y) * value(x, y) * (lr * ur + (1.0 - r_));
    }
    bool dyy_one_signed() const override { return true; } // r < 1

  private:
    double ratio(double x, double y) const { return std::pow(x, -beta_) * y; }
    double lambda_, r_, beta_;
};

// g0 piece of the compact composite: x^{-delta} | quintic bridge | pole side
class BridgedBarrier {
  public:
    BridgedBarrier(double delta, double c_star, double c2, double c3)
        : delta_(delta), c_star_(c_star), c2_(c2), c3_(c3) {
        // Hermite data at both seams
        const double h = c2_ - c3_;
        const double f0 = std::pow(c3_, -delta_);
        const double d0 = -delta_ * std::pow(c3_, -delta_ - 1.0);
        const double s0 = delta_ * (delta_ + 1.0) * std::pow(c3_, -delta_ - 2.0);
        const double w = c2_ - c_star_; // negative
        const double f1 = 1.0 / (w * w);
        const double d1 = -2.0 / (w * w * w);
        const double s1 = 6.0 / (w * w * w * w);
        a_[0] = f0;
        a_[1] = d0 * h;
        a_[2] = 0.5 * s0 * h * h;
        const double A = f1 - a_[0] - a_[1] - a_[2];
        const double B = d1 * h - a_[1] - 2.0 * a_[2];
        const double C = s1 * h * h - 2.0 * a_[2];
        a_[3] = 10.0 * A - 4.0 * B + 0.5 * C;
        a_[4] = -15.0 * A + 7.0 * B - C;
        a_[5] = 6.0 * A - 3.0 * B + 0.5 * C;
        h_ = h;
    }

    double value(double x) const {
        if (x <= c3_) return std::pow(x, -delta_);
        if (x >= c2_) {
            const double w = x - c_star_;
            return 1.0 / (w * w);
        }
        const double s = (x - c3_) / h_;
        double v = 0.0;
        for (int k = 5; k >= 0; --k) v = v * s + a_[k];
        return v;
    }
    double deriv(double x) const {
        if (x <= c3_) return -delta_ * std::pow(x, -delta_ - 1.0);
        if (x >= c2_) {
            const double w = x - c_star_;
            return -2.0 / (w * w * w);
        }
        const double s = (x - c3_) / h_;
        double v = 0.0;
        for (int k = 5; k >= 1; --k) v = v * s + k * a_[k];
        return v / h_;
    }
    double second(double x) const {
        if (x <= c3_) return delta_ * (delta_ + 1.0) * std::pow(x, -delta_ - 2.0);
        if (x >= c2_) {
            const double w = x - c_star_;
            return 6.0 / (w * w * w * w);
        }
        const double s = (x - c3_) / h_;
        double v = 0.0;
        for (int k = 5; k >= 2; --k) v = v * s + k * (k - 1) * a_[k];
        return v / (h_ * h_);
    }

  private:
    double delta_, c_star_, c2_, c3_, h_;
    double a_[6];
};

class ExpTan final : public TestFunction {
  public:
    ExpTan(double lambda1, double lambda2, double r, double c_star, double delta,
           double c1, double c2, double c3)
        : l1_(lambda1),
          l2_(lambda2),
          r_(r),
          c_star_(c_star),
          cbar_(M_PI / (2.0 * c_star)),
          barrier_(delta, c_star, c2, c3) {
        if (!(lambda1 > 0 && lambda2 > 0)) throw DomainError("lambdas must be positive");
        if (!(r > 0 && r < 1)) throw DomainError("r must lie in (0,1)");
        if (!(delta > 1)) throw DomainError("delta must exceed 1");
        if (!(0 < c1 && c1 < c3 && c3 < c2 && c2 < c_star && c_star < 1))
            throw DomainError("need 0 < c1 < c3 < c2 < c* < 1");
    }
    std::string name() const override { return "exp_tan"; }
    double domain_upper() const override { return c_star_; }

    double value(double x, double y) const override {
        if (x >= c_star_ || y >= c_star_) return 0.0;
        return std::exp(-l1_ * barrier_.value(x) - l2_ * tan_pow(y));
    }
    double dx(double x, double y) const override {
        if (x >= c_star_ || y >= c_star_) return 0.0;
        return -l1_ * barrier_.deriv(x) * value(x, y);
    }
    double dy(double x, double y) const override {
        if (x >= c_star_ || y >= c_star_) return 0.0;
        return -l2_ * tan_pow_d(y) * value(x, y);
    }
    double dxx(double x, double y) const override {
        if (x >= c_star_ || y >= c_star_) return 0.0;
        const double d = barrier_.deriv(x);
        return (l1_ * l1_ * d * d - l1_ * barrier_.second(x)) * value(x, y);
    }
    double dyy(double x, double y) const override {
        if (x >= c_star_ || y >= c_star_) return 0.0;
        const double d = tan_pow_d(y);
        return (l2_ * l2_ * d * d - l2_ * tan_pow_dd(y)) * value(x, y);
    }

  private:
    double tan_pow(double y) const { return std::pow(std::tan(cbar_ * y), r_); }
    double tan_pow_d(double y) const {
        const double t = std::tan(cbar_ * y);
        const double c = std::cos(cbar_ * y);
        return r_ * cbar_ * std::pow(t, r_ - 1.0) / (c * c);
    }
    double tan_pow_dd(double y) const {
        const double t = std::tan(cbar_ * y);
        const double c = std::cos(cbar_ * y);
        const double sec2 = 1.0 / (c * c);
        return r_ * cbar_ * cbar_ * sec2 *
               ((r_ - 1.0) * std::pow(t, r_ - 2.0) * sec2 +
                2.0 * std::pow(t, r_));
    }

    double l1_, l2_, r_, c_star_, cbar_;
    BridgedBarrier barrier_;
};

class OneDimExp final : public TestFunction {
  public:
    OneDimExp(double lambda, double r) : lambda_(lambda), r_(r) {
        if (!(lambda > 0)) throw DomainError("lambda must be positive");
        if (!(r > 0 && r < 1)) throw DomainError("r must lie in (0,1)");
    }
    std::string name() const override { return "one_dim_exp"; }
    double value(double, double y) const override {
        return std::exp(-lambda_ * std::pow(y, r_));
    }
    double dx(double, double) const override { return 0.0; }
    double dxx(double, double) const override { return 0.0; }
    double dy(double, double y) const override {
        return -lambda_ * r_ * std::pow(y, r_ - 1.0) * value(0, y);
    }
    double dyy(double, double y) const override {
        const double yr = std::pow(y, r_);
        return lambda_ * r_ * std::pow(y, r_ - 2.0) * value(0, y) *
               (lambda_ * r_ * yr + 1.0 - r_);
    }
    bool dxx_one_signed() const override { return true; }
    bool dyy_one_signed() const override { return true; }

  private:
    double lambda_, r_;
};

class Constant final : public TestFunction {
  public:
    explicit Constant(double c) : c_(c) {}
    std::string name() const override { return "constant"; }
    double value(double, double) const override { return c_; }
    double dx(double, double) const override { return 0.0; }
    double dy(double, double) const override { return 0.0; }
    double dxx(double, double) const override { return 0.0; }
    double dyy(double, double) const override { return 0.0; }
    bool dxx_one_signed() const override { return true; }
    bool dyy_one_signed() const override { return true; }

  private:
    double c_;
};

class Scaled final : public TestFunction {
  public:
    Scaled(std::unique_ptr<TestFunction> g, double c) : g_(std::move(g)), c_(c) {}
    std::string name() const override { return "scaled_" + g_->name(); }
    double value(double x, double y) const override { return c_ * g_->value(x, y); }
    double dx(double x, double y) const override { return c_ * g_->dx(x, y); }
    double dy(double x, double y) const override { return c_ * g_->dy(x, y); }
    double dxx(double x, double y) const override { return c_ * g_->dxx(x, y); }
    double dyy(double x, double y) const override { return c_ * g_->dyy(x, y); }
    bool dxx_one_signed() const override { return g_->dxx_one_signed(); }
    bool dyy_one_signed() const override { return g_->dyy_one_signed(); }
    double domain_upper() const override { return g_->domain_upper(); }

  private:
    std::unique_ptr<TestFunction> g_;
    double c_;
};

// One jump integral int K_z g dm along a coordinate axis.  `second_along`
// evaluates the second partial displaced by z along the jump direction.
double jump_integral(const LevyMeasureSpec& measure, const TestFunction& g,
                     double x, double y, bool along_x, JumpRoute route) {
    const bool one_signed =
        along_x ? g.dxx_one_signed() : g.dyy_one_signed();
    if (route == JumpRoute::Auto)
        route = one_signed ? JumpRoute::TaylorRemainder
                           : JumpRoute::DirectDifference;

    const double base = along_x ? x : y;
    QuadOptions inner_opts;
    inner_opts.abs_tol = 1e-15;
    inner_opts.rel_tol = 1e-10;
    inner_opts.max_panels = 20000;
    inner_opts.label = along_x ? "jump kernel x" : "jump kernel y";

    auto second_shifted = [&](double z, double v) {
        return along_x ? g.dxx(x + z * v, y) : g.dyy(x, y + z * v);
    };
    auto remainder = [&](double z) {
        return integrate_adaptive(
            [&](double v) { return second_shifted(z, v) * (1.0 - v); }, 0.0,
            1.0, inner_opts);
    };
    auto difference = [&](double z) {
        const double shifted =
            along_x ? g.value(x + z, y) : g.value(x, y + z);
        const double grad = along_x ? g.dx(x, y) : g.dy(x, y);
        return shifted - g.value(x, y) - z * grad;
    };

    const char* label = along_x ? "jump integral x" : "jump integral y";
    // The remainder kernel is mandatory where the difference cancels
    // (z << base) and useless far out where the difference is exact; the two
    // routes differ in how far the kernel is carried before handing off.
    // Compactly supported functions additionally cap the kernel region away
    // from the support edge, whose essential-singularity shoulder the inner
    // quadrature must never straddle.
    double z_hi = (route == JumpRoute::TaylorRemainder ? 4.0 : 0.5) * base;
    const double edge = g.domain_upper();
    if (std::isfinite(edge)) z_hi = std::min(z_hi, 0.25 * (edge - base));
    return detail::measure_integral(
        measure, z_hi, remainder,
        [&](double z) {
            return z <= z_hi ? z * z * remainder(z) : difference(z);
        },
        label);
}

} // namespace

std::unique_ptr<TestFunction> make_inverse_power(double rho) {
    return std::make_unique<InversePower>(rho);
}
std::unique_ptr<TestFunction> make_exp_ratio(double lambda, double r,
                                             double beta) {
    return std::make_unique<ExpRatio>(lambda, r, beta);
}
std::unique_ptr<TestFunction> make_exp_tan(double lambda1, double lambda2,
                                           double r, double c_star, double delta,
                                           double c1, double c2, double c3) {
    return std::make_unique<ExpTan>(lambda1, lambda2, r, c_star, delta, c1, c2,
                                    c3);
}
std::unique_ptr<TestFunction> make_one_dim_exp(double lambda, double r) {
    return std::make_unique<OneDimExp>(lambda, r);
}
std::unique_ptr<TestFunction> make_constant(double c) {
    return std::make_unique<Constant>(c);
}
std::unique_ptr<TestFunction> make_scaled(std::unique_ptr<TestFunction> g,
                                          double c) {
    return std::make_unique<Scaled>(std::move(g), c);
}

double jump_integral_x(const PowerModel& m, const TestFunction& g, double x,
                       double y, JumpRoute route) {
    return jump_integral(LevyMeasureSpec::stable(m.alpha1), g, x, y, true,
                         route);
}

double jump_integral_y(const PowerModel& m, const TestFunction& g, double x,
                       double y, JumpRoute route) {
    return jump_integral(LevyMeasureSpec::stable(m.alpha2), g, x, y, false,
                         route);
}

double apply_generator(const PowerModel& m, const TestFunction& g, double x,
                       double y, JumpRoute route) {
    if (!g.in_domain(x, y))
        throw DomainError("generator point outside the test function domain");

    const double a1 = eval_power_coefficient(m, Coefficient::A1, x);
    const double a2 = eval_power_coefficient(m, Coefficient::A2, x);
    const double a3 = eval_power_coefficient(m, Coefficient::A3, x);
    const double b1 = eval_power_coefficient(m, Coefficient::B1, y);
    const double b2 = eval_power_coefficient(m, Coefficient::B2, y);
    const double b3 = eval_power_coefficient(m, Coefficient::B3, y);
    const double interaction =
        m.eta == 0.0 ? 0.0
                     : eval_power_coefficient(m, Coefficient::Kappa, x) *
                           eval_power_coefficient(m, Coefficient::Theta, y);

    double total = -a1 * g.dx(x, y) + 0.5 * a2 * g.dxx(x, y) -
                   (b1 + interaction) * g.dy(x, y) + 0.5 * b2 * g.dyy(x, y);
    if (a3 != 0.0) total += a3 * jump_integral_x(m, g, x, y, route);
    if (b3 != 0.0) total += b3 * jump_integral_y(m, g, x, y, route);
    return total;
}

DriftReport drift_check(const PowerModel& m, const TestFunction& g,
                        const GridSpec& grid, DriftDirection direction,
                        int threads) {
    DriftReport rep;
    rep.direction = direction;
    if (grid.nx <= 0 || grid.ny <= 0) {
        rep.vacuous = true;
        rep.pass = true;
        return rep;
    }

    auto axis = [&](double lo, double hi, int n) {
        std::vector<double> pts(n);
        if (n == 1) {
            pts[0] = lo;
            return pts;
        }
        for (int i = 0; i < n; ++i) {
            const double f = double(i) / (n - 1);
            pts[i] = grid.log_spaced
                         ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                         : lo + f * (hi - lo);
        }
        return pts;
    };

    struct Extremum {
        double value = 0, x = 0, y = 0;
        int nans = 0;
        bool any = false;
    };
    auto scan = [&](int nx, int ny) {
        const std::vector<double> xs = axis(grid.x_lo, grid.x_hi, nx);
        const std::vector<double> ys = axis(grid.y_lo, grid.y_hi, ny);
        const int total = nx * ny;
        std::vector<double> ratio(total);
        auto eval_range = [&](int lo, int hi) {
            for (int idx = lo; idx < hi; ++idx) {
                const double x = xs[idx / ny];
                const double y = ys[idx % ny];
                double r;
                try {
                    r = apply_generator(m, g, x, y) / g.value(x, y);
                } catch (const Error&) {
                    r = std::numeric_limits<double>::quiet_NaN();
                }
                ratio[idx] = r;
            }
        };
        if (threads <= 1 || total < 64) {
            eval_range(0, total);
        } else {
            const int workers = std::min(threads, total);
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) {
                const int lo = total * w / workers;
                const int hi = total * (w + 1) / workers;
                pool.emplace_back(eval_range, lo, hi);
            }
            for (auto& th : pool) th.join();
        }
        Extremum ext;
        for (int idx = 0; idx < total; ++idx) {
            if (!std::isfinite(ratio[idx])) {
                ++ext.nans;
                continue;
            }
            const bool better =
                !ext.any || (direction == DriftDirection::Upper
                                 ? ratio[idx] > ext.value
                                 : ratio[idx] < ext.value);
            if (better) {
                ext.value = ratio[idx];
                ext.x = xs[idx / ny];
                ext.y = ys[idx % ny];
                ext.any = true;
            }
        }
        return ext;
    };

    const Extremum base = scan(grid.nx, grid.ny);
    const Extremum fine = scan(2 * grid.nx, 2 * grid.ny);
    rep.points = grid.nx * grid.ny;
    rep.nan_count = base.nans + fine.nans;
    rep.extremum = base.value;
    rep.arg_x = base.x;
    rep.arg_y = base.y;
    rep.refined_extremum = fine.value;
    rep.refinement_rel_change =
        std::abs(fine.value - base.value) /
        std::max({std::abs(base.value), std::abs(fine.value), 1e-300});
    const bool clean = rep.nan_count == 0 && base.any;
    rep.pass = direction == DriftDirection::Upper
                   ? (clean && std::isfinite(rep.extremum))
                   : (clean && rep.extremum > 0.0);
    return rep;
}

std::optional<double> drift_threshold_bisect(
    const PowerModel& m,
    const std::function<std::unique_ptr<TestFunction>(double)>& make,
    const GridSpec& grid, DriftDirection direction, double lo, double hi,
    int iterations, int threads) {
    if (!(lo < hi)) throw DomainError("bisection needs lo < hi");
    auto passes = [&](double c) {
        return drift_check(m, *make(c), grid, direction, threads).pass;
    };
    if (!passes(hi)) return std::nullopt;
    if (passes(lo)) return lo;
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        (passes(mid) ? hi : lo) = mid;
    }
    return hi;
}

DerivativeAudit finite_difference_audit(const TestFunction& g, double x,
                                        double y, double h) {
    if (!(h > 0)) throw DomainError("step must be positive");
    if (!g.in_domain(x - 2 * h, y - 2 * h) || !g.in_domain(x + 2 * h, y + 2 * h))
        throw DomainError("stencil leaves the test function domain");

    auto rel = [](double got, double want) {
        return std::abs(got - want) / std::max(std::abs(want), 1e-12);
    };
    const double fd_x = (g.value(x + h, y) - g.value(x - h, y)) / (2 * h);
    const double fd_y = (g.value(x, y + h) - g.value(x, y - h)) / (2 * h);
    const double fd_xx =
        (g.value(x + h, y) - 2 * g.value(x, y) + g.value(x - h, y)) / (h * h);
    const double fd_yy =
        (g.value(x, y + h) - 2 * g.value(x, y) + g.value(x, y - h)) / (h * h);

    DerivativeAudit a;
    a.rel_dx = rel(fd_x, g.dx(x, y));
    a.rel_dy = rel(fd_y, g.dy(x, y));
    a.rel_dxx = rel(fd_xx, g.dxx(x, y));
    a.rel_dyy = rel(fd_yy, g.dyy(x, y));
    a.max_rel = std::max({a.rel_dx, a.rel_dy, a.rel_dxx, a.rel_dyy});
    return a;
}

} // namespace slv
