#pragma once

#include <vector>

#include "slv/coefficients.hpp"
#include "slv/errors.hpp"

namespace slv {

/// Tabulated jump measure: density values at increasing support points with
/// log-linear interpolation between them and a power tail ~ z^{-1-tail}
/// beyond the last point.  No mass below the first point.
struct TabulatedMeasure {
    std::vector<double> z;
    std::vector<double> density;
    double tail_exponent = 1.5;
};

/// A spectrally positive jump measure: either the normalized stable measure
/// with density alpha(alpha-1)/Gamma(2-alpha) * z^{-1-alpha}, or a tabulated
/// measure for quadrature.
class LevyMeasureSpec {
  public:
    static LevyMeasureSpec stable(double alpha);
    static LevyMeasureSpec tabulated(TabulatedMeasure t);

    bool is_stable() const { return stable_; }
    double alpha() const { return alpha_; }
    const TabulatedMeasure& table() const { return table_; }

    double density(double z) const;

    /// Tail index governing integrability (alpha for stable measures, the
    /// declared tail exponent otherwise).
    double tail_index() const { return stable_ ? alpha_ : table_.tail_exponent; }

    /// Numerical value of int (z ^ z^2) m(dz); finite by construction.
    double small_large_moment() const;

  private:
    LevyMeasureSpec() = default;
    bool stable_ = true;
    double alpha_ = 1.5;
    TabulatedMeasure table_;
};

/// Kernel of the jump-moment integrals:
///   J_delta(w) = int_0^1 (1 + w v)^{-2-delta} (1 - v) dv,
/// evaluated in forms that stay accurate through the removable points
/// delta in {0,-1} (series for small w, rearranged difference forms else).
double taylor_kernel(double w, double delta);

/// H_delta(u) = u^{-2} int z^2 m(dz) int_0^1 (1+z/u v)^{-2-delta}(1-v) dv.
/// Stable measures take the closed form Gamma(alpha+delta)/Gamma(2+delta)
/// * u^{-alpha}; tabulated measures are integrated adaptively.
double h_delta(const LevyMeasureSpec& m, double delta, double u);

/// Same functional, always evaluated by adaptive quadrature of the double
/// integral (the oracle route for the closed form above).
double h_delta_quad(const LevyMeasureSpec& m, double delta, double u);

/// Drift aggregates G_{1,0}(u) = a1(u)/u + a2(u)/(2u^2) + a3(u) H_{1,0}(u)
/// and the b-side analogue.
double g10(const PowerModel& m, double u);
double g20(const PowerModel& m, double u);
double g10(const CoefficientBundle& c, const LevyMeasureSpec& mu, double u);
double g20(const CoefficientBundle& c, const LevyMeasureSpec& nu, double u);

/// The r-perturbed drift aggregate
///   G_r(x,y) = beta G_{1,r}(x) - G_{2,r}(y) - kappa(x) theta(y) / y
/// with G_{1,r}(x) = a1(x)/x + (1+beta r) a2(x)/(2x^2)
///                   + (1+beta r) a3(x) H_{1,beta r}(x)
/// and  G_{2,r}(y) = b1(y)/y + (1-r) b2(y)/(2y^2) + (1-r) b3(y) H_{2,-r}(y).
double g_r(const PowerModel& m, double r, double beta, double x, double y);

/// psi(lambda) = int (e^{-lambda z} - 1 + lambda z) mu(dz) for the normalized
/// stable measure, computed by quadrature.  Equals lambda^alpha analytically;
/// the sampler tests pin the parameterization against this oracle.
double laplace_exponent(double alpha, double lambda);

/// Normalization constant alpha(alpha-1)/Gamma(2-alpha) of the stable density.
double stable_normalization(double alpha);

namespace detail {

/// int f(z) m(dz) over (0,inf) for compensated integrands: f must vanish
/// like z^2 at zero and phi must be its cancellation-free z^2-quotient
/// (phi(z) = f(z)/z^2 written without subtractive cancellation).  `split`
/// separates the head, integrated after a singularity-removing power
/// substitution, from the tail, integrated via z -> split/t.
double measure_integral(const LevyMeasureSpec& m, double split,
                        const std::function<double(double)>& phi,
                        const std::function<double(double)>& f,
                        const char* label);

} // namespace detail

} // namespace slv
