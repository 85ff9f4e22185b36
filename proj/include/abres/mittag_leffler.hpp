#ifndef ABRES_MITTAG_LEFFLER_HPP
#define ABRES_MITTAG_LEFFLER_HPP

#include <complex>

namespace abres {

using Cplx = std::complex<double>;

/// Parameter pair (alpha, beta) of the two-parameter Mittag-Leffler function
/// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta).
struct MLParams {
    double alpha;
    double beta;

    /// Throws std::invalid_argument unless alpha > 0 and both entries are finite.
    void validate() const;
};

/// Evaluate E_{alpha,beta}(z).
///
/// Dispatches between the Taylor series (|z| <= 1 + alpha), a deformed
/// inverse-Laplace contour (intermediate |z|) and the algebraic/exponential
/// asymptotic expansion (|z| >= min(10^(2/alpha), 50)). Near-degenerate
/// points where the contour loses relative accuracy fall back to an
/// extended-precision summation. Real z yields an exactly real result.
Cplx ml_eval(const MLParams& params, Cplx z);

/// Real-argument convenience overload.
double ml_eval(const MLParams& params, double x);

/// Time derivative d/dt E_{alpha,beta}(-lambda t^alpha), t > 0, lambda >= 0.
///
/// Uses the exact reduction
///   d/dt E_{a,b}(w) = [E_{a,b-1}(w) - (b-1) E_{a,b}(w)] / t,  w = -lambda t^a,
/// which for b = 1 coincides with -t^(a-1) lambda E_{a,a}(-lambda t^a).
double ml_deriv_t(const MLParams& params, double lambda, double t);

/// 1/Gamma(x) extended by zero at the poles of Gamma.
double reciprocal_gamma(double x);

} // namespace abres

#endif
