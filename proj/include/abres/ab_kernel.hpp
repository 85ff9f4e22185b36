#ifndef ABRES_AB_KERNEL_HPP
#define ABRES_AB_KERNEL_HPP

#include "abres/mittag_leffler.hpp"

#include <vector>

namespace abres {

/// Parameters (alpha, beta, c) of the kernel t^{beta-1} E_{alpha,beta}(-c t^alpha)
/// and of its Laplace symbol s^{alpha-beta}/(s^alpha + c).
struct ABSymbolParams {
    double alpha;
    double beta;
    double c;

    /// Throws std::invalid_argument unless 0 < alpha <= 1, beta >= 1, c > 0.
    void validate() const;

    /// Roots of s^alpha + c on the principal sheet. Empty for alpha < 1;
    /// for alpha = 1 the single root is s = -c.
    std::vector<Cplx> symbol_poles() const;
};

/// Kernel value t^{beta-1} E_{alpha,beta}(-c t^alpha), t > 0.
double kernel_eval(const ABSymbolParams& params, double t);

/// Laplace symbol s^{alpha-beta}/(s^alpha + c), principal branch,
/// s off the cut (-inf, 0]. Throws PoleProximityError within 1e-12 of a
/// symbol pole and std::domain_error on the cut.
Cplx laplace_symbol(const ABSymbolParams& params, Cplx s);

/// Relative discrepancy between the numerical Laplace transform of the
/// kernel over [0, t_max] and laplace_symbol(s). Requires Re s > 0.
double laplace_check(const ABSymbolParams& params, Cplx s, double t_max,
                     double tol);

} // namespace abres

#endif
