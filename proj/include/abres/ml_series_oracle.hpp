#ifndef ABRES_ML_SERIES_ORACLE_HPP
#define ABRES_ML_SERIES_ORACLE_HPP

#include "abres/mittag_leffler.hpp"

namespace abres {

/// Slow reference evaluation of E_{alpha,beta}(z) by direct Taylor summation
/// in multiprecision arithmetic. Correct to `digits` significant digits.
///
/// Working precision adds a cancellation guard of about 0.434 |z|^(1/alpha)
/// decimal digits on top of the request. Throws SeriesNotConvergedError when
/// the term budget (1e5 terms) or the precision budget (about 3000 working
/// digits) would be exceeded; in practice any |z| <= 100 with alpha >= 0.5
/// is comfortably inside the budget.
Cplx ml_eval_oracle(const MLParams& params, Cplx z, int digits);

/// True when ml_eval_oracle(params, z, digits) fits the term and precision
/// budgets, i.e. z lies in the oracle's convergence region.
bool ml_oracle_feasible(const MLParams& params, Cplx z, int digits);

} // namespace abres

#endif
