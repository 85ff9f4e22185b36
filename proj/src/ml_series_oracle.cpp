#include "abres/ml_series_oracle.hpp"
#include "abres/errors.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abres {

namespace {

using BigFloat = boost::multiprecision::mpfr_float;

constexpr int kTermBudget = 100000;
constexpr int kDigitCap = 300;

struct OracleBudget {
    int working_digits;
    int term_estimate;
    bool feasible;
};

// The series loses roughly log10(e^{|z|^{1/alpha}}) = 0.4343 |z|^{1/alpha}
// digits to cancellation near the negative real axis, and needs the terms to
// outlast the growth phase ending around alpha*k = |z|^{1/alpha}.
OracleBudget plan_budget(const MLParams& p, Cplx z, int digits) {
    double az = std::abs(z);
    double peak = (az > 1.0) ? std::pow(az, 1.0 / p.alpha) : 1.0;
    double guard = 0.4343 * peak + 15.0;
    double working = digits + guard;
    // Terms decay once alpha*k+beta passes peak = |z|^{1/alpha}; the
    // accumulated decay from peak to X = u*peak is peak*(u ln u - u + 1)
    // nats. Solve for the X that gives the requested drop.
    // Terms must fall below the roundoff floor eps_working * max_partial,
    // i.e. drop by the full working precision from the largest partial sum.
    double drop = 2.3026 * (digits + guard + 10.0);
    double u = 1.0 + std::sqrt(2.0 * drop / peak);
    for (int it = 0; it < 40; ++it) {
        double g = peak * (u * std::log(u) - u + 1.0) - drop;
        double dg = peak * std::log(u);
        double step = g / dg;
        u -= step;
        if (u < 1.0 + 1e-12)
            u = 1.0 + 1e-12;
        if (std::fabs(step) < 1e-9 * u)
            break;
    }
    double kdecay = (u * peak + 2.0) / p.alpha + 60.0;
    bool ok = working <= kDigitCap && kdecay <= kTermBudget;
    if (!ok)
        return {kDigitCap, kTermBudget, false};
    return {static_cast<int>(working), static_cast<int>(kdecay), true};
}

} // namespace

bool ml_oracle_feasible(const MLParams& params, Cplx z, int digits) {
    params.validate();
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        return false;
    return plan_budget(params, z, digits).feasible;
}

Cplx ml_eval_oracle(const MLParams& params, Cplx z, int digits) {
    params.validate();
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument("ml_eval_oracle: non-finite argument");
    if (digits < 1)
        throw std::invalid_argument("ml_eval_oracle: digits must be positive");

    double alpha = params.alpha;
    double beta = params.beta;
    // Shift beta into (0, inf) so every Gamma argument below is positive.
    // E_{a,b}(z) = 1/Gamma(b) + z E_{a,a+b}(z).
    if (beta <= 0.0) {
        MLParams up{alpha, beta + alpha};
        Cplx tail = ml_eval_oracle(up, z, digits + 4);
        double head = reciprocal_gamma(beta);
        return z * tail + Cplx(head, 0.0);
    }

    OracleBudget budget = plan_budget(params, z, digits);
    if (!budget.feasible)
        throw SeriesNotConvergedError(
            "ml_eval_oracle: term or precision budget exceeded for |z|=" +
            std::to_string(std::abs(z)) + ", alpha=" + std::to_string(alpha));

    BigFloat::default_precision(budget.working_digits);
    const BigFloat zr(z.real()), zi(z.imag());
    BigFloat sum_re(0), sum_im(0);
    BigFloat zp_re(1), zp_im(0);
    BigFloat max_mag(0);
    const double az = std::abs(z);
    const double peak = (az > 1.0) ? std::pow(az, 1.0 / alpha) : 1.0;
    const BigFloat stop = pow(BigFloat(10), -(budget.working_digits - 5));

    const BigFloat alpha_mp(alpha), beta_mp(beta);
    for (int k = 0; k <= budget.term_estimate; ++k) {
        // the Gamma argument must carry full precision: a double-rounded
        // argument error is amplified by psi(x) ~ x log x and then by the
        // series cancellation
        BigFloat g = tgamma(alpha_mp * k + beta_mp);
        BigFloat t_re = zp_re / g;
        BigFloat t_im = zp_im / g;
        sum_re += t_re;
        sum_im += t_im;
        BigFloat mag = fabs(sum_re) + fabs(sum_im);
        if (mag > max_mag)
            max_mag = mag;
        BigFloat tmag = fabs(t_re) + fabs(t_im);
        bool decaying = alpha * k + beta > peak + 2.0;
        if (decaying && tmag < stop * std::max(max_mag, BigFloat(1)))
            return {static_cast<double>(sum_re), static_cast<double>(sum_im)};
        BigFloat nre = zp_re * zr - zp_im * zi;
        zp_im = zp_re * zi + zp_im * zr;
        zp_re = nre;
    }
    throw SeriesNotConvergedError("ml_eval_oracle: series did not converge in " +
                                  std::to_string(budget.term_estimate) + " terms");
}

} // namespace abres
