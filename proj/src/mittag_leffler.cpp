#include "abres/mittag_leffler.hpp"
#include "abres/ml_series_oracle.hpp"
#include "abres/errors.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace abres {

namespace {

using CplxL = std::complex<long double>;

constexpr long double kPiL = 3.14159265358979323846264338327950288L;

// sin(pi*x) without argument-reduction loss for large |x|.
long double sinpi_l(long double x) {
    long double n = std::nearbyint(x);
    long double r = x - n;
    long double s = std::sin(kPiL * r);
    return (std::fmod(std::fabs(n), 2.0L) == 1.0L) ? -s : s;
}

// 1/Gamma(x), zero at the poles of Gamma.
long double rgamma_l(long double x) {
    if (x > 0.5L)
        return std::exp(-std::lgamma(x));
    // reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    long double s = sinpi_l(x);
    if (s == 0.0L)
        return 0.0L;
    long double lg = std::lgamma(1.0L - x);
    return s / kPiL * std::exp(lg);
}

// Taylor series; reliable for |z| <= 1 + alpha where cancellation is bounded.
CplxL ml_series(long double alpha, long double beta, CplxL z) {
    CplxL sum = 0.0L;
    CplxL zp = 1.0L;
    long double az = std::abs(z);
    long double peak = (az > 1.0L) ? std::pow(az, 1.0L / alpha) : 1.0L;
    const long double eps = 1e-21L;
    long double max_mag = 0.0L;
    int quiet = 0;
    for (int k = 0; k < 40000; ++k) {
        CplxL term = zp * rgamma_l(alpha * k + beta);
        sum += term;
        max_mag = std::max(max_mag, std::abs(sum));
        bool decaying = alpha * k + beta > peak + 2.0L;
        if (decaying && std::abs(term) < eps * std::max(max_mag, 1e-300L)) {
            if (++quiet >= 3)
                return sum;
        } else {
            quiet = 0;
        }
        zp *= z;
    }
    throw SeriesNotConvergedError("ml_series: term budget exceeded");
}

// Confluent-hypergeometric form for alpha == 1:
//   E_{1,b}(z) = e^z M(b-1, b, -z) / Gamma(b),
// with M summed at x = -z. All terms positive for real z < 0, b >= 1.
CplxL ml_alpha1_kummer(long double beta, CplxL z) {
    CplxL x = -z;
    CplxL sum = 1.0L;
    CplxL term = 1.0L;
    for (int k = 1; k < 30000; ++k) {
        term *= x * ((beta - 1.0L + (k - 1)) / ((beta - 1.0L + k) * k));
        CplxL ratio = term / sum;
        sum += term;
        if (std::abs(term) < 1e-22L * std::abs(sum) && std::abs(ratio) < 1e-20L)
            return std::exp(z) * sum * rgamma_l(beta);
    }
    throw SeriesNotConvergedError("ml_alpha1_kummer: no convergence");
}

// Algebraic asymptotic series, optionally plus the exponential term, for
// large |z|. Optimal truncation; remainder ~ exp(-|z|^{1/alpha}).
CplxL ml_asymptotic(long double alpha, long double beta, CplxL z) {
    CplxL sum = 0.0L;
    CplxL zinv = 1.0L / z;
    CplxL zp = 1.0L;
    long double prev = std::numeric_limits<long double>::max();
    for (int k = 1; k <= 200; ++k) {
        zp *= zinv;
        CplxL term = zp * rgamma_l(beta - alpha * k);
        long double mag = std::abs(term);
        if (mag > prev)
            break;
        sum -= term;
        prev = (mag > 0.0L) ? mag : prev;
    }
    if (std::fabs(std::arg(z)) < alpha * kPiL) {
        CplxL sstar = std::pow(z, 1.0L / alpha);
        sum += std::pow(z, (1.0L - beta) / alpha) * std::exp(sstar) / alpha;
    }
    return sum;
}

struct ParabolaResult {
    CplxL value;
    long double mag_sum; // sum of |terms|, roundoff scale
};

// Inverse-Laplace representation E_{a,b}(z) = (1/2pi i) int e^s s^{a-b}/(s^a - z) ds
// over the parabola s = mu (1 + i v)^2, truncated at N nodes. The pole
// s* = z^{1/alpha} (present on the principal sheet iff |arg z| < alpha pi)
// contributes its residue when it lies right of the contour.
ParabolaResult ml_parabola(long double alpha, long double beta, CplxL z, int N) {
    const long double mu = 0.2L * N;
    const long double h = 4.0L / N;
    CplxL sum = 0.0L;
    long double mags = 0.0L;
    for (int k = 0; k < N; ++k) {
        long double v = (k + 0.5L - N / 2.0L) * h;
        CplxL u(1.0L, v);
        CplxL s = mu * u * u;
        CplxL w = mu * u * h / kPiL;
        CplxL term = w * std::exp(s) * std::pow(s, alpha - beta) /
                     (std::pow(s, alpha) - z);
        sum += term;
        mags += std::abs(term);
    }
    if (std::fabs(std::arg(z)) < alpha * kPiL) {
        CplxL sstar = std::pow(z, 1.0L / alpha);
        long double vi = sstar.imag() / (2.0L * mu);
        bool inside = sstar.real() < mu * (1.0L - vi * vi);
        if (!inside) {
            CplxL res = std::pow(sstar, 1.0L - beta) * std::exp(sstar) / alpha;
            sum += res;
            mags += std::abs(res);
        }
    }
    return {sum, mags};
}

CplxL ml_eval_l(long double alpha, long double beta, CplxL z);

CplxL ml_dispatch(long double alpha, long double beta, CplxL z) {
    long double az = std::abs(z);
    if (az == 0.0L)
        return CplxL(rgamma_l(beta), 0.0L);

    if (alpha > 1.0L) {
        // reduction E_{a,b}(z) = (1/m) sum_h E_{a/m,b}(z^{1/m} e^{2pi i h/m})
        int m = static_cast<int>(std::ceil(alpha));
        CplxL root = std::pow(z, 1.0L / m);
        CplxL acc = 0.0L;
        for (int hh = 0; hh < m; ++hh) {
            long double phi = 2.0L * kPiL * hh / m;
            CplxL rot(std::cos(phi), std::sin(phi));
            acc += ml_eval_l(alpha / m, beta, root * rot);
        }
        return acc / static_cast<long double>(m);
    }

    // near the negative real axis the Kummer series has no cancellation;
    // beyond exp overflow range the asymptotic branch takes over
    if (alpha == 1.0L && z.real() < 0.0L && az < 11000.0L &&
        az + z.real() < 5.0L && beta > 0.0L)
        return ml_alpha1_kummer(beta, z);

    if (az <= 1.0L + alpha)
        return ml_series(alpha, beta, z);

    long double asym_threshold = std::min(std::pow(10.0L, 2.0L / alpha), 50.0L);
    if (az >= asym_threshold)
        return ml_asymptotic(alpha, beta, z);

    ParabolaResult a = ml_parabola(alpha, beta, z, 40);
    ParabolaResult b = ml_parabola(alpha, beta, z, 48);
    const long double eps_ld = 1.1e-19L;
    long double est = std::abs(a.value - b.value) + 5.0L * eps_ld * b.mag_sum;
    long double scale = std::max(std::abs(b.value), 1e-300L);
    if (est <= 2e-13L * scale)
        return b.value;

    // Contour accuracy degraded (deep cancellation corner or pole near the
    // contour): fall back to the multiprecision series when affordable.
    MLParams p{static_cast<double>(alpha), static_cast<double>(beta)};
    Cplx zd(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    if (ml_oracle_feasible(p, zd, 25)) {
        Cplx r = ml_eval_oracle(p, zd, 25);
        return CplxL(r.real(), r.imag());
    }
    if (est <= 1e-9L * scale)
        return b.value;
    throw QuadratureError("ml_eval: contour evaluation did not reach tolerance");
}

CplxL ml_eval_l(long double alpha, long double beta, CplxL z) {
    // lift beta into (0, inf): E_{a,b}(z) = 1/Gamma(b) + z E_{a,a+b}(z)
    if (beta <= 0.0L)
        return CplxL(rgamma_l(beta), 0.0L) + z * ml_eval_l(alpha, alpha + beta, z);
    return ml_dispatch(alpha, beta, z);
}

} // namespace

void MLParams::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta))
        throw std::invalid_argument("MLParams: parameters must be finite");
    if (alpha <= 0.0)
        throw std::invalid_argument("MLParams: alpha must be positive");
}

Cplx ml_eval(const MLParams& params, Cplx z) {
    params.validate();
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument("ml_eval: non-finite argument");
    bool real_input = (z.imag() == 0.0);
    CplxL r = ml_eval_l(params.alpha, params.beta, CplxL(z.real(), z.imag()));
    double re = static_cast<double>(r.real());
    double im = static_cast<double>(r.imag());
    if ((real_input || std::fabs(im) < 1e-14 * std::fabs(re)) &&
        std::fabs(im) <= 1e-11 * std::max(std::fabs(re), 1e-300))
        im = 0.0;
    if (real_input)
        im = 0.0;
    return {re, im};
}

double ml_eval(const MLParams& params, double x) {
    return ml_eval(params, Cplx(x, 0.0)).real();
}

double ml_deriv_t(const MLParams& params, double lambda, double t) {
    params.validate();
    if (!(t > 0.0))
        throw std::invalid_argument("ml_deriv_t: t must be positive");
    if (lambda < 0.0)
        throw std::invalid_argument("ml_deriv_t: lambda must be nonnegative");
    if (lambda == 0.0)
        return 0.0;
    double w = -lambda * std::pow(t, params.alpha);
    MLParams lower{params.alpha, params.beta - 1.0};
    double a = ml_eval(lower, w);
    double b = ml_eval(params, w);
    return (a - (params.beta - 1.0) * b) / t;
}

double reciprocal_gamma(double x) {
    return static_cast<double>(rgamma_l(static_cast<long double>(x)));
}

} // namespace abres
