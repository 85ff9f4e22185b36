#include "abres/ab_kernel.hpp"
#include "abres/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace abres {

void ABSymbolParams::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(c))
        throw std::invalid_argument("ABSymbolParams: parameters must be finite");
    if (alpha <= 0.0 || alpha > 1.0)
        throw std::invalid_argument("ABSymbolParams: alpha must lie in (0, 1]");
    if (beta < 1.0)
        throw std::invalid_argument("ABSymbolParams: beta must be >= 1");
    if (c <= 0.0)
        throw std::invalid_argument("ABSymbolParams: c must be positive");
}

std::vector<Cplx> ABSymbolParams::symbol_poles() const {
    // roots c^{1/alpha} e^{+-i pi/alpha}; on the principal sheet only when
    // pi/alpha <= pi, i.e. alpha = 1 within the admissible range
    std::vector<Cplx> poles;
    double arg = std::numbers::pi / alpha;
    if (arg <= std::numbers::pi) {
        double r = std::pow(c, 1.0 / alpha);
        poles.push_back(std::polar(r, arg));
        if (arg < std::numbers::pi)
            poles.push_back(std::polar(r, -arg));
    }
    return poles;
}

double kernel_eval(const ABSymbolParams& params, double t) {
    params.validate();
    if (!(t > 0.0))
        throw std::invalid_argument("kernel_eval: t must be positive");
    MLParams ml{params.alpha, params.beta};
    double z = -params.c * std::pow(t, params.alpha);
    return std::pow(t, params.beta - 1.0) * ml_eval(ml, z);
}

Cplx laplace_symbol(const ABSymbolParams& params, Cplx s) {
    params.validate();
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw std::invalid_argument("laplace_symbol: non-finite argument");
    if (s.imag() == 0.0 && s.real() <= 0.0)
        throw std::domain_error("laplace_symbol: s on the branch cut (-inf, 0]");
    for (const Cplx& p : params.symbol_poles())
        if (std::abs(s - p) < 1e-12)
            throw PoleProximityError("laplace_symbol: s within 1e-12 of a pole");
    Cplx sa = std::pow(s, params.alpha);
    return std::pow(s, params.alpha - params.beta) / (sa + params.c);
}

double laplace_check(const ABSymbolParams& params, Cplx s, double t_max,
                     double tol) {
    params.validate();
    if (!(s.real() > 0.0))
        throw std::invalid_argument("laplace_check: Re s must be positive");
    if (!(t_max > 1.0) || !(tol > 0.0))
        throw std::invalid_argument("laplace_check: bad t_max or tol");

    auto integrand = [&](double t) -> Cplx {
        if (t <= 0.0)
            return {0.0, 0.0};
        return std::exp(-s * t) * kernel_eval(params, t);
    };
    // split at t=1: tanh_sinh grades points toward the endpoints, resolving
    // the t^{beta-1} behaviour of the kernel near the origin
    boost::math::quadrature::tanh_sinh<double> ts;
    Cplx head = ts.integrate(integrand, 0.0, 1.0, tol);
    Cplx tail = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, 1.0, t_max, 12, tol);
    Cplx transform = head + tail;
    Cplx symbol = laplace_symbol(params, s);
    return std::abs(transform - symbol) / std::abs(symbol);
}

} // namespace abres
