#include "abres/operator_model.hpp"
#include "abres/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace abres {

namespace {

constexpr double kPi = std::numbers::pi;

// parse a named datum of the form "sin x", "sin 2x", "sin x + sin 2x", ...
// returns mode -> coefficient 1 contributions; throws on anything else
std::vector<int> parse_sine_sum(const std::string& name) {
    std::vector<int> modes;
    std::istringstream in(name);
    std::string tok;
    enum { WantSin, WantArg, WantPlus } state = WantSin;
    while (in >> tok) {
        if (state == WantSin) {
            if (tok != "sin")
                throw std::invalid_argument("unknown named datum: " + name);
            state = WantArg;
        } else if (state == WantArg) {
            if (tok == "x") {
                modes.push_back(1);
            } else if (tok.size() > 1 && tok.back() == 'x') {
                modes.push_back(std::stoi(tok.substr(0, tok.size() - 1)));
            } else {
                throw std::invalid_argument("unknown named datum: " + name);
            }
            state = WantPlus;
        } else {
            if (tok != "+")
                throw std::invalid_argument("unknown named datum: " + name);
            state = WantSin;
        }
    }
    if (state != WantPlus || modes.empty())
        throw std::invalid_argument("unknown named datum: " + name);
    return modes;
}

} // namespace

void SpectralOperator::validate() const {
    if (eigenvalues.empty())
        throw std::invalid_argument("SpectralOperator: empty spectrum");
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("SpectralOperator: omega must be positive");
    if (!(theta > 0.0) || !(theta < kPi / 2.0))
        throw std::invalid_argument("SpectralOperator: theta outside (0, pi/2)");
    const double tol = 1e-12;
    for (const Cplx& mu : eigenvalues) {
        if (!std::isfinite(mu.real()) || !std::isfinite(mu.imag()))
            throw std::invalid_argument("SpectralOperator: non-finite eigenvalue");
        if (std::abs(mu) == 0.0)
            throw std::invalid_argument("SpectralOperator: 0 in the spectrum");
        if (mu.real() > -omega + tol)
            throw std::invalid_argument(
                "SpectralOperator: Re mu must be <= -omega");
        Cplx w = mu + Cplx(omega, 0.0);
        if (std::abs(w) > tol &&
            std::fabs(std::arg(-w)) > theta + tol)
            throw std::invalid_argument(
                "SpectralOperator: eigenvalue outside the sector");
    }
    if (basis == BasisKind::DirichletSine &&
        modes != static_cast<int>(eigenvalues.size()))
        throw std::invalid_argument(
            "SpectralOperator: dirichlet-sine mode count mismatch");
}

std::string SpectralOperator::to_json() const {
    nlohmann::json j;
    for (const Cplx& mu : eigenvalues)
        j["eigenvalues"].push_back({{"re", mu.real()}, {"im", mu.imag()}});
    j["omega"] = omega;
    j["theta"] = theta;
    if (basis == BasisKind::DirichletSine)
        j["basis"] = {{"kind", "dirichlet-sine"}, {"length", kPi},
                      {"modes", modes}};
    else
        j["basis"] = {{"kind", "abstract-diagonal"}};
    return j.dump(2);
}

SpectralOperator SpectralOperator::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SpectralOperator op;
    for (const auto& e : j.at("eigenvalues"))
        op.eigenvalues.emplace_back(e.at("re").get<double>(),
                                    e.at("im").get<double>());
    op.omega = j.at("omega").get<double>();
    op.theta = j.at("theta").get<double>();
    const auto& b = j.at("basis");
    std::string kind = b.at("kind").get<std::string>();
    if (kind == "dirichlet-sine") {
        op.basis = BasisKind::DirichletSine;
        op.modes = b.at("modes").get<int>();
    } else if (kind == "abstract-diagonal") {
        op.basis = BasisKind::Abstract;
    } else {
        throw std::invalid_argument("SpectralOperator: unknown basis " + kind);
    }
    op.validate();
    return op;
}

StateVector resolvent_apply(const SpectralOperator& op, Cplx z,
                            const StateVector& v) {
    op.validate();
    if (v.size() != op.eigenvalues.size())
        throw std::invalid_argument("resolvent_apply: dimension mismatch");
    StateVector out(v.size());
    for (size_t k = 0; k < v.size(); ++k) {
        Cplx d = z - op.eigenvalues[k];
        if (std::abs(d) < 1e-14 * (1.0 + std::abs(z)))
            throw std::domain_error("resolvent_apply: z collides with mu_k");
        out[k] = v[k] / d;
    }
    return out;
}

StateVector frac_power_apply(const SpectralOperator& op, double gamma,
                             const StateVector& v) {
    op.validate();
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw std::invalid_argument("frac_power_apply: gamma outside (0, 1)");
    if (v.size() != op.eigenvalues.size())
        throw std::invalid_argument("frac_power_apply: dimension mismatch");
    StateVector out(v.size());
    for (size_t k = 0; k < v.size(); ++k)
        out[k] = std::pow(op.eigenvalues[k], gamma) * v[k];
    return out;
}

double balakrishnan_modulus(double mu, double gamma) {
    if (!(mu < 0.0))
        throw std::invalid_argument("balakrishnan_modulus: mu must be negative");
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw std::invalid_argument("balakrishnan_modulus: gamma outside (0,1)");
    double lambda = -mu;
    // sin(pi g)/pi * int_0^inf t^{g-1} lambda/(t+lambda) dt, mapped onto
    // (0,1) by t = lambda u/(1-u); the image integrand is
    // lambda^g u^{g-1} (1-u)^{-g}, with both endpoint singularities handled
    // by tanh_sinh
    boost::math::quadrature::tanh_sinh<double> ts;
    // the two-argument form receives the distance to the nearest endpoint,
    // which stands in for 1-u without cancellation near u = 1
    double integral = ts.integrate(
        [&](double u, double uc) {
            double one_minus_u = u > 0.5 ? uc : 1.0 - u;
            return std::pow(u, gamma - 1.0) * std::pow(one_minus_u, -gamma);
        },
        0.0, 1.0, 1e-12);
    return std::sin(kPi * gamma) / kPi * std::pow(lambda, gamma) * integral;
}

SpectralOperator dirichlet_laplacian(int K) {
    if (K < 1)
        throw std::invalid_argument("dirichlet_laplacian: K must be >= 1");
    SpectralOperator op;
    for (int k = 1; k <= K; ++k)
        op.eigenvalues.emplace_back(-static_cast<double>(k) * k, 0.0);
    op.omega = 1.0;
    op.theta = kPi / 4.0;
    op.basis = BasisKind::DirichletSine;
    op.modes = K;
    op.validate();
    return op;
}

StateVector project_initial_datum(const SpectralOperator& op,
                                  const std::string& named_datum) {
    op.validate();
    if (op.basis != BasisKind::DirichletSine)
        throw std::domain_error(
            "project_initial_datum: operator has no function-space basis");
    StateVector out(op.eigenvalues.size(), Cplx(0.0, 0.0));
    for (int m : parse_sine_sum(named_datum))
        if (m >= 1 && m <= op.modes)
            out[m - 1] = Cplx(1.0, 0.0);
    return out;
}

StateVector project_initial_datum(const SpectralOperator& op,
                                  const std::function<double(double)>& u0) {
    op.validate();
    if (op.basis != BasisKind::DirichletSine)
        throw std::domain_error(
            "project_initial_datum: operator has no function-space basis");
    StateVector out(op.eigenvalues.size());
    for (int k = 1; k <= op.modes; ++k) {
        double coeff =
            boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                [&](double x) { return u0(x) * std::sin(k * x); }, 0.0, kPi,
                10, 1e-12);
        out[k - 1] = Cplx(coeff * 2.0 / kPi, 0.0);
    }
    return out;
}

} // namespace abres
