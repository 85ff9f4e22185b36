#include "abres/resolvent_core.hpp"
#include "abres/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace abres {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNodeClearance = 1e-10; // relative pole clearance per node
constexpr double kRefineTol = 1e-13;     // relative per-coefficient target
constexpr int kMaxNodesPerRay = 16384;

// radii and radial weights (dr) on one ray, ascending
void radial_rule(const ContourSpec& spec, double r_min, double r_max,
                 int n, std::vector<double>& r, std::vector<double>& dr) {
    r.resize(n);
    dr.resize(n);
    if (spec.spacing == ContourSpacing::LogUniform) {
        // midpoint rule in log r: dr = r h
        double h = std::log(r_max / r_min) / n;
        for (int j = 0; j < n; ++j) {
            r[j] = r_min * std::exp((j + 0.5) * h);
            dr[j] = r[j] * h;
        }
    } else {
        // geometric nodes with trapezoidal radial weights
        double q = std::pow(r_max / r_min, 1.0 / (n - 1));
        for (int j = 0; j < n; ++j)
            r[j] = r_min * std::pow(q, j);
        dr[0] = (r[1] - r[0]) / 2.0;
        for (int j = 1; j + 1 < n; ++j)
            dr[j] = (r[j + 1] - r[j - 1]) / 2.0;
        dr[n - 1] = (r[n - 1] - r[n - 2]) / 2.0;
    }
}

// points the contour must avoid: symbol poles and resolvent collisions
// s with s^{alpha-1} = mu_k
std::vector<Cplx> forbidden_points(const SpectralOperator& op,
                                   const ABSymbolParams& params) {
    std::vector<Cplx> pts = params.symbol_poles();
    if (params.alpha < 1.0) {
        for (const Cplx& mu : op.eigenvalues) {
            Cplx p = std::exp(std::log(mu) / (params.alpha - 1.0));
            // only a genuine collision when the principal branch maps back
            if (std::abs(std::pow(p, params.alpha - 1.0) - mu) <
                1e-6 * std::abs(mu))
                pts.push_back(p);
        }
    }
    return pts;
}

// smallest gamma perturbation in {0, +-0.01 .. +-0.05} clearing every node
double cleared_gamma(const std::vector<double>& r, double gamma,
                     const std::vector<Cplx>& avoid) {
    for (int step = 0; step <= 5; ++step) {
        for (int sign : {+1, -1}) {
            double g = gamma + sign * 0.01 * step;
            if (!(g > kPi / 2.0) || !(g < kPi))
                continue;
            bool ok = true;
            for (double rad : r) {
                for (int ray : {+1, -1}) {
                    Cplx s = std::polar(rad, ray * g);
                    for (const Cplx& p : avoid)
                        if (std::abs(s - p) <
                            kNodeClearance * (std::abs(s) + std::abs(p)))
                            ok = false;
                }
            }
            if (ok)
                return g;
            if (step == 0)
                break; // +0 and -0 are the same
        }
    }
    throw PoleProximityError(
        "build_contour: cannot clear symbol poles by rotation");
}

bool is_real(const StateVector& v) {
    return std::all_of(v.begin(), v.end(),
                       [](const Cplx& c) { return c.imag() == 0.0; });
}

// resolvent factors k(s)/(s^{alpha-1} - mu_k) without re-validation
void resolvent_factors(const SpectralOperator& op,
                       const ABSymbolParams& params, Cplx s,
                       std::vector<Cplx>& out) {
    Cplx symbol = laplace_symbol(params, s);
    Cplx sa1 = std::pow(s, params.alpha - 1.0);
    out.resize(op.eigenvalues.size());
    for (size_t k = 0; k < out.size(); ++k) {
        Cplx d = sa1 - op.eigenvalues[k];
        if (std::abs(d) < 1e-14 * (1.0 + std::abs(sa1)))
            throw std::domain_error(
                "ab_resolvent_apply: s^{alpha-1} collides with mu_k");
        out[k] = symbol / d;
    }
}

// one fixed-resolution contour sum, ascending |s| with conjugate nodes
// paired, integrand multiplied by s^{s_power}
StateVector contour_sum(const ResolventFamilyHandle& h, double t,
                        const StateVector& v, int s_power, int n,
                        double& mag_out) {
    double cap = std::pow(1e-10 * (2.0 - h.params.beta) * h.params.c,
                          1.0 / (2.0 - h.params.beta));
    double r_min = std::min(h.contour.r_min / t, cap);
    double r_max = h.contour.r_max / t;
    if (!(r_min < r_max))
        r_min = r_max * 1e-12;

    std::vector<double> r, dr;
    radial_rule(h.contour, r_min, r_max, n, r, dr);
    double g = cleared_gamma(r, h.contour.gamma,
                             forbidden_points(h.op, h.params));

    StateVector acc(v.size(), Cplx(0.0, 0.0));
    std::vector<double> mag(v.size(), 0.0);
    std::vector<Cplx> fu, fl;
    Cplx dir = std::polar(1.0, g);
    for (int j = 0; j < n; ++j) {
        Cplx su = r[j] * dir;
        Cplx sl = std::conj(su);
        // upper ray outward: ds = e^{i g} dr; lower ray inward: -e^{-i g} dr
        Cplx wu = dir * dr[j];
        Cplx wl = -std::conj(wu);
        Cplx eu = std::exp(su * t);
        Cplx el = std::exp(sl * t);
        for (int p = 0; p < s_power; ++p) {
            eu *= su;
            el *= sl;
        }
        resolvent_factors(h.op, h.params, su, fu);
        resolvent_factors(h.op, h.params, sl, fl);
        for (size_t k = 0; k < v.size(); ++k) {
            Cplx a = wu * eu * fu[k] * v[k];
            Cplx b = wl * el * fl[k] * v[k];
            acc[k] += a + b;
            mag[k] += std::abs(a) + std::abs(b);
        }
    }
    mag_out = 0.0;
    for (size_t k = 0; k < v.size(); ++k) {
        acc[k] /= Cplx(0.0, 2.0 * kPi);
        mag_out = std::max(mag_out, mag[k] / (2.0 * kPi));
    }
    return acc;
}

StateVector contour_apply(const ResolventFamilyHandle& h, double t,
                          const StateVector& v, int s_power) {
    if (!(t > 0.0))
        throw std::invalid_argument("v_apply: t must be positive");
    if (v.size() != h.op.eigenvalues.size())
        throw std::invalid_argument("v_apply: dimension mismatch");

    bool real_data = is_real(v) && is_real(h.op.eigenvalues);
    double mag = 0.0;
    StateVector prev = contour_sum(h, t, v, s_power, h.contour.n_nodes, mag);
    for (int n = 2 * h.contour.n_nodes; n <= kMaxNodesPerRay; n *= 2) {
        StateVector cur = contour_sum(h, t, v, s_power, n, mag);
        double diff = 0.0, norm = 0.0;
        for (size_t k = 0; k < v.size(); ++k) {
            diff = std::max(diff, std::abs(cur[k] - prev[k]));
            norm = std::max(norm, std::abs(cur[k]));
        }
        // relative criterion: the family norm spans hundreds of orders of
        // magnitude over t, so a fixed absolute target would be either
        // unreachable (derivatives at small t) or vacuous (large t); the
        // roundoff term admits that the sum cannot beat the cancellation
        // floor of its own terms
        double floor = std::max(30.0 * 2.3e-16 * mag, 1e-16);
        if (diff < std::max(kRefineTol * norm, floor)) {
            if (real_data)
                for (Cplx& c : cur)
                    c = Cplx(c.real(), 0.0);
            return cur;
        }
        prev = std::move(cur);
    }
    throw QuadratureError("v_apply: contour refinement did not converge");
}

} // namespace

void ContourSpec::validate(double theta) const {
    if (!(gamma > theta) || !(gamma < kPi))
        throw std::invalid_argument("ContourSpec: gamma outside (theta, pi)");
    if (!(gamma > kPi / 2.0))
        throw std::invalid_argument("ContourSpec: gamma must exceed pi/2");
    if (!(r_min > 0.0) || !(r_min < 1.0) || !(r_max > 1.0))
        throw std::invalid_argument("ContourSpec: need r_min < 1 < r_max");
    if (n_nodes < 8)
        throw std::invalid_argument("ContourSpec: n_nodes must be >= 8");
}

std::string ContourSpec::to_json() const {
    nlohmann::json j;
    j["gamma"] = gamma;
    j["r_min"] = r_min;
    j["r_max"] = r_max;
    j["n_nodes"] = n_nodes;
    j["spacing"] = spacing == ContourSpacing::LogUniform ? "log-uniform"
                                                         : "geometric";
    return j.dump(2);
}

ContourSpec ContourSpec::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ContourSpec spec;
    spec.gamma = j.at("gamma").get<double>();
    spec.r_min = j.at("r_min").get<double>();
    spec.r_max = j.at("r_max").get<double>();
    spec.n_nodes = j.at("n_nodes").get<int>();
    std::string sp = j.at("spacing").get<std::string>();
    if (sp == "log-uniform")
        spec.spacing = ContourSpacing::LogUniform;
    else if (sp == "geometric")
        spec.spacing = ContourSpacing::Geometric;
    else
        throw std::invalid_argument("ContourSpec: unknown spacing " + sp);
    return spec;
}

ResolventFamilyHandle make_resolvent_family(const SpectralOperator& op,
                                            const ABSymbolParams& params) {
    return make_resolvent_family(op, params, ContourSpec{});
}

ResolventFamilyHandle make_resolvent_family(const SpectralOperator& op,
                                            const ABSymbolParams& params,
                                            const ContourSpec& contour) {
    op.validate();
    params.validate();
    if (params.beta >= 1.0 + params.alpha)
        throw NotWellPosedError(
            "make_resolvent_family: beta >= 1 + alpha, the contour integral "
            "for V(t) is not absolutely convergent");
    contour.validate(op.theta);
    return {op, params, contour};
}

StateVector ab_resolvent_apply(const SpectralOperator& op,
                               const ABSymbolParams& params, Cplx s,
                               const StateVector& v) {
    op.validate();
    params.validate();
    if (v.size() != op.eigenvalues.size())
        throw std::invalid_argument("ab_resolvent_apply: dimension mismatch");
    std::vector<Cplx> f;
    resolvent_factors(op, params, s, f);
    StateVector out(v.size());
    for (size_t k = 0; k < v.size(); ++k)
        out[k] = f[k] * v[k];
    return out;
}

double ab_resolvent_norm(const SpectralOperator& op,
                         const ABSymbolParams& params, Cplx s) {
    op.validate();
    params.validate();
    std::vector<Cplx> f;
    resolvent_factors(op, params, s, f);
    double norm = 0.0;
    for (const Cplx& c : f)
        norm = std::max(norm, std::abs(c));
    return norm;
}

std::vector<ContourNode> build_contour(const SpectralOperator& op,
                                       const ABSymbolParams& params,
                                       const ContourSpec& spec) {
    op.validate();
    params.validate();
    spec.validate(op.theta);
    std::vector<double> r, dr;
    radial_rule(spec, spec.r_min, spec.r_max, spec.n_nodes, r, dr);
    double g = cleared_gamma(r, spec.gamma, forbidden_points(op, params));
    std::vector<ContourNode> nodes;
    nodes.reserve(2 * spec.n_nodes);
    Cplx dir = std::polar(1.0, g);
    for (int j = 0; j < spec.n_nodes; ++j) {
        Cplx su = r[j] * dir;
        Cplx wu = dir * dr[j];
        nodes.push_back({su, wu});
        nodes.push_back({std::conj(su), -std::conj(wu)});
    }
    return nodes;
}

StateVector v_apply(const ResolventFamilyHandle& handle, double t,
                    const StateVector& v) {
    return contour_apply(handle, t, v, 0);
}

StateVector v_apply_derivative(const ResolventFamilyHandle& handle, double t,
                               const StateVector& v, int order) {
    if (order < 1 || order > 2)
        throw std::invalid_argument("v_apply_derivative: order must be 1 or 2");
    return contour_apply(handle, t, v, order);
}

StateVector ml_family_apply(const SpectralOperator& op, const MLParams& params,
                            double t, const StateVector& v) {
    op.validate();
    params.validate();
    if (!(t > 0.0))
        throw std::invalid_argument("ml_family_apply: t must be positive");
    if (v.size() != op.eigenvalues.size())
        throw std::invalid_argument("ml_family_apply: dimension mismatch");
    double ta = std::pow(t, params.alpha);
    StateVector out(v.size());
    for (size_t k = 0; k < v.size(); ++k) {
        Cplx mu = op.eigenvalues[k];
        // z = -lambda_k t^alpha with lambda_k = -mu_k
        if (mu.imag() == 0.0)
            out[k] = ml_eval(params, mu.real() * ta) * v[k];
        else
            out[k] = ml_eval(params, mu * ta) * v[k];
    }
    return out;
}

StateVector decomposition_residual(const ResolventFamilyHandle& handle,
                                   double t, const StateVector& v) {
    StateVector full = v_apply(handle, t, v);
    StateVector ml = ml_family_apply(
        handle.op, {handle.params.alpha, handle.params.beta}, t, v);
    for (size_t k = 0; k < full.size(); ++k)
        full[k] -= ml[k];
    return full;
}

StateVector solved_symbol_resolvent_apply(const SpectralOperator& op,
                                          const ABSymbolParams& params, Cplx s,
                                          const StateVector& v) {
    op.validate();
    params.validate();
    if (v.size() != op.eigenvalues.size())
        throw std::invalid_argument(
            "solved_symbol_resolvent_apply: dimension mismatch");
    Cplx symbol = laplace_symbol(params, s);
    Cplx sa1 = std::pow(s, params.alpha - 1.0);
    StateVector out(v.size());
    for (size_t k = 0; k < v.size(); ++k) {
        Cplx d = symbol * sa1 - op.eigenvalues[k];
        if (std::abs(d) < 1e-14 * (1.0 + std::abs(symbol * sa1)))
            throw std::domain_error(
                "solved_symbol_resolvent_apply: denominator vanishes");
        out[k] = symbol * v[k] / d;
    }
    return out;
}

TruncationBudget truncation_error_budget(const ResolventFamilyHandle& handle,
                                         double t) {
    if (!(t > 0.0))
        throw std::invalid_argument(
            "truncation_error_budget: t must be positive");
    double beta = handle.params.beta;
    double c = handle.params.c;
    double cap = std::pow(1e-10 * (2.0 - beta) * c, 1.0 / (2.0 - beta));
    double r_min = std::min(handle.contour.r_min / t, cap);
    double r_max = handle.contour.r_max / t;
    double cosg = std::cos(handle.contour.gamma); // negative on the contour
    TruncationBudget budget;
    // small-s envelope of the integrand is |s|^{1-beta}/c
    budget.inner =
        std::pow(r_min, 2.0 - beta) / ((2.0 - beta) * c * 2.0 * kPi);
    budget.outer = std::exp(r_max * t * cosg) * std::pow(r_max, -beta) /
                   (2.0 * kPi * t * std::fabs(cosg));
    return budget;
}

} // namespace abres
