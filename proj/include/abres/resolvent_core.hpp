#ifndef ABRES_RESOLVENT_CORE_HPP
#define ABRES_RESOLVENT_CORE_HPP

#include "abres/ab_kernel.hpp"
#include "abres/operator_model.hpp"

#include <string>
#include <vector>

namespace abres {

enum class ContourSpacing { LogUniform, Geometric };

/// Sectorial contour {r e^{+-i gamma} : r_min <= r <= r_max}, oriented
/// upward (lower ray inward, upper ray outward), discretized with n_nodes
/// radii per ray. The radii here are reference values at t = 1; v_apply
/// rescales them by 1/t so the integrand is resolved uniformly in t.
struct ContourSpec {
    double gamma = 2.356194490192345; // 3 pi / 4
    double r_min = 1e-8;
    double r_max = 200.0;
    int n_nodes = 64;
    ContourSpacing spacing = ContourSpacing::LogUniform;

    /// Throws std::invalid_argument unless gamma in (theta, pi), gamma >
    /// pi/2, r_min < 1 < r_max, n_nodes >= 8.
    void validate(double theta) const;

    std::string to_json() const;
    static ContourSpec from_json(const std::string& text);
};

struct ContourNode {
    Cplx s;
    Cplx weight; // encodes ds along the oriented contour
};

/// Immutable evaluation handle for the family V(t). Construction refuses
/// beta >= 1 + alpha, where the contour integral stops converging
/// absolutely.
struct ResolventFamilyHandle {
    SpectralOperator op;
    ABSymbolParams params;
    ContourSpec contour;
};

ResolventFamilyHandle make_resolvent_family(const SpectralOperator& op,
                                            const ABSymbolParams& params);
ResolventFamilyHandle make_resolvent_family(const SpectralOperator& op,
                                            const ABSymbolParams& params,
                                            const ContourSpec& contour);

/// Coefficients k(s) v_k / (s^{alpha-1} - mu_k) with k the Laplace symbol,
/// principal branches throughout. Throws on the branch cut, near a symbol
/// pole, and on eigenvalue collision.
StateVector ab_resolvent_apply(const SpectralOperator& op,
                               const ABSymbolParams& params, Cplx s,
                               const StateVector& v);

/// max_k |k(s) / (s^{alpha-1} - mu_k)|, the operator norm in the diagonal
/// model.
double ab_resolvent_norm(const SpectralOperator& op,
                         const ABSymbolParams& params, Cplx s);

/// Quadrature nodes and weights for the discretized contour. The radii are
/// used exactly as given in `spec` (no t-scaling). If a node falls within
/// 1e-10 (relative) of a symbol pole or of a resolvent collision point the
/// contour is rotated by up to +-0.05 rad; beyond that PoleProximityError.
std::vector<ContourNode> build_contour(const SpectralOperator& op,
                                       const ABSymbolParams& params,
                                       const ContourSpec& spec);

/// V(t) v = (1/2 pi i) sum_j w_j e^{s_j t} R(s_j) v over the t-scaled
/// contour, refined by node doubling until two refinements agree to 1e-9
/// per coefficient (QuadratureError otherwise). Output imaginary parts are
/// forced to zero when the spectrum and data are real. Summation order is
/// fixed (ascending |s|, conjugate nodes paired) so results are
/// bit-reproducible.
StateVector v_apply(const ResolventFamilyHandle& handle, double t,
                    const StateVector& v);

/// d^order/dt^order V(t) v, computed with the extra factor s^order in the
/// integrand; order in {1, 2}.
StateVector v_apply_derivative(const ResolventFamilyHandle& handle, double t,
                               const StateVector& v, int order = 1);

/// Modal reference solution E_{alpha,beta}(-lambda_k t^alpha) v_k with
/// lambda_k = -mu_k.
StateVector ml_family_apply(const SpectralOperator& op, const MLParams& params,
                            double t, const StateVector& v);

/// K(t) v = V(t) v - E(t) v, the defect of V against the modal ML family.
StateVector decomposition_residual(const ResolventFamilyHandle& handle,
                                   double t, const StateVector& v);

/// Diagnostic alternative resolvent: u_k = k(s) v_k / (k(s) s^{alpha-1}
/// - mu_k), i.e. the componentwise solution of the transformed equation in
/// solved form. Differs from ab_resolvent_apply unless alpha = beta = 1.
StateVector solved_symbol_resolvent_apply(const SpectralOperator& op,
                                          const ABSymbolParams& params, Cplx s,
                                          const StateVector& v);

/// Analytic truncation bounds for the radial cutoffs used by v_apply at
/// this t: `inner` integrates the |s|^{1-beta}/c small-s envelope over
/// [0, r_min], `outer` bounds the exponential tail beyond r_max.
struct TruncationBudget {
    double inner = 0.0;
    double outer = 0.0;
};

TruncationBudget truncation_error_budget(const ResolventFamilyHandle& handle,
                                         double t);

} // namespace abres

#endif
