#ifndef ABRES_OPERATOR_MODEL_HPP
#define ABRES_OPERATOR_MODEL_HPP

#include "abres/mittag_leffler.hpp"

#include <functional>
#include <string>
#include <vector>

namespace abres {

/// Coefficient vector in the eigenbasis of a SpectralOperator.
using StateVector = std::vector<Cplx>;

/// Basis attached to a diagonal operator. DirichletSine means sin(kx) on
/// (0, pi), k = 1..K; Abstract carries no function space.
enum class BasisKind { Abstract, DirichletSine };

/// Diagonal sectorial operator: spectrum {mu_k} with Re mu_k <= -omega < 0,
/// contained in the sector of half-angle theta around the negative real
/// axis, 0 excluded.
struct SpectralOperator {
    std::vector<Cplx> eigenvalues;
    double omega = 1.0;
    double theta = 0.7853981633974483; // pi/4
    BasisKind basis = BasisKind::Abstract;
    int modes = 0; // K for the dirichlet-sine basis

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;

    /// JSON round-trip for CLI configs.
    std::string to_json() const;
    static SpectralOperator from_json(const std::string& text);
};

/// Coefficients v_k / (z - mu_k). Throws std::domain_error when z is within
/// 1e-14 (1+|z|) of an eigenvalue.
StateVector resolvent_apply(const SpectralOperator& op, Cplx z,
                            const StateVector& v);

/// Coefficients mu_k^gamma v_k, principal branch, gamma in (0,1). For real
/// negative mu_k the factor is |mu_k|^gamma e^{i pi gamma}.
StateVector frac_power_apply(const SpectralOperator& op, double gamma,
                             const StateVector& v);

/// Modulus |mu|^gamma recomputed through the Balakrishnan integral
///   A^gamma x = sin(pi gamma)/pi * int_0^inf t^{gamma-1} (t - mu)^{-1} (-mu) dt
/// for a single real-negative eigenvalue; used as the quadrature cross-check.
double balakrishnan_modulus(double mu, double gamma);

/// The operator with mu_k = -k^2, k = 1..K, on the dirichlet-sine basis.
SpectralOperator dirichlet_laplacian(int K);

/// Sine-series coefficients (2/pi) (u0, sin kx) of the initial datum.
/// Named data "sin x" and "sin x + sin 2x" (and generally "sin Nx") use
/// exact coefficients; arbitrary samples go through quadrature.
StateVector project_initial_datum(const SpectralOperator& op,
                                  const std::string& named_datum);
StateVector project_initial_datum(const SpectralOperator& op,
                                  const std::function<double(double)>& u0);

} // namespace abres

#endif
