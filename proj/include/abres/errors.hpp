#ifndef ABRES_ERRORS_HPP
#define ABRES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace abres {

/// Quadrature or series failed to reach the requested tolerance.
struct QuadratureError : std::runtime_error {
    explicit QuadratureError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Evaluation point too close to a pole of the symbol or a resolvent collision.
struct PoleProximityError : std::domain_error {
    explicit PoleProximityError(const std::string& msg) : std::domain_error(msg) {}
};

/// Resolvent family construction refused: beta >= 1 + alpha makes the
/// symbol singularity at s = 0 non-integrable.
struct NotWellPosedError : std::domain_error {
    explicit NotWellPosedError(const std::string& msg) : std::domain_error(msg) {}
};

/// Taylor series oracle exceeded its term or precision budget.
struct SeriesNotConvergedError : std::runtime_error {
    explicit SeriesNotConvergedError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace abres

#endif
