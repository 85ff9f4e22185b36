#ifndef ABRES_ANALYSIS_HPP
#define ABRES_ANALYSIS_HPP

#include "abres/resolvent_core.hpp"

#include <string>
#include <utility>
#include <vector>

namespace abres {

/// Least-squares power-law fit in log-log coordinates. `note` is empty for
/// a trustworthy fit and "window-too-narrow" when r^2 < 0.98, in which case
/// the slope should not be graded pass/fail.
struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::pair<double, double> window{0.0, 0.0};
    std::string note;

    bool window_ok() const { return note.empty(); }
    std::string to_json() const;
};

/// Outcome of a fit-then-check bound verification. The constants are fitted
/// on the first half of the grid; max_violation_ratio <= 1 (up to 1e-6)
/// means the bound holds on the rest with those constants.
struct BoundReport {
    std::string theorem_id;
    double fitted_constant = 0.0;
    double fitted_c1 = 0.0;
    double max_violation_ratio = 0.0;
    std::vector<double> grid;
    std::vector<double> values;

    std::string to_json() const;
};

/// OLS slope of log(value) against log(t) over the samples inside the
/// window. Requires >= 10 samples in the window, all with positive values.
DecayFit fit_loglog_slope(const std::vector<std::pair<double, double>>& samples,
                          std::pair<double, double> window);

/// Checks the Mittag-Leffler envelope of the family norm t -> sup-coefficient
/// modulus of V(t): fits C and c1 on the first half of the grid (c1 scanned
/// over [0.1 c omega, c omega], C extrapolated from the ratio trend), then
/// reports the worst ratio against C E_{alpha,beta}(-c1 t^alpha) over the
/// whole grid. The grid must be positive and span at least three decades.
/// With use_ml_family the modal ML family replaces the contour family.
BoundReport check_ml_decay(const ResolventFamilyHandle& handle,
                           const std::vector<double>& t_grid,
                           bool use_ml_family = false);

/// Small-t slope of t -> sup-coefficient modulus of A^gamma V(t),
/// gamma in (0,1).
DecayFit check_weighted_stability(const ResolventFamilyHandle& handle,
                                  double gamma,
                                  const std::vector<double>& t_grid);

/// Small-t slope of t -> sup-coefficient modulus of dV/dt, computed with
/// the extra factor s under the contour integral. delta in (0,1) is the
/// tolerance exponent of the bound the caller grades against.
DecayFit check_time_derivative(const ResolventFamilyHandle& handle,
                               const std::vector<double>& t_grid,
                               double delta);

/// Small-t slope of t -> sup-coefficient modulus of A^gamma d^k V/dt^k,
/// k in {1,2}, gamma in (0,1).
DecayFit check_mixed_estimate(const ResolventFamilyHandle& handle,
                              double gamma, int k,
                              const std::vector<double>& t_grid);

/// One CSV row "theorem_id,params,fitted_slope,expected_slope,tolerance,pass"
/// with 17-significant-digit numerics.
std::string theorem_csv_row(const std::string& theorem_id,
                            const std::string& params, double fitted_slope,
                            double expected_slope, double tolerance,
                            bool pass);

} // namespace abres

#endif
