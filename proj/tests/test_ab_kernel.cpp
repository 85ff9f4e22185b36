#include "doctest.h"

#include "abres/ab_kernel.hpp"
#include "abres/errors.hpp"
#include "abres/ml_series_oracle.hpp"

#include <cmath>
#include <complex>
#include <vector>

using abres::ABSymbolParams;
using abres::Cplx;

namespace {

double rel_err(Cplx got, Cplx want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

double loglog_slope(const std::vector<double>& xs,
                    const std::vector<double>& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = xs.size();
    for (size_t i = 0; i < n; ++i) {
        double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

TEST_CASE("ABSymbolParams validation") {
    ABSymbolParams bad_alpha{1.2, 1.0, 1.0};
    ABSymbolParams bad_beta{0.8, 0.5, 1.0};
    ABSymbolParams bad_c{0.8, 1.2, 0.0};
    ABSymbolParams good{0.8, 1.2, 1.0};
    CHECK_THROWS_AS(bad_alpha.validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad_beta.validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad_c.validate(), std::invalid_argument);
    CHECK_NOTHROW(good.validate());
}

TEST_CASE("kernel_eval anchors") {
    CHECK(rel_err(abres::kernel_eval({1.0, 1.0, 1.0}, 2.0), std::exp(-2.0)) <
          1e-13);
    // frozen oracle value of E_{0.8,1.2}(-1)
    CHECK(rel_err(abres::kernel_eval({0.8, 1.2, 1.0}, 1.0),
                  0.4912231047175318077) < 1e-12);
    CHECK(rel_err(abres::kernel_eval({0.6, 1.0, 2.0}, 1e-12), 1.0) < 1e-6);
    CHECK_THROWS_AS(abres::kernel_eval({0.8, 1.2, 1.0}, 0.0),
                    std::invalid_argument);
}

TEST_CASE("kernel bounded near the origin for beta >= 1") {
    for (double beta : {1.0, 1.2, 1.9}) {
        for (double t = 1e-6; t > 1e-12; t *= 0.1) {
            double v = abres::kernel_eval({0.8, beta, 1.0}, t);
            CHECK(std::isfinite(v));
            CHECK(std::fabs(v) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("laplace_symbol anchors and errors") {
    CHECK(rel_err(abres::laplace_symbol({0.8, 1.2, 1.0}, Cplx(1, 0)),
                  Cplx(0.5, 0)) < 1e-15);
    CHECK(rel_err(abres::laplace_symbol({1.0, 1.0, 1.0}, Cplx(4, 0)),
                  Cplx(0.2, 0)) < 1e-15);
    CHECK_THROWS_AS(abres::laplace_symbol({0.8, 1.2, 1.0}, Cplx(-2, 0)),
                    std::domain_error);
    CHECK_THROWS_AS(abres::laplace_symbol({0.8, 1.2, 1.0}, Cplx(0, 0)),
                    std::domain_error);
    // alpha = 1 puts the symbol pole at s = -c
    CHECK_THROWS_AS(abres::laplace_symbol({1.0, 1.0, 1.0}, Cplx(-1.0, 1e-13)),
                    abres::PoleProximityError);
    ABSymbolParams frac{0.8, 1.2, 1.0};
    CHECK(frac.symbol_poles().empty());
}

TEST_CASE("laplace_symbol conjugate symmetry") {
    ABSymbolParams p{0.8, 1.2, 1.0};
    for (Cplx s : {Cplx(2, 3), Cplx(0.1, -0.7), Cplx(5, 40)}) {
        Cplx a = abres::laplace_symbol(p, std::conj(s));
        Cplx b = std::conj(abres::laplace_symbol(p, s));
        CHECK(rel_err(a, b) < 1e-14);
    }
}

TEST_CASE("symbol asymptotic slopes along a ray") {
    ABSymbolParams p{0.8, 1.2, 1.0};
    double ang = 3.0 * M_PI / 4.0;
    auto slope_on = [&](double lo, double hi) {
        std::vector<double> rs, vs;
        for (int i = 0; i < 30; ++i) {
            double r = lo * std::pow(hi / lo, i / 29.0);
            rs.push_back(r);
            vs.push_back(std::abs(abres::laplace_symbol(p, std::polar(r, ang))));
        }
        return loglog_slope(rs, vs);
    };
    CHECK(slope_on(1e2, 1e4) == doctest::Approx(-p.beta).epsilon(0.02));
    CHECK(slope_on(1e-4, 1e-2) ==
          doctest::Approx(p.alpha - p.beta).epsilon(0.02));
}

TEST_CASE("laplace_check cross-validates the symbol") {
    CHECK(abres::laplace_check({1.0, 1.0, 1.0}, Cplx(2, 0), 100.0, 1e-10) <
          1e-8);
    CHECK(abres::laplace_check({0.8, 1.2, 1.0}, Cplx(1, 0), 500.0, 1e-9) <
          1e-6);
    CHECK(abres::laplace_check({0.5, 1.4, 2.0}, Cplx(3, 1), 200.0, 1e-9) <
          1e-6);
    CHECK(abres::laplace_check({0.8, 1.2, 1.0}, Cplx(2, 3), 200.0, 1e-9) <
          1e-6);
    CHECK_THROWS_AS(abres::laplace_check({0.8, 1.2, 1.0}, Cplx(-1, 0), 100.0,
                                         1e-9),
                    std::invalid_argument);
}
