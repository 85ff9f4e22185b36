#include "doctest.h"

#include "abres/mittag_leffler.hpp"
#include "abres/ml_series_oracle.hpp"
#include "abres/errors.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <random>

using abres::Cplx;
using abres::MLParams;

namespace {

double rel_err(Cplx got, Cplx want) {
    double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

double rel_err(double got, double want) {
    return rel_err(Cplx(got, 0.0), Cplx(want, 0.0));
}

// Frozen references computed once by direct extended-precision Taylor
// summation (120-digit working precision), stored to 19 significant digits.
struct Frozen {
    double alpha, beta;
    Cplx z;
    Cplx value;
};
const Frozen kFrozen[] = {
    {0.8, 1.2, {-1.0, 0.0}, {0.4912231047175318077, 0.0}},
    {0.8, 1.2, {-4.0, 0.0}, {0.1306642197674535980, 0.0}},
    {0.5, 1.4, {-2.0, 0.0}, {0.3582885720041509241, 0.0}},
    {0.8, 1.0, {-1.0, 0.0}, {0.3869485786189768462, 0.0}},
    {0.3, 1.7, {-3.0, 0.0}, {0.2846755121133178036, 0.0}},
    {0.8, 1.1, {-1.0, 0.0}, {0.4428865635906996679, 0.0}},
};

} // namespace

TEST_CASE("ml_eval parameter validation") {
    CHECK_THROWS_AS(abres::ml_eval(MLParams{0.0, 1.0}, Cplx(1, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(abres::ml_eval(MLParams{-0.5, 1.0}, Cplx(1, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        abres::ml_eval(MLParams{0.8, 1.2},
                       Cplx(std::numeric_limits<double>::quiet_NaN(), 0)),
        std::invalid_argument);
}

TEST_CASE("ml_eval trivial anchors") {
    CHECK(rel_err(abres::ml_eval(MLParams{1, 1}, 1.0), std::exp(1.0)) < 1e-14);
    CHECK(rel_err(abres::ml_eval(MLParams{0.8, 1.2}, 0.0),
                  abres::reciprocal_gamma(1.2)) < 1e-15);
    CHECK(rel_err(abres::ml_eval(MLParams{2, 1}, -4.0), std::cos(2.0)) < 1e-13);
}

TEST_CASE("ml_eval frozen oracle values") {
    for (const auto& f : kFrozen) {
        Cplx got = abres::ml_eval(MLParams{f.alpha, f.beta}, f.z);
        CHECK(rel_err(got, f.value) < 1e-12);
    }
}

TEST_CASE("ml_eval real input gives exactly real output") {
    for (double x : {-40.0, -17.3, -2.5, -1.0, 0.0, 0.5, 3.0}) {
        Cplx v = abres::ml_eval(MLParams{0.8, 1.2}, Cplx(x, 0.0));
        CHECK(v.imag() == 0.0);
    }
}

TEST_CASE("special cases on |z| <= 20") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> mag(0.01, 20.0);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    for (int i = 0; i < 60; ++i) {
        Cplx z = std::polar(mag(rng), ang(rng));
        Cplx e = std::exp(z);
        CHECK(rel_err(abres::ml_eval(MLParams{1, 1}, z), e) < 1e-12);
        CHECK(rel_err(abres::ml_eval(MLParams{1, 2}, z), (e - 1.0) / z) < 1e-12);
    }
    for (double x = 0.25; x <= 4.5; x += 0.25) {
        // E_{2,1}(-x^2) = cos x
        CHECK(rel_err(abres::ml_eval(MLParams{2, 1}, -x * x), std::cos(x)) <
              1e-12);
    }
}

TEST_CASE("recurrence E_{a,b}(z) = z E_{a,a+b}(z) + 1/Gamma(b)") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> ua(0.3, 1.0);
    std::uniform_real_distribution<double> ub(1.0, 2.0);
    std::uniform_real_distribution<double> mag(0.0, 10.0);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    for (int i = 0; i < 100; ++i) {
        MLParams p{ua(rng), ub(rng)};
        Cplx z = std::polar(mag(rng), ang(rng));
        Cplx lhs = abres::ml_eval(p, z);
        Cplx rhs = z * abres::ml_eval(MLParams{p.alpha, p.alpha + p.beta}, z) +
                   abres::reciprocal_gamma(p.beta);
        CHECK(rel_err(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("sectorial bound |E(-x)|(1+x) stays bounded") {
    for (double alpha : {0.5, 0.8, 1.0}) {
        for (double beta : {1.0, 1.2, 1.5}) {
            double worst = 0.0;
            for (int i = 0; i <= 80; ++i) {
                double x = std::pow(10.0, -2.0 + 6.0 * i / 80.0);
                double v = abres::ml_eval(MLParams{alpha, beta}, -x);
                worst = std::max(worst, std::fabs(v) * (1.0 + x));
            }
            CHECK(worst < 10.0);
        }
    }
}

TEST_CASE("monotone spectral ordering in lambda") {
    for (double alpha : {0.4, 0.8, 1.0}) {
        for (double beta : {1.0, 1.2, 1.8}) {
            for (double t : {0.01, 0.5, 3.0, 40.0}) {
                double prev = std::numeric_limits<double>::max();
                for (double lam : {0.5, 1.0, 4.0, 9.0, 25.0}) {
                    double v = abres::ml_eval(MLParams{alpha, beta},
                                              -lam * std::pow(t, alpha));
                    CHECK(v < prev);
                    prev = v;
                }
            }
        }
    }
}

TEST_CASE("ml_eval matches oracle on 500 random points in its region") {
    std::mt19937 rng(20260826);
    std::uniform_real_distribution<double> ua(0.3, 1.0);
    std::uniform_real_distribution<double> ub(1.0, 2.0);
    std::uniform_real_distribution<double> uz(-50.0, 0.0);
    int tested = 0;
    double worst = 0.0;
    while (tested < 500) {
        MLParams p{ua(rng), ub(rng)};
        Cplx z(uz(rng), 0.0);
        if (!abres::ml_oracle_feasible(p, z, 20))
            continue;
        Cplx want = abres::ml_eval_oracle(p, z, 20);
        Cplx got = abres::ml_eval(p, z);
        worst = std::max(worst, rel_err(got, want));
        ++tested;
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("oracle trivial identities and budget error") {
    CHECK(rel_err(abres::ml_eval_oracle(MLParams{1, 1}, Cplx(1, 0), 30),
                  Cplx(std::exp(1.0), 0)) < 1e-14);
    CHECK(rel_err(abres::ml_eval_oracle(MLParams{1, 2}, Cplx(1, 0), 30),
                  Cplx(std::exp(1.0) - 1.0, 0)) < 1e-14);
    CHECK(rel_err(abres::ml_eval_oracle(MLParams{0.8, 1.2}, Cplx(-1, 0), 30),
                  Cplx(0.4912231047175318077, 0)) < 1e-14);
    CHECK_FALSE(abres::ml_oracle_feasible(MLParams{0.05, 1.0}, Cplx(-45, 0), 25));
    CHECK_THROWS_AS(abres::ml_eval_oracle(MLParams{0.05, 1.0}, Cplx(-45, 0), 25),
                    abres::SeriesNotConvergedError);
}

TEST_CASE("ml_deriv_t anchors") {
    // alpha = beta = 1: d/dt e^{-t} = -e^{-t}
    CHECK(rel_err(abres::ml_deriv_t(MLParams{1, 1}, 1.0, 1.0), -std::exp(-1.0)) <
          1e-12);
    CHECK(abres::ml_deriv_t(MLParams{0.6, 1.3}, 0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(abres::ml_deriv_t(MLParams{0.8, 1.2}, 1.0, 0.0),
                    std::invalid_argument);

    // centered finite difference of t -> E(-lambda t^alpha), step 1e-6
    for (auto [alpha, beta, lam, t] :
         {std::array<double, 4>{0.8, 1.2, 1.0, 1.0},
          std::array<double, 4>{0.8, 1.2, 4.0, 0.7},
          std::array<double, 4>{0.5, 1.4, 2.0, 1.3},
          std::array<double, 4>{1.0, 2.0, 1.0, 1.0}}) {
        MLParams p{alpha, beta};
        double h = 1e-6;
        auto f = [&](double tt) {
            return abres::ml_eval(p, -lam * std::pow(tt, alpha));
        };
        double fd = (f(t + h) - f(t - h)) / (2.0 * h);
        CHECK(rel_err(abres::ml_deriv_t(p, lam, t), fd) < 1e-6);
    }
}
