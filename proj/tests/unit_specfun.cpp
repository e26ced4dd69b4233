#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "doctest.h"
#include "fran/errors.hpp"
#include "fran/specfun.hpp"

using namespace fran;
using namespace fran::specfun;
using std::numbers::pi;

namespace {
// -int_{-x}^inf e^{-t}/t dt by tanh-sinh style quadrature from Boost.
double ei_oracle(double x) {
    boost::math::quadrature::exp_sinh<double> q;
    return -q.integrate([](double t) { return std::exp(-t) / t; }, -x, std::numeric_limits<double>::infinity());
}
}  // namespace

TEST_CASE("Ei matches quadrature") {
    CHECK(exp_integral_ei(-1.0) == doctest::Approx(-0.219384).epsilon(1e-6));
    CHECK(exp_integral_ei(-1.0) == doctest::Approx(ei_oracle(-1.0)).epsilon(1e-10));
    CHECK(std::abs(exp_integral_ei(-0.1608) - ei_oracle(-0.1608)) < 1e-8);
    CHECK(std::abs(exp_integral_ei(-50.0)) < 1e-20);
    CHECK(exp_integral_ei(-50.0) < 0.0);
    // both sides of the series/continued-fraction switch
    for (double x : {-4.9, -5.0, -5.1, -7.5, -20.0})
        CHECK(exp_integral_ei(x) == doctest::Approx(ei_oracle(x)).epsilon(1e-9));
    CHECK_THROWS_AS(exp_integral_ei(0.0), DomainError);
}

// Ei(x) = -E1(-x) falls towards -inf as x -> 0-, so it decreases on (-inf, 0).
TEST_CASE("Ei monotone on the negative axis") {
    double prev = exp_integral_ei(-60.0);
    for (double x = -59.5; x < 0.0; x += 0.25) {
        const double v = exp_integral_ei(x);
        CHECK(v < prev);
        CHECK(v < 0.0);
        prev = v;
    }
}

TEST_CASE("interference constant") {
    CHECK(interference_constant(4.0) == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(interference_constant(3.0) == doctest::Approx(2 * pi / 3 * 2 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(interference_constant(3.0) == doctest::Approx(2.4184).epsilon(1e-4));
    CHECK(interference_constant(2.0 + 1e-7) > 1e6);
    double prev = interference_constant(2.05);
    for (double a = 2.1; a <= 12.0; a += 0.05) {
        CHECK(interference_constant(a) < prev);
        prev = interference_constant(a);
    }
    CHECK_THROWS_AS(interference_constant(2.0), DomainError);
}

namespace {
// Default settings give ~1e-7 relative, which is not 1e-6 absolute once rho
// grows past ~10.
QuadratureSettings tight() {
    QuadratureSettings q;
    q.relative_tolerance = 1e-9;
    q.absolute_tolerance = 1e-12;
    return q;
}
}  // namespace

TEST_CASE("rho against its alpha = 4 closed form") {
    CHECK(std::abs(rho(1.0, 4.0) - pi / 4) <= 1e-6);
    // sqrt(10) (pi/2 - arctan(1/sqrt(10))) = 3.998760...
    CHECK(rho(10.0, 4.0) == doctest::Approx(std::sqrt(10.0) * (pi / 2 - std::atan(1 / std::sqrt(10.0)))).epsilon(1e-7));
    CHECK(rho(10.0, 4.0) == doctest::Approx(3.99876).epsilon(1e-6));
    CHECK(rho(1e-8, 4.0) < 1e-3);
    CHECK(rho_closed_alpha4(1.0) == doctest::Approx(pi / 4).epsilon(1e-15));
    CHECK(rho_closed_alpha4(4.0) == doctest::Approx(2.21430).epsilon(1e-5));
    CHECK(std::abs(rho_closed_alpha4(4.0) - rho(4.0, 4.0)) <= 1e-6);
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0, 100.0}) CHECK(std::abs(rho_closed_alpha4(t) - rho(t, 4.0, tight())) <= 1e-6);
    for (double t = 0.1; t <= 1000.0; t *= 1.5) {
        CHECK(std::abs(rho_closed_alpha4(t) - rho(t, 4.0, tight())) <= 1e-6);
        CHECK(rho(t, 4.0) == doctest::Approx(rho_closed_alpha4(t)).epsilon(2e-7));
    }
}

TEST_CASE("rho increasing in T") {
    for (double alpha : {3.0, 4.0, 5.5}) {
        double prev = rho(0.01, alpha);
        for (double t = 0.02; t < 200.0; t *= 1.7) {
            const double v = rho(t, alpha);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("semi-infinite quadrature examples") {
    const QuadratureSettings q;
    auto r1 = integrate_semi_infinite([](double t) { return std::exp(-t); }, 0.0, q);
    CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-7));
    auto r2 = integrate_semi_infinite([](double t) { return 1.0 / (1.0 + t * t); }, 0.0, q);
    CHECK(r2.value == doctest::Approx(pi / 2).epsilon(1e-7));
    auto r3 = integrate_semi_infinite([](double t) { return t * std::exp(-t * t); }, 1.0, q);
    CHECK(r3.value == doctest::Approx(std::exp(-1.0) / 2).epsilon(1e-7));
    CHECK(r3.error_estimate >= 0.0);
}

TEST_CASE("finite-interval quadrature") {
    auto r = integrate_interval([](double t) { return std::sin(t); }, 0.0, pi);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("quadrature budget exhaustion reports the partial sum") {
    QuadratureSettings q;
    q.max_subdivisions = 50;
    try {
        integrate_semi_infinite([](double t) { return 1.0 / (1.0 + t); }, 0.0, q);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.partial_value() > 0.0);
    }
}

TEST_CASE("quadrature settings validation") {
    QuadratureSettings q;
    q.relative_tolerance = 0.0;
    CHECK_THROWS_AS(q.validate(), DomainError);
    q = {};
    q.max_subdivisions = 0;
    CHECK_THROWS_AS(q.validate(), DomainError);
    CHECK_NOTHROW(QuadratureSettings{}.validate());
}
