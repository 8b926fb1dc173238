#define BOOST_MATH_OVERFLOW_ERROR_POLICY ignore_error
#include <boost/math/special_functions/bessel.hpp>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "scattercorr/specfun.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

using namespace scattercorr::specfun;
using Catch::Approx;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace

TEST_CASE("bessel_j trivial values") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(bessel_j(7, 0.0) == 0.0);
}

TEST_CASE("first zero of J0 from an independent power-series oracle") {
  const double z = oracle::bisect([](double x) { return oracle::power_series_j(0, x); }, 2.0, 3.0);
  CHECK(std::abs(z - 2.404825557695773) < 1e-12);
  CHECK(std::abs(bessel_j(0, 2.404825557695773)) < 1e-12);
  const double lib_zero = oracle::bisect([](double x) { return bessel_j(0, x); }, 2.0, 3.0);
  CHECK(std::abs(lib_zero - z) < 1e-12);
}

TEST_CASE("bessel_j agrees with the ascending series for small arguments") {
  for (double x : {0.01, 0.3, 1.0, 2.5, 4.0, 6.0}) {
    for (int n = 0; n <= 20; ++n) {
      const double want = oracle::power_series_j(n, x);
      if (std::abs(want) < 1e-250) continue;
      INFO("n=" << n << " x=" << x);
      CHECK(rel_err(bessel_j(n, x), want) < 1e-12);
    }
  }
}

TEST_CASE("cylinder functions match Boost.Math inside the accuracy envelope") {
  for (double x : {0.05, 0.9, 3.3, 11.0, 19.999, 20.0, 37.5, 88.0, 150.0, 200.0, 5000.3, 99000.0}) {
    const auto j = bessel_j_array(256, x);
    const auto y = bessel_y_array(256, x);
    // Relative accuracy is meaningful away from zeros; near zeros compare
    // against the local amplitude sqrt(2 / (pi x)).
    const double amplitude = std::sqrt(2.0 / (std::numbers::pi * x));
    for (int n = 0; n <= 256; ++n) {
      INFO("n=" << n << " x=" << x);
      const double bj = boost::math::cyl_bessel_j(n, x);
      const double by = boost::math::cyl_neumann(n, x);
      CHECK(std::abs(j[n] - bj) <= 2e-12 * std::max(std::abs(bj), n < x ? amplitude : 0.0) + 1e-300);
      if (std::isfinite(by)) {
        CHECK(std::abs(y[n] - by) <= 2e-12 * std::max(std::abs(by), n < x ? amplitude : 0.0));
      }
    }
  }
}

TEST_CASE("Hankel function approaches its large-argument form") {
  // leading term alone is off by 1/(8x) = 2.5e-3 here, so keep the first correction
  const double x = 50.0;
  const std::complex<double> asym = std::sqrt(2.0 / (std::numbers::pi * x)) *
                                    std::polar(1.0, x - std::numbers::pi / 4.0) *
                                    std::complex<double>(1.0, -1.0 / (8.0 * x));
  CHECK(std::abs(hankel1(0, x) - asym) < 1e-3 * std::abs(asym));
}

TEST_CASE("Wronskian at x = 1") {
  const double x = 1.0;
  const double w = bessel_j(0, x) * bessel_y_prime(0, x) - bessel_j_prime(0, x) * bessel_y(0, x);
  CHECK(w == Approx(2.0 / (std::numbers::pi * x)).epsilon(1e-13));
}

TEST_CASE("hankel1_prime matches a central finite difference") {
  const double x = 3.7;
  const double h = 1e-5;
  const auto fd = oracle::central_difference([](double t) { return hankel1(1, t); }, x, h);
  CHECK(std::abs(hankel1_prime(1, x) - fd) < 1e-8);
}

TEST_CASE("Wronskian invariant over the full grid") {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = 0.1 + (100.0 - 0.1) * i / 999.0;
    const auto j = bessel_j_array(65, x);
    const auto y = bessel_y_array(65, x);
    const double target = 2.0 / (std::numbers::pi * x);
    for (int n = 0; n <= 64; ++n) {
      const double jp = detail::cylinder_derivative(j, n);
      const double yp = detail::cylinder_derivative(y, n);
      worst = std::max(worst, rel_err(j[n] * yp - jp * y[n], target));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("three-term recurrence closes for J and Y") {
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double x = 0.1 + (100.0 - 0.1) * i / 199.0;
    const auto j = bessel_j_array(65, x);
    const auto y = bessel_y_array(65, x);
    for (int n = 1; n <= 64; ++n) {
      for (const auto* f : {&j, &y}) {
        const double lhs = (*f)[n - 1] + (*f)[n + 1];
        const double rhs = 2.0 * n / x * (*f)[n];
        const double scale = std::max({std::abs((*f)[n - 1]), std::abs((*f)[n + 1]), std::abs(rhs)});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
      }
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("negative orders reflect exactly") {
  for (double x : {0.4, 3.0, 27.0}) {
    for (int n = 0; n <= 12; ++n) {
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      CHECK(bessel_j(-n, x) == sign * bessel_j(n, x));
      CHECK(bessel_y(-n, x) == sign * bessel_y(n, x));
      CHECK(hankel1(-n, x) == sign * hankel1(n, x));
    }
  }
}

TEST_CASE("spherical functions: closed forms") {
  CHECK(std::abs(spherical_j(0, std::numbers::pi)) < 1e-14);
  CHECK(spherical_j(0, 1.0) == Approx(std::sin(1.0)).epsilon(1e-15));
  const double x = 2.0;
  const std::complex<double> want = std::complex<double>(0.0, -1.0) * std::polar(1.0, x) / x;
  CHECK(std::abs(spherical_h1(0, x) - want) < 1e-13);

  for (double t : {0.2, 1.0, 4.5, 13.0, 60.0}) {
    const double s = std::sin(t);
    const double c = std::cos(t);
    const double j1 = s / (t * t) - c / t;
    const double j2 = (3.0 / (t * t) - 1.0) * s / t - 3.0 * c / (t * t);
    const double j3 = (15.0 / (t * t * t) - 6.0 / t) * s / t - (15.0 / (t * t) - 1.0) * c / t;
    const double y1 = -c / (t * t) - s / t;
    const double y2 = (-3.0 / (t * t) + 1.0) * c / t - 3.0 * s / (t * t);
    const auto j = spherical_j_array(3, t);
    const auto y = spherical_y_array(2, t);
    const double amp = 1.0 / t;
    INFO("t=" << t);
    CHECK(std::abs(j[1] - j1) < 1e-13 * amp);
    CHECK(std::abs(j[2] - j2) < 1e-12 * amp);
    CHECK(std::abs(j[3] - j3) < 1e-11 * amp);
    CHECK(std::abs(y[1] - y1) < 1e-13 * std::max(amp, std::abs(y1)));
    CHECK(std::abs(y[2] - y2) < 1e-12 * std::max(amp, std::abs(y2)));
  }
}

TEST_CASE("spherical functions match Boost.Math") {
  for (double x : {1e-3, 0.5, 2.0, 9.0, 31.0, 120.0, 700.0}) {
    const auto j = spherical_j_array(80, x);
    const auto y = spherical_y_array(80, x);
    for (int n = 0; n <= 80; ++n) {
      INFO("n=" << n << " x=" << x);
      const double bj = boost::math::sph_bessel(n, x);
      const double by = boost::math::sph_neumann(n, x);
      const double floor = n < x ? 1.0 / x : 0.0;
      CHECK(std::abs(j[n] - bj) <= 1e-12 * std::max(std::abs(bj), floor) + 1e-300);
      if (std::isfinite(by)) CHECK(std::abs(y[n] - by) <= 1e-12 * std::max(std::abs(by), floor));
    }
  }
}

TEST_CASE("spherical derivatives match finite differences") {
  for (int n : {0, 1, 4}) {
    for (double x : {0.7, 5.5}) {
      const auto fd = oracle::central_difference([n](double t) { return spherical_h1(n, t); }, x, 1e-5);
      CHECK(std::abs(spherical_h1_prime(n, x) - fd) < 1e-7 * std::max(1.0, std::abs(fd)));
    }
  }
  CHECK(spherical_j_prime(1, 0.0) == Approx(1.0 / 3.0));
  CHECK(spherical_j_prime(0, 0.0) == 0.0);
}

TEST_CASE("legendre_p") {
  CHECK(legendre_p(0, 0.77) == 1.0);
  CHECK(legendre_p(1, 0.3) == 0.3);
  const double t = -0.42;
  const double p5_closed = (63.0 * std::pow(t, 5) - 70.0 * std::pow(t, 3) + 15.0 * t) / 8.0;
  CHECK(std::abs(legendre_p(5, t) - p5_closed) < 1e-14);
  const double residual = 6.0 * legendre_p(6, t) - 11.0 * t * legendre_p(5, t) + 5.0 * legendre_p(4, t);
  CHECK(std::abs(residual) < 1e-13);
  CHECK(legendre_p(40, 1.0) == Approx(1.0));
  CHECK(legendre_p(41, -1.0) == Approx(-1.0));
}

TEST_CASE("domain and order errors") {
  CHECK_THROWS_AS(bessel_j(kOrderCap + 1, 1.0), std::out_of_range);
  CHECK_THROWS_AS(bessel_j(-kOrderCap - 1, 1.0), std::out_of_range);
  CHECK_THROWS_AS(bessel_j(0, std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(bessel_j(0, std::numeric_limits<double>::infinity()), std::domain_error);
  CHECK_THROWS_AS(bessel_j(0, -1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_j(0, kArgumentCap * 1.01), std::domain_error);
  CHECK_THROWS_AS(bessel_y(0, 0.0), std::domain_error);
  CHECK_THROWS_AS(hankel1(2, 0.0), std::domain_error);
  CHECK_THROWS_AS(spherical_y(1, 0.0), std::domain_error);
  CHECK_THROWS_AS(spherical_j(-1, 1.0), std::out_of_range);
  CHECK_THROWS_AS(legendre_p(-1, 0.0), std::out_of_range);
  CHECK_THROWS_AS(legendre_p(2, 1.5), std::domain_error);
  CHECK_NOTHROW(bessel_j(kOrderCap, kArgumentCap));
}
