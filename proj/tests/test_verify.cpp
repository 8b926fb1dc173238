#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "scattercorr/verify.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace scattercorr;
using namespace scattercorr::verify;
using scalarwave::Boundary;

namespace {

Point unit(double angle) { return make_point({std::cos(angle), std::sin(angle)}); }

// Exterior points with radii in (1.1a, 10a).
std::pair<Point, Point> random_pair(std::mt19937& rng, double a) {
  std::uniform_real_distribution<double> r(1.1 * a, 10.0 * a);
  std::uniform_real_distribution<double> t(-std::numbers::pi, std::numbers::pi);
  return {r(rng) * unit(t(rng)), r(rng) * unit(t(rng))};
}

}  // namespace

TEST_CASE("sphere areas and gamma_d") {
  CHECK(sigma(0) == 2.0);
  CHECK(sigma(1) == Catch::Approx(2.0 * std::numbers::pi).epsilon(1e-15));
  CHECK(sigma(2) == Catch::Approx(4.0 * std::numbers::pi).epsilon(1e-15));
  CHECK(sigma(3) == Catch::Approx(2.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-14));
  CHECK(gamma(1) == Catch::Approx(2.0).epsilon(1e-15));
  CHECK(gamma(2) == Catch::Approx(4.0).epsilon(1e-15));
  CHECK(gamma(3) == Catch::Approx(4.0 * std::numbers::pi).epsilon(1e-15));
  CHECK_THROWS_AS(sigma(-1), std::invalid_argument);
}

TEST_CASE("free-space correlations against closed forms") {
  const auto ctx2 = WaveContext::make(2.0, 1.0, 2);
  const Point x2 = make_point({0.5, -1.0});
  CHECK(std::abs(correlation_scalar(ctx2, ScattererSpec::free_space(), x2, x2) - 1.0) < 1e-13);
  const Point y2 = make_point({2.0, 0.25});
  const double r2 = (x2 - y2).norm();
  CHECK(std::abs(correlation_scalar(ctx2, ScattererSpec::free_space(), x2, y2) -
                 oracle::power_series_j(0, 2.0 * r2)) < 1e-12);

  const auto ctx3 = WaveContext::make(1.5, 0.5, 3);
  const Point x3 = make_point({0.1, 0.2, 0.3});
  const Point y3 = make_point({-0.4, 0.9, 1.3});
  const double kr = 3.0 * (x3 - y3).norm();
  CHECK(std::abs(correlation_scalar(ctx3, ScattererSpec::free_space(), x3, y3) - std::sin(kr) / kr) < 1e-12);
  CHECK(std::abs(correlation_scalar(ctx3, ScattererSpec::free_space(), x3, x3) - 1.0) < 1e-13);
}

TEST_CASE("correlation input validation") {
  const auto ctx = WaveContext::make(1.0, 1.0, 2);
  const auto disk = ScattererSpec::disk(1.0, Boundary::neumann);
  CHECK_THROWS_AS(correlation_scalar(ctx, disk, make_point({0.5, 0.0}), make_point({2.0, 0.0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(correlation_scalar(ctx, ScattererSpec::free_space(), make_point({0.5, 0.0}),
                                     make_point({2.0, 0.0}), sphquad::sphere_rule(4, 8)),
                  std::invalid_argument);
}

TEST_CASE("scalar correlation identity in free space") {
  for (int d : {2, 3}) {
    for (double v : {1.0, 3.5}) {
      const auto ctx = WaveContext::make(2.0 * v, v, d);
      for (double kr : {0.0, 0.7, 5.0, 19.9}) {
        Point x = Point::Zero(d);
        Point y = Point::Zero(d);
        x(0) = 0.3;
        y(0) = 0.3 + kr / ctx.wavenumber() * 0.6;
        y(1) = kr / ctx.wavenumber() * 0.8;
        const auto report = theorem1_residual(ctx, ScattererSpec::free_space(), x, y);
        INFO("d=" << d << " v=" << v << " kr=" << kr);
        CHECK(report.rel_residual < 1e-10);
      }
    }
  }
}

TEST_CASE("scalar correlation identity outside a disk") {
  std::mt19937 rng(2024);
  SECTION("Neumann ka = 2") {
    const auto ctx = WaveContext::make(2.0, 1.0, 2);
    for (int i = 0; i < 5; ++i) {
      const auto [x, y] = random_pair(rng, 1.0);
      CHECK(theorem1_residual(ctx, ScattererSpec::disk(1.0, Boundary::neumann), x, y).rel_residual < 1e-8);
    }
  }
  SECTION("Dirichlet ka = 10") {
    const auto ctx = WaveContext::make(5.0, 0.5, 2);
    for (int i = 0; i < 5; ++i) {
      const auto [x, y] = random_pair(rng, 1.0);
      CHECK(theorem1_residual(ctx, ScattererSpec::disk(1.0, Boundary::dirichlet), x, y).rel_residual < 1e-8);
    }
  }
}

TEST_CASE("scalar correlation is Hermitian and nonnegative on the diagonal") {
  const auto ctx = WaveContext::make(3.0, 1.0, 2);
  const auto scat = ScattererSpec::disk(1.0, Boundary::dirichlet);
  std::mt19937 rng(17);
  for (int i = 0; i < 5; ++i) {
    const auto [x, y] = random_pair(rng, 1.0);
    const auto disc = default_discretization(ctx, scat, x, y);
    const auto rule = sphquad::make_rule(2, disc.rule);
    const cplx cxy = correlation_scalar(ctx, scat, x, y, rule, disc.n_max);
    const cplx cyx = correlation_scalar(ctx, scat, y, x, rule, disc.n_max);
    CHECK(std::abs(cxy - std::conj(cyx)) < 1e-12);
    const cplx cxx = correlation_scalar(ctx, scat, x, x);
    CHECK(std::abs(cxx.imag()) < 1e-12);
    CHECK(cxx.real() >= 0.0);
  }
}

TEST_CASE("spectral windows") {
  CHECK_THROWS_AS(SpectralWindow::make(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SpectralWindow::make(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SpectralWindow::make(1.0, std::numeric_limits<double>::infinity()), std::invalid_argument);
  const auto empty = SpectralWindow::make(1.5, 1.5);
  CHECK(empty.empty());
  const auto ctx = WaveContext::make(1.5, 1.0, 2);
  const Point x = make_point({2.0, 0.0});
  const Point y = make_point({0.0, 3.0});
  const auto disk = ScattererSpec::disk(1.0, Boundary::neumann);
  CHECK(projector_kernel_scatt(ctx, disk, empty, x, y) == cplx(0.0, 0.0));
  CHECK(projector_kernel_stone(ctx, disk, empty, x, y) == cplx(0.0, 0.0));
}

TEST_CASE("free-space projector diagonal has a closed form") {
  const auto ctx = WaveContext::make(2.0, 1.3, 2);
  const auto window = SpectralWindow::make(1.6, 2.4);
  const Point x = make_point({0.7, -0.2});
  const double kp = window.omega_plus / ctx.speed;
  const double km = window.omega_minus / ctx.speed;
  const double want = (kp * kp - km * km) / (4.0 * std::numbers::pi);
  CHECK(std::abs(projector_kernel_scatt(ctx, ScattererSpec::free_space(), window, x, x).real() - want) < 1e-13);
  CHECK(std::abs(projector_kernel_stone(ctx, ScattererSpec::free_space(), window, x, x).real() - want) < 1e-13);
}

TEST_CASE("Stone and scattering routes agree") {
  const double omega = 2.0;
  const auto window = SpectralWindow::make(0.8 * omega, 1.2 * omega);
  SECTION("free space d = 2") {
    const auto ctx = WaveContext::make(omega, 1.0, 2);
    const Point x = make_point({0.0, 0.0});
    const Point y = make_point({1.3, 2.2});
    const cplx a = projector_kernel_scatt(ctx, ScattererSpec::free_space(), window, x, y);
    const cplx b = projector_kernel_stone(ctx, ScattererSpec::free_space(), window, x, y);
    CHECK(relative_residual(a, b) < 1e-6);
  }
  SECTION("free space d = 3") {
    const auto ctx = WaveContext::make(omega, 1.0, 3);
    const Point x = make_point({0.0, 0.0, 0.0});
    const Point y = make_point({1.3, 2.2, -0.5});
    const cplx a = projector_kernel_scatt(ctx, ScattererSpec::free_space(), window, x, y);
    const cplx b = projector_kernel_stone(ctx, ScattererSpec::free_space(), window, x, y);
    CHECK(relative_residual(a, b) < 1e-6);
  }
  SECTION("Neumann disk, ka = 2") {
    const auto ctx = WaveContext::make(omega, 1.0, 2);
    const auto disk = ScattererSpec::disk(1.0, Boundary::neumann);
    const Point x = make_point({3.0, 0.0});
    const Point y = make_point({0.0, 4.0});
    const cplx a = projector_kernel_scatt(ctx, disk, window, x, y);
    const cplx b = projector_kernel_stone(ctx, disk, window, x, y);
    CHECK(relative_residual(a, b) < 1e-6);
  }
}

TEST_CASE("projector diagonal is positive and grows with the window") {
  const auto ctx = WaveContext::make(2.0, 1.0, 2);
  const auto disk = ScattererSpec::disk(1.0, Boundary::dirichlet);
  const Point x = make_point({1.4, 0.6});
  double prev = 0.0;
  for (double hi : {2.1, 2.5, 3.0}) {
    const cplx p = projector_kernel_scatt(ctx, disk, SpectralWindow::make(1.8, hi), x, x, 32);
    CHECK(std::abs(p.imag()) < 1e-12);
    CHECK(p.real() > prev);
    prev = p.real();
  }
  const cplx wide = projector_kernel_stone(ctx, disk, SpectralWindow::make(1.0, 3.0), x, x, 32);
  CHECK(wide.real() > prev);
}

TEST_CASE("derivative identities") {
  SECTION("free space d = 2") {
    const auto ctx = WaveContext::make(2.0, 1.0, 2);
    const auto report = derivative_identity_check(ctx, ScattererSpec::free_space(), make_point({0.0, 0.0}),
                                                  make_point({1.0, 1.5}), 2.0);
    CHECK(report.parameters.at("residual_stone") < 1e-5);
    CHECK(report.parameters.at("residual_scattering") < 1e-5);
    CHECK(report.parameters.at("closed_form_agreement") < 1e-10);
    CHECK(report.rel_residual < 1e-5);
  }
  SECTION("disk ka = 2") {
    const auto ctx = WaveContext::make(2.0, 1.0, 2);
    const auto report = derivative_identity_check(ctx, ScattererSpec::disk(1.0, Boundary::neumann),
                                                  make_point({3.0, 0.0}), make_point({0.0, 4.0}), 2.0);
    CHECK(report.parameters.at("residual_stone") < 1e-5);
    CHECK(report.parameters.at("residual_scattering") < 1e-5);
    CHECK(report.parameters.at("closed_form_agreement") < 1e-10);
  }
}

TEST_CASE("elastic correlation identity") {
  SECTION("steel-like medium in space") {
    const auto steel = elastic::ElasticMedium::make(7900.0, 115e9, 77e9);
    const Point x = make_point({0.0, 0.0, 0.0});
    const Point y = make_point({0.6, -0.3, 0.2});
    const double omega = 3.0 * steel.v_s() / (x - y).norm();
    const auto report = theorem2_residual(omega, steel, x, y);
    CHECK(report.rel_residual < 1e-8);
    CHECK(report.parameters.at("closed_form_residual") < 1e-10);
    CHECK(report.parameters.at("fitted_constant") == Catch::Approx(1.0).epsilon(1e-10));
  }
  SECTION("unit medium in the plane") {
    const auto unit_medium = elastic::ElasticMedium::make(1.0, 1.0, 1.0);
    const Point x = make_point({0.2, 0.1});
    const Point y = make_point({-1.0, 2.0});
    const auto report = theorem2_residual(1.7, unit_medium, x, y);
    CHECK(report.rel_residual < 1e-8);
    CHECK(report.rows == 2);
    CHECK(report.lhs.size() == 4);
  }
  SECTION("coincident points") {
    const auto unit_medium = elastic::ElasticMedium::make(1.0, 1.0, 1.0);
    for (int d : {2, 3}) {
      Point x = Point::Constant(d, 0.4);
      CHECK(theorem2_residual(2.0, unit_medium, x, x).rel_residual < 1e-10);
    }
  }
}

TEST_CASE("scalar identity residual is discretization-limited") {
  // deliberately coarse start, then double everything
  const auto ctx = WaveContext::make(2.0, 1.0, 2);
  const auto scat = ScattererSpec::disk(1.0, Boundary::neumann);
  const Point x = make_point({2.5, 0.5});
  const Point y = make_point({-1.5, 2.0});
  Discretization disc{4, {12, 6, 12}, 64};
  double prev = theorem1_residual(ctx, scat, x, y, disc).rel_residual;
  CHECK(prev > 1e-6);
  for (int step = 0; step < 3; ++step) {
    disc = disc.scaled(2);
    const double next = theorem1_residual(ctx, scat, x, y, disc).rel_residual;
    INFO("step " << step << ": " << prev << " -> " << next);
    CHECK((next <= prev / 10.0 || (next < 1e-12 && prev < 1e-11)));
    prev = next;
  }
  CHECK(prev < 1e-12);
}

TEST_CASE("reports are deterministic and carry their parameters") {
  const auto ctx = WaveContext::make(2.0, 1.0, 2);
  const auto scat = ScattererSpec::disk(1.0, Boundary::neumann);
  const Point x = make_point({3.0, 0.0});
  const Point y = make_point({0.0, 4.0});
  const auto a = theorem1_residual(ctx, scat, x, y);
  const auto b = theorem1_residual(ctx, scat, x, y);
  CHECK(a.lhs == b.lhs);
  CHECK(a.rhs == b.rhs);
  CHECK(a.parameters == b.parameters);
  CHECK(a.parameters.at("gamma_d") == Catch::Approx(4.0));
  CHECK(a.parameters.count("n_max") == 1);
}
