#pragma once

// Direction-averaged wave correlations, spectral-projector kernels computed
// by two independent routes, and residual reports for the identities
//
//   C_w(x, y) = -gamma_d v^d w^{2-d} Im G(w + i0, x, y)                 (scalar)
//   Im G(w + i0, x, y) = -gamma_d^{-1} w^{d-2} [P- and S-sphere averages] (elastic)

#include "scattercorr/elastic.hpp"
#include "scattercorr/greenfn.hpp"
#include "scattercorr/scalarwave.hpp"
#include "scattercorr/sphquad.hpp"
#include "scattercorr/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scattercorr::verify {

using scalarwave::ScattererSpec;
using scalarwave::WaveContext;

/// Area of the unit sphere S^{dm1} in R^{dm1+1}.
inline double sigma(int dm1) {
  if (dm1 < 0) throw std::invalid_argument("sphere dimension must be >= 0");
  switch (dm1) {
    case 0: return 2.0;
    case 1: return 2.0 * std::numbers::pi;
    case 2: return 4.0 * std::numbers::pi;
    default: {
      const double half = 0.5 * (dm1 + 1);
      return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
    }
  }
}

/// gamma_d = 2^{d+1} pi^{d-1} / sigma_{d-1}.
inline double gamma(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  return std::pow(2.0, d + 1) * std::pow(std::numbers::pi, d - 1) / sigma(d - 1);
}

/// Frequency window I = [omega_minus^2, omega_plus^2], 0 < omega_minus <= omega_plus.
struct SpectralWindow {
  double omega_minus;
  double omega_plus;

  static SpectralWindow make(double omega_minus, double omega_plus) {
    if (!(omega_minus > 0.0) || !std::isfinite(omega_plus)) {
      throw std::invalid_argument("spectral window must lie in (0, inf)");
    }
    if (omega_plus < omega_minus) {
      throw std::invalid_argument("spectral window needs omega_minus <= omega_plus");
    }
    return {omega_minus, omega_plus};
  }

  bool empty() const { return omega_plus == omega_minus; }
};

struct VerificationReport {
  std::string name;
  int rows = 1;
  int cols = 1;
  std::vector<cplx> lhs;  // row-major
  std::vector<cplx> rhs;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  std::map<std::string, double> parameters;
};

inline constexpr double kResidualFloor = 1e-300;

/// Max-entry residual, relative to the largest entry of either side.
inline std::pair<double, double> residuals(const std::vector<cplx>& lhs,
                                           const std::vector<cplx>& rhs) {
  if (lhs.size() != rhs.size()) throw std::invalid_argument("residual size mismatch");
  double diff = 0.0;
  double scale = kResidualFloor;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    diff = std::max(diff, std::abs(lhs[i] - rhs[i]));
    scale = std::max({scale, std::abs(lhs[i]), std::abs(rhs[i])});
  }
  return {diff, diff / scale};
}

inline VerificationReport make_report(std::string name, std::vector<cplx> lhs,
                                      std::vector<cplx> rhs, int rows = 1, int cols = 1) {
  VerificationReport report;
  report.name = std::move(name);
  report.rows = rows;
  report.cols = cols;
  report.lhs = std::move(lhs);
  report.rhs = std::move(rhs);
  std::tie(report.abs_residual, report.rel_residual) = residuals(report.lhs, report.rhs);
  return report;
}

inline double relative_residual(cplx lhs, cplx rhs) { return residuals({lhs}, {rhs}).second; }

inline std::vector<cplx> flatten(const ComplexMatrix& m) {
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

/// Partial-wave order and direction-quadrature sizes for one point pair.
struct Discretization {
  int n_max = 0;
  sphquad::RuleSize rule{};
  int radial_nodes = 64;

  Discretization scaled(int factor) const {
    return {n_max * factor,
            {rule.circle_nodes * factor, rule.polar_nodes * factor, rule.azimuth_nodes * factor},
            radial_nodes * factor};
  }
};

/// Free space: the integrand e^{i k khat.(x - y)} has bandwidth ~k|x - y|.
/// Disk: each total field carries bandwidth max(N_max(ka), N(k|p|)).
inline Discretization default_discretization(const WaveContext& ctx, const ScattererSpec& scat,
                                             const Point& x, const Point& y) {
  const double k = ctx.wavenumber();
  Discretization disc;
  if (scat.is_disk()) {
    disc.n_max = scalarwave::truncation_order(k * scat.radius);
    const int band = std::max({disc.n_max, scalarwave::truncation_order(k * x.norm()),
                               scalarwave::truncation_order(k * y.norm())});
    disc.rule = sphquad::default_rule_size(band);
  } else {
    disc.n_max = scalarwave::truncation_order(k * (x - y).norm());
    disc.rule = sphquad::default_rule_size(disc.n_max);
  }
  return disc;
}

namespace detail {

inline void check_scalar_pair(const WaveContext& ctx, const ScattererSpec& scat, const Point& x,
                              const Point& y) {
  check_point(x, ctx.dimension, "x");
  check_point(y, ctx.dimension, "y");
  if (scat.is_disk()) {
    scalarwave::detail::require_disk_dimension(ctx);
    scalarwave::detail::require_exterior(scat, x, "x");
    scalarwave::detail::require_exterior(scat, y, "y");
  }
}

}  // namespace detail

/// (1/sigma_{d-1}) int_{vk = omega} e(x, k) conj(e(y, k)) dsigma.
inline cplx correlation_scalar(const WaveContext& ctx, const ScattererSpec& scat,
                               const Point& x, const Point& y, const sphquad::SphereRule& rule,
                               int n_max = -1) {
  detail::check_scalar_pair(ctx, scat, x, y);
  if (rule.dimension != ctx.dimension) {
    throw std::invalid_argument("quadrature rule dimension does not match the wave context");
  }
  const double k = ctx.wavenumber();
  cplx sum;
  if (!scat.is_disk()) {
    sum = sphquad::integrate(rule, [&](const Point& khat) {
      return std::polar(1.0, k * khat.dot(x)) * std::conj(std::polar(1.0, k * khat.dot(y)));
    });
  } else {
    const scalarwave::DiskScattering sol(ctx, scat, n_max);
    const auto px = sol.probe(x);
    const auto py = sol.probe(y);
    sum = sphquad::integrate(rule, [&](const Point& khat) {
      return sol.total(px, khat) * std::conj(sol.total(py, khat));
    });
  }
  return sum / sigma(ctx.dimension - 1);
}

inline cplx correlation_scalar(const WaveContext& ctx, const ScattererSpec& scat,
                               const Point& x, const Point& y) {
  detail::check_scalar_pair(ctx, scat, x, y);
  const auto disc = default_discretization(ctx, scat, x, y);
  return correlation_scalar(ctx, scat, x, y, sphquad::make_rule(ctx.dimension, disc.rule),
                            disc.n_max);
}

/// -gamma_d v^d omega^{2-d} Im G: the Green's-function side of the scalar identity.
inline double correlation_from_green(const WaveContext& ctx, const ScattererSpec& scat,
                                     const Point& x, const Point& y) {
  const int d = ctx.dimension;
  return -gamma(d) * std::pow(ctx.speed, d) * std::pow(ctx.omega, 2 - d) *
         greenfn::im_green(ctx, scat, x, y);
}

inline VerificationReport theorem1_residual(const WaveContext& ctx, const ScattererSpec& scat,
                                            const Point& x, const Point& y,
                                            std::optional<Discretization> disc = std::nullopt) {
  detail::check_scalar_pair(ctx, scat, x, y);
  const Discretization used = disc.value_or(default_discretization(ctx, scat, x, y));
  const auto rule = sphquad::make_rule(ctx.dimension, used.rule);
  const cplx lhs = correlation_scalar(ctx, scat, x, y, rule, used.n_max);
  const cplx rhs = correlation_from_green(ctx, scat, x, y);
  auto report = make_report("theorem1", {lhs}, {rhs});
  report.parameters = {
      {"dimension", ctx.dimension},
      {"omega", ctx.omega},
      {"v", ctx.speed},
      {"k", ctx.wavenumber()},
      {"gamma_d", gamma(ctx.dimension)},
      {"n_max", used.n_max},
      {"quadrature_nodes", static_cast<double>(rule.size())},
      {"circle_nodes", used.rule.circle_nodes},
      {"polar_nodes", used.rule.polar_nodes},
      {"azimuth_nodes", used.rule.azimuth_nodes},
  };
  return report;
}

/// (2 pi)^{-d} int_{omega_-/v}^{omega_+/v} k^{d-1} sigma_{d-1} C_{vk}(x, y) dk
/// by Gauss-Legendre in k.
inline cplx projector_kernel_scatt(const WaveContext& ctx, const ScattererSpec& scat,
                                   const SpectralWindow& window, const Point& x, const Point& y,
                                   int radial_nodes = 64) {
  detail::check_scalar_pair(ctx, scat, x, y);
  if (radial_nodes < 1) throw std::invalid_argument("radial_nodes must be >= 1");
  if (window.empty()) return {0.0, 0.0};
  const int d = ctx.dimension;
  const double v = ctx.speed;
  const auto gl = sphquad::gauss_legendre(radial_nodes, window.omega_minus / v,
                                          window.omega_plus / v);
  cplx sum{0.0, 0.0};
  for (int i = 0; i < radial_nodes; ++i) {
    const double k = gl.nodes[i];
    const auto at_k = ctx.with_omega(v * k);
    sum += gl.weights[i] * std::pow(k, d - 1) * sigma(d - 1) *
           correlation_scalar(at_k, scat, x, y);
  }
  return sum / std::pow(2.0 * std::numbers::pi, d);
}

/// -(2/pi) Im int_{omega_-}^{omega_+} G(omega + i0, x, y) omega d omega.
inline cplx projector_kernel_stone(const WaveContext& ctx, const ScattererSpec& scat,
                                   const SpectralWindow& window, const Point& x, const Point& y,
                                   int omega_nodes = 64) {
  detail::check_scalar_pair(ctx, scat, x, y);
  if (omega_nodes < 1) throw std::invalid_argument("omega_nodes must be >= 1");
  if (window.empty()) return {0.0, 0.0};
  const auto gl = sphquad::gauss_legendre(omega_nodes, window.omega_minus, window.omega_plus);
  double sum = 0.0;
  for (int i = 0; i < omega_nodes; ++i) {
    const double w = gl.nodes[i];
    sum += gl.weights[i] * w * greenfn::im_green(ctx.with_omega(w), scat, x, y);
  }
  return {-2.0 / std::numbers::pi * sum, 0.0};
}

/// Central difference in omega_+ of the scattering-route projector kernel
/// against both closed forms of its derivative.
inline VerificationReport derivative_identity_check(const WaveContext& ctx,
                                                    const ScattererSpec& scat, const Point& x,
                                                    const Point& y, double omega,
                                                    int radial_nodes = 64) {
  detail::check_scalar_pair(ctx, scat, x, y);
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  const int d = ctx.dimension;
  const double v = ctx.speed;
  const double h = 1e-4 * omega;
  const double omega_minus = 0.5 * omega;
  const cplx upper = projector_kernel_scatt(ctx, scat, SpectralWindow::make(omega_minus, omega + h),
                                            x, y, radial_nodes);
  const cplx lower = projector_kernel_scatt(ctx, scat, SpectralWindow::make(omega_minus, omega - h),
                                            x, y, radial_nodes);
  const cplx fd = (upper - lower) / (2.0 * h);

  const auto at = ctx.with_omega(omega);
  const cplx stone_form = -2.0 * omega / std::numbers::pi * greenfn::im_green(at, scat, x, y);
  const cplx scattering_form = std::pow(2.0 * std::numbers::pi, -d) * std::pow(omega, d - 1) *
                               sigma(d - 1) / std::pow(v, d) * correlation_scalar(at, scat, x, y);

  auto report = make_report("derivative_identity", {fd, fd}, {stone_form, scattering_form}, 2, 1);
  report.parameters = {
      {"dimension", d},
      {"omega", omega},
      {"v", v},
      {"fd_step", h},
      {"omega_minus", omega_minus},
      {"radial_nodes", radial_nodes},
      {"residual_stone", relative_residual(fd, stone_form)},
      {"residual_scattering", relative_residual(fd, scattering_form)},
      {"closed_form_agreement", relative_residual(stone_form, scattering_form)},
  };
  return report;
}

/// Direction rule resolving the elastic correlation integrand exactly.
inline sphquad::SphereRule elastic_rule(double omega, const elastic::ElasticMedium& medium,
                                        const Point& x, const Point& y) {
  const double ks = omega / medium.v_s();
  const int band = scalarwave::truncation_order(ks * (x - y).norm()) + 2;
  return sphquad::make_rule(static_cast<int>(x.size()), sphquad::default_rule_size(band));
}

inline VerificationReport theorem2_residual(double omega, const elastic::ElasticMedium& medium,
                                            const Point& x, const Point& y,
                                            std::optional<sphquad::SphereRule> rule = std::nullopt) {
  const int d = static_cast<int>(x.size());
  check_dimension(d);
  check_point(y, d, "y");
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  const auto used = rule.value_or(elastic_rule(omega, medium, x, y));
  const ComplexMatrix corr = elastic::correlation_tensor_free(omega, medium, x, y, used);
  const ComplexMatrix closed = elastic::correlation_tensor_closed(omega, medium, x, y);
  const ComplexMatrix rhs = (-std::pow(omega, d - 2) / gamma(d)) * corr;
  const ComplexMatrix lhs = elastic::im_green_tensor_free(omega, medium, x, y).cast<cplx>();

  auto report = make_report("theorem2", flatten(lhs), flatten(rhs), d, d);
  const double fitted = (rhs.cwiseAbs2().sum() > 0.0)
                            ? (rhs.conjugate().cwiseProduct(lhs).sum()).real() / rhs.cwiseAbs2().sum()
                            : 0.0;
  report.parameters = {
      {"dimension", d},
      {"omega", omega},
      {"rho", medium.rho},
      {"lambda", medium.lambda},
      {"mu", medium.mu},
      {"v_p", medium.v_p()},
      {"v_s", medium.v_s()},
      {"k_s_distance", omega / medium.v_s() * (x - y).norm()},
      {"quadrature_nodes", static_cast<double>(used.size())},
      {"closed_form_residual", residuals(flatten(corr), flatten(closed)).second},
      {"fitted_constant", fitted},
  };
  return report;
}

}  // namespace scattercorr::verify
