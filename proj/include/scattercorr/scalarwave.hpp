#pragma once

// Scalar plane waves and their scattering by a sound-soft (Dirichlet) or
// sound-hard (Neumann) disk centred at the origin.
//
// Phase convention: e^{i k.x} = sum_n i^n J_n(k|x|) e^{i n (theta_x - theta_k)}
// and the scattered field is sum_n c_n i^n H^(1)_n(k|x|) e^{i n (...)}.

#include "scattercorr/specfun.hpp"
#include "scattercorr/types.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace scattercorr::scalarwave {

/// Angular frequency, propagation speed and dimension; k = omega / v.
struct WaveContext {
  double omega = 1.0;
  double speed = 1.0;
  int dimension = 2;

  static WaveContext make(double omega, double speed, int dimension) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
      throw std::invalid_argument("omega must be positive and finite");
    }
    if (!(speed > 0.0) || !std::isfinite(speed)) {
      throw std::invalid_argument("wave speed must be positive and finite");
    }
    check_dimension(dimension);
    return {omega, speed, dimension};
  }

  double wavenumber() const { return omega / speed; }

  WaveContext with_omega(double new_omega) const {
    return make(new_omega, speed, dimension);
  }
};

enum class Boundary { neumann, dirichlet };

inline const char* to_string(Boundary bc) {
  return bc == Boundary::neumann ? "neumann" : "dirichlet";
}

struct ScattererSpec {
  enum class Kind { none, disk };

  Kind kind = Kind::none;
  double radius = 0.0;
  Boundary bc = Boundary::neumann;

  static ScattererSpec free_space() { return {}; }

  static ScattererSpec disk(double radius, Boundary bc) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
      throw std::invalid_argument("disk radius must be positive");
    }
    return {Kind::disk, radius, bc};
  }

  bool is_disk() const { return kind == Kind::disk; }
};

/// Reflection coefficients c_n, stored for n = 0..n_max; c_{-n} = c_n.
struct PartialWaveCoefficients {
  int n_max = 0;
  double ka = 0.0;
  Boundary bc = Boundary::neumann;
  std::vector<cplx> values;

  cplx operator()(int n) const {
    const int m = std::abs(n);
    if (m > n_max) throw std::out_of_range("coefficient order beyond n_max");
    return values[m];
  }
};

/// Partial-wave cutoff: ceil(ka + 6 (ka)^{1/3} + 12) at tol = 1e-12; the
/// additive constant grows proportionally for tighter tolerances.
inline int truncation_order(double ka, double tol = 1e-12) {
  if (!(ka >= 0.0) || !std::isfinite(ka)) {
    throw std::invalid_argument("ka must be finite and nonnegative");
  }
  if (!(tol > 0.0) || tol >= 1.0) throw std::invalid_argument("tol must lie in (0, 1)");
  const double digits = -std::log10(tol);
  const double pad = 12.0 * std::max(1.0, digits / 12.0);
  return static_cast<int>(std::ceil(ka + 6.0 * std::cbrt(ka) + pad));
}

namespace detail {

inline constexpr double kBoundaryEps = 1e-12;

inline void require_disk_dimension(const WaveContext& ctx) {
  if (ctx.dimension != 2) {
    throw std::invalid_argument("disk obstacles are only supported in d = 2");
  }
}

// Throws for points strictly inside the obstacle; points within a relative
// 1e-12 of the circle count as boundary points.
inline void require_exterior(const ScattererSpec& scat, const Point& x, const char* what) {
  if (!scat.is_disk()) return;
  if (x.norm() < scat.radius * (1.0 - kBoundaryEps)) {
    throw std::invalid_argument(std::string(what) + " lies inside the obstacle");
  }
}

inline void require_on_shell(const WaveContext& ctx, const Point& kvec) {
  check_point(kvec, ctx.dimension, "wave vector");
  const double k = ctx.wavenumber();
  if (std::abs(kvec.norm() - k) > 1e-12 * k) {
    throw std::invalid_argument("wave vector is not on the shell |k| = omega / v");
  }
}

inline cplx i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace detail

/// e^{i <k|x>}.
inline cplx incident(const WaveContext& ctx, const Point& x, const Point& kvec) {
  check_point(x, ctx.dimension, "point");
  check_point(kvec, ctx.dimension, "wave vector");
  return std::polar(1.0, kvec.dot(x));
}

/// Dirichlet: c_n = -J_n(ka)/H_n(ka); Neumann: c_n = -J_n'(ka)/H_n'(ka).
inline PartialWaveCoefficients disk_coefficients(const WaveContext& ctx,
                                                 const ScattererSpec& scat, int n_max) {
  detail::require_disk_dimension(ctx);
  if (!scat.is_disk()) throw std::invalid_argument("coefficients need a disk obstacle");
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  const double ka = ctx.wavenumber() * scat.radius;
  if (!(ka > 0.0)) throw std::invalid_argument("ka must be positive");
  specfun::detail::check_order(n_max + 1);

  PartialWaveCoefficients out{n_max, ka, scat.bc, std::vector<cplx>(n_max + 1)};
  const auto j = specfun::bessel_j_array(n_max + 1, ka);
  const auto y = specfun::bessel_y_array(n_max + 1, ka);
  for (int n = 0; n <= n_max; ++n) {
    cplx num;
    cplx den;
    if (scat.bc == Boundary::dirichlet) {
      num = j[n];
      den = {j[n], y[n]};
    } else {
      const double jp = specfun::detail::cylinder_derivative(j, n);
      const double yp = specfun::detail::cylinder_derivative(y, n);
      num = jp;
      den = {jp, yp};
    }
    out.values[n] = std::isfinite(den.imag()) ? -num / den : cplx{0.0, 0.0};
  }
  return out;
}

/// Precomputed disk solution for repeated evaluation at many directions.
class DiskScattering {
 public:
  /// Radial data of one observation point.
  struct Probe {
    Point x;
    double theta = 0.0;
    std::vector<cplx> outgoing;      // c_n i^n H_n(k r)
    std::vector<cplx> outgoing_dr;   // c_n i^n k H_n'(k r)
  };

  DiskScattering(const WaveContext& ctx, const ScattererSpec& scat, int n_max = -1)
      : ctx_(ctx), scat_(scat) {
    detail::require_disk_dimension(ctx);
    if (!scat.is_disk()) throw std::invalid_argument("DiskScattering needs a disk");
    if (n_max < 0) n_max = truncation_order(ctx.wavenumber() * scat.radius);
    coeffs_ = disk_coefficients(ctx, scat, n_max);
  }

  const PartialWaveCoefficients& coefficients() const { return coeffs_; }
  const WaveContext& context() const { return ctx_; }
  const ScattererSpec& scatterer() const { return scat_; }

  Probe probe(const Point& x) const {
    check_point(x, 2, "point");
    detail::require_exterior(scat_, x, "point");
    const int n_max = coeffs_.n_max;
    const double k = ctx_.wavenumber();
    const double kr = k * x.norm();
    const auto h = specfun::hankel1_array(n_max + 1, kr);
    Probe p{x, polar_angle(x), std::vector<cplx>(n_max + 1), std::vector<cplx>(n_max + 1)};
    for (int n = 0; n <= n_max; ++n) {
      const cplx c = coeffs_.values[n] * detail::i_pow(n);
      if (c == cplx{0.0, 0.0}) continue;
      p.outgoing[n] = c * h[n];
      p.outgoing_dr[n] = c * k * specfun::detail::cylinder_derivative(h, n);
    }
    return p;
  }

  cplx scattered(const Probe& p, const Point& khat) const {
    return angular_sum(p.outgoing, p.theta - polar_angle(khat));
  }

  cplx total(const Probe& p, const Point& khat) const {
    const double k = ctx_.wavenumber();
    return std::polar(1.0, k * khat.dot(p.x)) + scattered(p, khat);
  }

  /// d/dr of the total field at the probe point.
  cplx total_radial_derivative(const Probe& p, const Point& khat) const {
    const double k = ctx_.wavenumber();
    const double r = p.x.norm();
    const double radial_k = r > 0.0 ? k * khat.dot(p.x) / r : 0.0;
    const cplx inc = cplx{0.0, radial_k} * std::polar(1.0, k * khat.dot(p.x));
    return inc + angular_sum(p.outgoing_dr, p.theta - polar_angle(khat));
  }

  /// Sommerfeld amplitude e^inf(xhat, k).
  cplx far_field(const Point& xhat, const Point& khat) const {
    const double k = ctx_.wavenumber();
    const double phi = polar_angle(xhat) - polar_angle(khat);
    cplx sum = coeffs_.values[0];
    for (int n = 1; n <= coeffs_.n_max; ++n) sum += 2.0 * coeffs_.values[n] * std::cos(n * phi);
    return std::sqrt(2.0 / (std::numbers::pi * k)) * std::polar(1.0, -std::numbers::pi / 4.0) * sum;
  }

 private:
  // t_0 + 2 sum_{n>=1} t_n cos(n phi); the +-n terms of the series coincide.
  static cplx angular_sum(const std::vector<cplx>& terms, double phi) {
    cplx sum = terms[0];
    for (std::size_t n = 1; n < terms.size(); ++n) {
      sum += 2.0 * terms[n] * std::cos(static_cast<double>(n) * phi);
    }
    return sum;
  }

  WaveContext ctx_;
  ScattererSpec scat_;
  PartialWaveCoefficients coeffs_;
};

namespace detail {

inline void require_scatterer_context(const WaveContext& ctx, const ScattererSpec& scat) {
  if (scat.is_disk()) require_disk_dimension(ctx);
}

}  // namespace detail

/// Scattered part e^s(x, k); zero without an obstacle.
inline cplx scattered(const WaveContext& ctx, const ScattererSpec& scat, const Point& x,
                      const Point& kvec) {
  check_point(x, ctx.dimension, "point");
  detail::require_on_shell(ctx, kvec);
  if (!scat.is_disk()) return {0.0, 0.0};
  detail::require_scatterer_context(ctx, scat);
  const DiskScattering sol(ctx, scat);
  return sol.scattered(sol.probe(x), kvec / kvec.norm());
}

inline cplx total(const WaveContext& ctx, const ScattererSpec& scat, const Point& x,
                  const Point& kvec) {
  detail::require_scatterer_context(ctx, scat);
  detail::require_exterior(scat, x, "point");
  return incident(ctx, x, kvec) + scattered(ctx, scat, x, kvec);
}

/// Radial derivative of the total field, used for boundary-condition checks.
inline cplx total_radial_derivative(const WaveContext& ctx, const ScattererSpec& scat,
                                    const Point& x, const Point& kvec) {
  check_point(x, ctx.dimension, "point");
  detail::require_on_shell(ctx, kvec);
  if (!scat.is_disk()) {
    const double r = x.norm();
    const double radial_k = r > 0.0 ? kvec.dot(x) / r : 0.0;
    return cplx{0.0, radial_k} * incident(ctx, x, kvec);
  }
  detail::require_scatterer_context(ctx, scat);
  const DiskScattering sol(ctx, scat);
  return sol.total_radial_derivative(sol.probe(x), kvec / kvec.norm());
}

inline cplx far_field(const WaveContext& ctx, const ScattererSpec& scat, const Point& xhat,
                      const Point& kvec) {
  if (!scat.is_disk()) throw std::invalid_argument("free space has no far-field amplitude");
  detail::require_scatterer_context(ctx, scat);
  detail::require_on_shell(ctx, kvec);
  check_point(xhat, ctx.dimension, "direction");
  return DiskScattering(ctx, scat).far_field(xhat, kvec);
}

/// Total cross-section (4/k) sum_n |c_n|^2.
inline double cross_section(const WaveContext& ctx, const PartialWaveCoefficients& c) {
  double sum = std::norm(c.values[0]);
  for (int n = 1; n <= c.n_max; ++n) sum += 2.0 * std::norm(c.values[n]);
  return 4.0 / ctx.wavenumber() * sum;
}

/// Cross-section from the forward amplitude: -sqrt(8 pi / k) Re(e^{i pi/4} e^inf(khat, khat)).
inline double optical_theorem_cross_section(const WaveContext& ctx, const ScattererSpec& scat) {
  const Point khat = make_point({1.0, 0.0});
  const cplx forward = DiskScattering(ctx, scat).far_field(khat, khat);
  return -std::sqrt(8.0 * std::numbers::pi / ctx.wavenumber()) *
         (std::polar(1.0, std::numbers::pi / 4.0) * forward).real();
}

}  // namespace scattercorr::scalarwave
