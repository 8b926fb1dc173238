#pragma once

// Outgoing resolvent kernels G(omega + i0, x, y) of (omega^2 + v^2 Lap)
// for free space (d = 2, 3) and the exterior of a disk (d = 2).
//
//   d = 2:  G_free = -(i / (4 v^2)) H0(k|x - y|)
//   d = 3:  G_free = -e^{ik|x - y|} / (4 pi v^2 |x - y|)
//   disk:   G = G_free - (i / (4 v^2)) sum_n c_n H_n(k r_x) H_n(k r_y) e^{i n (theta_x - theta_y)}

#include "scattercorr/scalarwave.hpp"
#include "scattercorr/specfun.hpp"
#include "scattercorr/types.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace scattercorr::greenfn {

using scalarwave::Boundary;
using scalarwave::ScattererSpec;
using scalarwave::WaveContext;

/// Longest image series ever summed.
inline constexpr int kImageOrderCap = 4 * specfun::kOrderCap;

namespace detail {

inline void check_pair(const WaveContext& ctx, const ScattererSpec& scat, const Point& x,
                       const Point& y) {
  check_point(x, ctx.dimension, "x");
  check_point(y, ctx.dimension, "y");
  if (scat.is_disk()) {
    scalarwave::detail::require_disk_dimension(ctx);
    scalarwave::detail::require_exterior(scat, x, "x");
    scalarwave::detail::require_exterior(scat, y, "y");
  }
}

/// Number of image-series orders needed so that the geometric tail
/// (a^2 / (r_x r_y))^n falls below 1e-17.
inline int image_series_order(double ka, double ratio) {
  const int base = scalarwave::truncation_order(ka);
  if (ratio <= 0.0) return base;
  if (ratio >= 1.0 - 1e-12) return kImageOrderCap;
  const int geometric = static_cast<int>(std::ceil(std::log(1e-17) / std::log(ratio))) + 1;
  return std::min(std::max(base, geometric), kImageOrderCap);
}

// F_n'/F_{n-1}' from consecutive ratios rho_m = F_m / F_{m-1}.
template <class T>
T derivative_ratio(const std::vector<T>& rho, int n) {
  return rho[n - 1] * (1.0 - rho[n] * rho[n + 1]) / (1.0 - rho[n - 1] * rho[n]);
}

// H_n(s)/H_{n-1}(s), n = 1..nmax, by forward recurrence (H is dominant).
inline std::vector<cplx> hankel_ratios(int nmax, double s) {
  const auto h = specfun::hankel1_array(1, s);
  std::vector<cplx> rho(static_cast<std::size_t>(nmax) + 1);
  rho[1] = h[1] / h[0];
  for (int n = 1; n < nmax; ++n) rho[n + 1] = 2.0 * n / s - 1.0 / rho[n];
  return rho;
}

// J_n(s)/J_{n-1}(s), n = 1..nmax, by the backward continued fraction.
inline std::vector<double> bessel_j_ratios(int nmax, double s) {
  std::vector<double> rho(static_cast<std::size_t>(nmax) + 1);
  const int start = specfun::detail::miller_start(nmax, s) + nmax;
  double next = 0.0;
  for (int n = start; n >= 1; --n) {
    const double cur = 1.0 / (2.0 * n / s - next);
    if (n <= nmax) rho[n] = cur;
    next = cur;
  }
  return rho;
}

// Terms t_n = c_n F_n(s_x) H_n(s_y), n = 0..order, with F = H or H'.
// Low orders are evaluated directly; once Y_n overflows or c_n underflows
// the terms continue through ratio recurrences.
inline std::vector<cplx> image_terms(Boundary bc, double ka, double sx, double sy, int order,
                                     bool derivative_x) {
  std::vector<cplx> t(static_cast<std::size_t>(order) + 1, cplx{0.0, 0.0});
  const int direct_max = std::min(order, specfun::kOrderCap - 1);
  const auto ja = specfun::bessel_j_array(direct_max + 1, ka);
  const auto ya = specfun::bessel_y_array(direct_max + 1, ka);
  const auto hx = specfun::hankel1_array(direct_max + 1, sx);
  const auto hy = specfun::hankel1_array(direct_max + 1, sy);
  constexpr double kHuge = 1e150;
  constexpr double kTiny = 1e-200;

  int last = -1;
  for (int n = 0; n <= direct_max; ++n) {
    if (!(std::abs(ya[n + 1]) < kHuge && std::abs(hx[n + 1]) < kHuge &&
          std::abs(hy[n + 1]) < kHuge)) {
      break;
    }
    cplx c;
    if (bc == Boundary::dirichlet) {
      c = -ja[n] / cplx{ja[n], ya[n]};
    } else {
      const double jp = specfun::detail::cylinder_derivative(ja, n);
      const double yp = specfun::detail::cylinder_derivative(ya, n);
      c = -jp / cplx{jp, yp};
    }
    if (n > 1 && std::abs(c) < kTiny) break;
    const cplx f = derivative_x ? specfun::detail::cylinder_derivative(hx, n) : hx[n];
    t[n] = c * f * hy[n];
    last = n;
  }
  if (last == order) return t;
  if (last < 2) throw std::runtime_error("image series: unusable direct range");
  // Tail already negligible?
  if (std::abs(t[last]) < 1e-18 * std::abs(t[0])) return t;

  const auto rho_ka = hankel_ratios(order + 1, ka);
  const auto rho_x = hankel_ratios(order + 1, sx);
  const auto rho_y = hankel_ratios(order + 1, sy);
  const auto jrho = bessel_j_ratios(order + 1, ka);
  for (int n = last + 1; n <= order; ++n) {
    cplx c_ratio;
    if (bc == Boundary::dirichlet) {
      c_ratio = jrho[n] / rho_ka[n];
    } else {
      c_ratio = derivative_ratio(jrho, n) / derivative_ratio(rho_ka, n);
    }
    const cplx f_ratio = derivative_x ? derivative_ratio(rho_x, n) : rho_x[n];
    t[n] = t[n - 1] * c_ratio * f_ratio * rho_y[n];
    if (std::abs(t[n]) < 1e-18 * std::abs(t[0])) break;
  }
  return t;
}

// sum_{n=-N}^{N} c_n F_n(k r_x) H_n(k r_y) e^{i n (theta_x - theta_y)}.
inline cplx image_sum(const WaveContext& ctx, const ScattererSpec& scat, const Point& x,
                      const Point& y, bool derivative_x) {
  const double k = ctx.wavenumber();
  const double ka = k * scat.radius;
  const double rx = std::max(x.norm(), scat.radius);
  const double ry = std::max(y.norm(), scat.radius);
  const double ratio = scat.radius * scat.radius / (rx * ry);
  const int order = image_series_order(ka, ratio);
  const auto t = image_terms(scat.bc, ka, k * rx, k * ry, order, derivative_x);
  const double phi = polar_angle(x) - polar_angle(y);
  cplx sum = t[0];
  for (int n = 1; n <= order; ++n) {
    if (t[n] == cplx{0.0, 0.0}) continue;
    sum += 2.0 * t[n] * std::cos(n * phi);
  }
  return sum;
}

}  // namespace detail

/// Free-space kernel; throws for coincident points (the real part is singular).
inline cplx green_free(const WaveContext& ctx, const Point& x, const Point& y) {
  check_point(x, ctx.dimension, "x");
  check_point(y, ctx.dimension, "y");
  const double r = (x - y).norm();
  if (r == 0.0) throw std::domain_error("Green's function is singular at coincident points");
  const double k = ctx.wavenumber();
  const double v2 = ctx.speed * ctx.speed;
  if (ctx.dimension == 2) {
    return cplx{0.0, -1.0 / (4.0 * v2)} * specfun::hankel1(0, k * r);
  }
  return -std::polar(1.0, k * r) / (4.0 * std::numbers::pi * v2 * r);
}

/// Im G_free, including the finite x = y limit.
inline double im_green_free(const WaveContext& ctx, const Point& x, const Point& y) {
  check_point(x, ctx.dimension, "x");
  check_point(y, ctx.dimension, "y");
  const double r = (x - y).norm();
  const double k = ctx.wavenumber();
  const double v2 = ctx.speed * ctx.speed;
  if (ctx.dimension == 2) return -specfun::bessel_j(0, k * r) / (4.0 * v2);
  return -k * specfun::spherical_j(0, k * r) / (4.0 * std::numbers::pi * v2);
}

/// Exterior-disk kernel: free part plus the outgoing image series.
inline cplx green_disk(const WaveContext& ctx, const ScattererSpec& scat, const Point& x,
                       const Point& y) {
  if (!scat.is_disk()) throw std::invalid_argument("green_disk needs a disk obstacle");
  scalarwave::detail::require_disk_dimension(ctx);
  detail::check_pair(ctx, scat, x, y);
  const double v2 = ctx.speed * ctx.speed;
  return green_free(ctx, x, y) +
         cplx{0.0, -1.0 / (4.0 * v2)} * detail::image_sum(ctx, scat, x, y, false);
}

inline cplx green(const WaveContext& ctx, const ScattererSpec& scat, const Point& x,
                  const Point& y) {
  return scat.is_disk() ? green_disk(ctx, scat, x, y) : green_free(ctx, x, y);
}

/// Im G(omega + i0, x, y); finite at x = y.
inline double im_green(const WaveContext& ctx, const ScattererSpec& scat, const Point& x,
                       const Point& y) {
  detail::check_pair(ctx, scat, x, y);
  const double free = im_green_free(ctx, x, y);
  if (!scat.is_disk()) return free;
  const double v2 = ctx.speed * ctx.speed;
  return free - detail::image_sum(ctx, scat, x, y, false).real() / (4.0 * v2);
}

/// d/d|x| of G(x, y) with y fixed; used for Neumann boundary checks.
inline cplx green_radial_derivative(const WaveContext& ctx, const ScattererSpec& scat,
                                    const Point& x, const Point& y) {
  detail::check_pair(ctx, scat, x, y);
  if (ctx.dimension != 2) throw std::invalid_argument("radial derivative is implemented for d = 2");
  const double k = ctx.wavenumber();
  const double v2 = ctx.speed * ctx.speed;
  const Point diff = x - y;
  const double r = diff.norm();
  if (r == 0.0) throw std::domain_error("coincident points");
  const double rx = x.norm();
  const double cos_angle = rx > 0.0 ? diff.dot(x) / (r * rx) : 0.0;
  cplx d = cplx{0.0, -1.0 / (4.0 * v2)} * (-k * specfun::hankel1(1, k * r)) * cos_angle;
  if (scat.is_disk()) {
    d += cplx{0.0, -1.0 / (4.0 * v2)} * k * detail::image_sum(ctx, scat, x, y, true);
  }
  return d;
}

}  // namespace scattercorr::greenfn
