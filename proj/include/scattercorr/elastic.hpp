#pragma once

// Free-space isotropic elasticity: P/S polarizations, the direction-averaged
// correlation tensor of elastic plane waves, and the outgoing Green tensor of
// (omega^2 - H) with H u = -a Lap u - b grad div u.

#include "scattercorr/specfun.hpp"
#include "scattercorr/sphquad.hpp"
#include "scattercorr/types.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace scattercorr::elastic {

/// Density and Lame coefficients; a = mu / rho, b = (lambda + mu) / rho.
struct ElasticMedium {
  double rho = 1.0;
  double lambda = 1.0;
  double mu = 1.0;

  static ElasticMedium make(double rho, double lambda, double mu) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be positive");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive");
    if (!(lambda + mu > 0.0) || !std::isfinite(lambda)) {
      throw std::invalid_argument("lambda + mu must be positive");
    }
    return {rho, lambda, mu};
  }

  double a() const { return mu / rho; }
  double b() const { return (lambda + mu) / rho; }
  double v_p() const { return std::sqrt(a() + b()); }
  double v_s() const { return std::sqrt(a()); }
};

enum class TangentRule {
  axis,     // Gram-Schmidt on the coordinate axis least aligned with khat
  rotated,  // axis rule, then rotated in the tangent plane by a k-dependent angle
};

/// khat followed by d - 1 unit tangents; together an orthonormal basis.
struct PolarizationBasis {
  Point khat;
  std::vector<Point> tangents;
};

inline PolarizationBasis polarization_basis(const Point& kvec,
                                            TangentRule rule = TangentRule::axis) {
  const int d = static_cast<int>(kvec.size());
  check_dimension(d);
  const double norm = kvec.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("polarization basis needs a nonzero finite wave vector");
  }
  PolarizationBasis basis{kvec / norm, {}};
  const Point& khat = basis.khat;

  int axis = 0;
  for (int i = 1; i < d; ++i) {
    if (std::abs(khat(i)) < std::abs(khat(axis))) axis = i;
  }
  Point t1 = Point::Zero(d);
  t1(axis) = 1.0;
  t1 -= t1.dot(khat) * khat;
  t1.normalize();

  if (d == 2) {
    basis.tangents.push_back(t1);
    return basis;
  }
  const Eigen::Vector3d k3 = khat;
  Point t2 = k3.cross(Eigen::Vector3d(t1));
  if (rule == TangentRule::rotated) {
    const double angle = 0.7 + 1.3 * khat(0) - 0.4 * khat(2);
    const Point r1 = std::cos(angle) * t1 + std::sin(angle) * t2;
    const Point r2 = -std::sin(angle) * t1 + std::cos(angle) * t2;
    t1 = r1;
    t2 = r2;
  }
  basis.tangents.push_back(t1);
  basis.tangents.push_back(t2);
  return basis;
}

/// P_P = khat khat^T and P_S = sum_j t_j t_j^T.
struct ProjectorPair {
  RealMatrix p;
  RealMatrix s;
};

inline ProjectorPair projectors(const PolarizationBasis& basis) {
  ProjectorPair out{basis.khat * basis.khat.transpose(), RealMatrix::Zero(basis.khat.size(), basis.khat.size())};
  for (const Point& t : basis.tangents) out.s += t * t.transpose();
  return out;
}

inline ProjectorPair projectors(const Point& kvec, TangentRule rule = TangentRule::axis) {
  return projectors(polarization_basis(kvec, rule));
}

/// e^{i k.x} khat.
inline ComplexVector plane_wave_p(const Point& x, const Point& kvec) {
  check_point(x, static_cast<int>(kvec.size()), "point");
  const auto basis = polarization_basis(kvec);
  return std::polar(1.0, kvec.dot(x)) * basis.khat.cast<cplx>();
}

/// e^{i k.x} t_j, j = 1..d-1.
inline ComplexVector plane_wave_s(const Point& x, const Point& kvec, int j,
                                  TangentRule rule = TangentRule::axis) {
  check_point(x, static_cast<int>(kvec.size()), "point");
  const auto basis = polarization_basis(kvec, rule);
  if (j < 1 || j > static_cast<int>(basis.tangents.size())) {
    throw std::out_of_range("S-wave index must lie in 1..d-1");
  }
  return std::polar(1.0, kvec.dot(x)) * basis.tangents[j - 1].cast<cplx>();
}

inline double sphere_area(int d) {
  check_dimension(d);
  return d == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
}

/// (1/sigma) [ v_P^{-d} int_{v_P k = w} |e_P(x)><e_P(y)| + v_S^{-d} sum_j int_{v_S k = w} |e_Sj(x)><e_Sj(y)| ]
/// evaluated with the given direction rule.
inline ComplexMatrix correlation_tensor_free(double omega, const ElasticMedium& medium,
                                             const Point& x, const Point& y,
                                             const sphquad::SphereRule& rule,
                                             TangentRule tangent_rule = TangentRule::axis) {
  const int d = static_cast<int>(x.size());
  check_dimension(d);
  check_point(y, d, "y");
  if (rule.dimension != d) throw std::invalid_argument("quadrature rule dimension mismatch");
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  const double vp = medium.v_p();
  const double vs = medium.v_s();
  const double kp = omega / vp;
  const double ks = omega / vs;
  const double wp = 1.0 / (sphere_area(d) * std::pow(vp, d));
  const double ws = 1.0 / (sphere_area(d) * std::pow(vs, d));
  const Point diff = x - y;
  return sphquad::integrate(rule, [&](const Point& khat) {
    const auto basis = polarization_basis(khat, tangent_rule);
    const auto proj = projectors(basis);
    // |e(x)><e(y)| = e^{i k.(x - y)} (polarization)(polarization)^T
    const cplx phase_p = std::polar(1.0, kp * khat.dot(diff));
    const cplx phase_s = std::polar(1.0, ks * khat.dot(diff));
    ComplexMatrix m = (wp * phase_p) * proj.p.cast<cplx>() + (ws * phase_s) * proj.s.cast<cplx>();
    return m;
  });
}

namespace detail {

// Radial profiles of (1/sigma) int e^{i k khat.r} khat khat^T dsigma
//   = A(s) rhat rhat^T + B(s) (I - rhat rhat^T),  s = k|r|,
// with W = J0 (d=2) or j0 (d=3), B = W_1(s)/s, A = W - (d-1) B.
struct WeylProfile {
  double w;
  double a;
  double b;
};

inline WeylProfile weyl_profile(int d, double s) {
  if (s == 0.0) return {1.0, 1.0 / d, 1.0 / d};
  double w;
  double b;
  if (d == 2) {
    const auto j = specfun::bessel_j_array(1, s);
    w = j[0];
    b = j[1] / s;
  } else {
    const auto j = specfun::spherical_j_array(1, s);
    w = j[0];
    b = j[1] / s;
  }
  return {w, w - (d - 1) * b, b};
}

inline RealMatrix radial_tensor(const Point& rhat, int d, double along, double across) {
  const RealMatrix rr = rhat * rhat.transpose();
  return along * rr + across * (RealMatrix::Identity(d, d) - rr);
}

}  // namespace detail

/// Closed form of correlation_tensor_free from first and second derivatives
/// of the Weyl kernels J0 / j0.
inline ComplexMatrix correlation_tensor_closed(double omega, const ElasticMedium& medium,
                                               const Point& x, const Point& y) {
  const int d = static_cast<int>(x.size());
  check_dimension(d);
  check_point(y, d, "y");
  const double vp = medium.v_p();
  const double vs = medium.v_s();
  const Point diff = x - y;
  const double r = diff.norm();
  Point rhat = Point::Zero(d);
  if (r > 0.0) {
    rhat = diff / r;
  } else {
    rhat(0) = 1.0;  // any direction: the profile is isotropic at r = 0
  }
  const auto p = detail::weyl_profile(d, omega / vp * r);
  const auto s = detail::weyl_profile(d, omega / vs * r);
  const RealMatrix p_part = detail::radial_tensor(rhat, d, p.a, p.b);
  const RealMatrix s_part =
      s.w * RealMatrix::Identity(d, d) - detail::radial_tensor(rhat, d, s.a, s.b);
  return (p_part / std::pow(vp, d) + s_part / std::pow(vs, d)).cast<cplx>();
}

namespace detail {

// Outgoing kernel g of (Lap + k^2) at wavenumber k written as alpha F0(kr),
// with F = H^(1) (d=2) or h^(1) (d=3).  Returns the tensor
//   grad grad g = -alpha k^2 [ (F0 - (d-1) F1/s) rhat rhat^T + (F1/s) (I - rhat rhat^T) ]
// together with g itself.
struct KernelDerivatives {
  cplx g;
  ComplexMatrix hessian;
};

inline KernelDerivatives outgoing_kernel(int d, double k, const Point& rhat, double r) {
  const double s = k * r;
  cplx alpha;
  cplx f0;
  cplx f1;
  if (d == 2) {
    alpha = cplx{0.0, -0.25};
    const auto h = specfun::hankel1_array(1, s);
    f0 = h[0];
    f1 = h[1];
  } else {
    alpha = cplx{0.0, -k / (4.0 * std::numbers::pi)};
    const auto h = specfun::spherical_h1_array(1, s);
    f0 = h[0];
    f1 = h[1];
  }
  const cplx along = f0 - static_cast<double>(d - 1) * f1 / s;
  const cplx across = f1 / s;
  const ComplexMatrix rr = (rhat * rhat.transpose()).cast<cplx>();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  ComplexMatrix hess = (-alpha * k * k) * (along * rr + across * (id - rr));
  return {alpha * f0, hess};
}

}  // namespace detail

/// G = g_S / v_S^2 Id - (1/omega^2) grad grad (g_P - g_S), g_c the outgoing
/// kernel of (Lap + (omega/v_c)^2).  Throws at coincident points.
inline ComplexMatrix green_tensor_free(double omega, const ElasticMedium& medium,
                                       const Point& x, const Point& y) {
  const int d = static_cast<int>(x.size());
  check_dimension(d);
  check_point(y, d, "y");
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  const Point diff = x - y;
  const double r = diff.norm();
  if (r == 0.0) throw std::domain_error("elastic Green tensor is singular at coincident points");
  const Point rhat = diff / r;
  const double vp = medium.v_p();
  const double vs = medium.v_s();
  const auto gp = detail::outgoing_kernel(d, omega / vp, rhat, r);
  const auto gs = detail::outgoing_kernel(d, omega / vs, rhat, r);
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  return (gs.g / (vs * vs)) * id - (gp.hessian - gs.hessian) / (omega * omega);
}

/// Im of green_tensor_free, with the finite limit at x = y.
inline RealMatrix im_green_tensor_free(double omega, const ElasticMedium& medium,
                                       const Point& x, const Point& y) {
  const int d = static_cast<int>(x.size());
  check_dimension(d);
  check_point(y, d, "y");
  if ((x - y).norm() > 0.0) return green_tensor_free(omega, medium, x, y).imag();
  // Im g_c = -beta_c W, beta = 1/4 (d=2) or k/(4 pi) (d=3); W(0) = 1 and
  // grad grad W(0) = -(k^2/d) Id.
  const double vp = medium.v_p();
  const double vs = medium.v_s();
  auto beta = [&](double v) {
    return d == 2 ? 0.25 : omega / v / (4.0 * std::numbers::pi);
  };
  const double diag = -(beta(vp) / (vp * vp) / d + beta(vs) / (vs * vs) * (d - 1.0) / d);
  return diag * RealMatrix::Identity(d, d);
}

}  // namespace scattercorr::elastic
