#pragma once

// Cylindrical and spherical Bessel/Hankel functions of integer order and
// real argument, plus Legendre polynomials.
//
// J_n is computed by Miller's backward recurrence normalized with
// J_0 + 2 sum J_2k = 1.  Y_0 and Y_1 come from Neumann series in the
// J_n (x < 20) or from the Hankel asymptotic expansion (x >= 20); higher
// Y_n follow by forward recurrence, which is stable for the dominant
// solution.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace scattercorr::specfun {

using cplx = std::complex<double>;

/// Largest |n| accepted by any routine.
inline constexpr int kOrderCap = 512;
/// Largest argument accepted; accuracy is validated up to here.
inline constexpr double kArgumentCap = 1.0e5;

namespace detail {

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kAsymptoticThreshold = 20.0;
inline constexpr double kRescale = 1e250;

inline void check_order(int n) {
  if (n > kOrderCap || n < -kOrderCap) {
    throw std::out_of_range("order " + std::to_string(n) + " exceeds cap " +
                            std::to_string(kOrderCap));
  }
}

inline void check_argument(double x, bool singular_at_zero) {
  if (!std::isfinite(x)) {
    throw std::domain_error("non-finite Bessel argument");
  }
  if (x < 0.0) {
    throw std::domain_error("negative Bessel argument " + std::to_string(x));
  }
  if (x > kArgumentCap) {
    throw std::domain_error("Bessel argument " + std::to_string(x) +
                            " exceeds cap " + std::to_string(kArgumentCap));
  }
  if (singular_at_zero && x == 0.0) {
    throw std::domain_error("function is singular at x = 0");
  }
}

// Even starting order for backward recurrence; J_M(x)/J_n(x) is far below
// machine precision at this order for every n <= nmax.
inline int miller_start(int nmax, double x) {
  const int m0 = std::max(nmax, static_cast<int>(std::ceil(x)));
  const int m = m0 + 20 + static_cast<int>(std::sqrt(40.0 * m0));
  return m + (m & 1);
}

// Runs the three-term recurrence f_{k-1} = (a_k / x) f_k - f_{k+1} downward
// from order `start` and stores orders 0..nmax (unnormalized, consistently
// rescaled).  `weight(k)` multiplies f_k in the accumulated normalization
// sum, returned through `norm_sum` (includes k = 0).
template <class Coef, class Weight>
std::vector<double> backward_recurrence(int nmax, int start, double x, Coef coef,
                                        Weight weight, double& norm_sum) {
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  double next = 0.0;
  double cur = 1.0;
  double sum = 0.0;
  for (int k = start; k >= 1; --k) {
    if (k <= nmax) out[k] = cur;
    sum += weight(k) * cur;
    const double prev = coef(k) / x * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      next /= kRescale;
      sum /= kRescale;
      for (int i = std::max(k, 0); i <= nmax; ++i) out[i] /= kRescale;
    }
  }
  out[0] = cur;
  norm_sum = sum + weight(0) * cur;
  return out;
}

// Hankel asymptotic expansion for orders 0 and 1: returns (J_nu, Y_nu).
inline std::pair<double, double> hankel_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double prev_abs = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * x);
    const double abs_term = std::abs(term);
    if (abs_term > prev_abs) break;  // divergent tail of the asymptotic series
    // Terms alternate in pairs: P = t0 - t2 + t4 ..., Q = t1 - t3 + ...
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * term;
    } else {
      q += sign * term;
    }
    if (abs_term < 1e-18) break;
    prev_abs = abs_term;
  }
  // chi = x - (nu/2 + 1/4) pi, expanded to keep the phase exact in x.
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double r = std::numbers::sqrt2 / 2.0;
  double cos_chi;
  double sin_chi;
  if (nu == 0) {
    cos_chi = r * (c + s);
    sin_chi = r * (s - c);
  } else {
    cos_chi = r * (s - c);
    sin_chi = -r * (c + s);
  }
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  return {amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi)};
}

inline double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

}  // namespace detail

/// J_0(x) .. J_nmax(x).
inline std::vector<double> bessel_j_array(int nmax, double x) {
  detail::check_order(nmax);
  if (nmax < 0) throw std::out_of_range("negative array order");
  detail::check_argument(x, false);
  if (x == 0.0) {
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    out[0] = 1.0;
    return out;
  }
  double norm = 0.0;
  auto out = detail::backward_recurrence(
      nmax, detail::miller_start(nmax, x), x, [](int k) { return 2.0 * k; },
      [](int k) { return k == 0 ? 1.0 : (k % 2 == 0 ? 2.0 : 0.0); }, norm);
  for (double& v : out) v /= norm;
  return out;
}

/// Y_0(x) .. Y_nmax(x), x > 0.  High orders at small x overflow to inf.
inline std::vector<double> bessel_y_array(int nmax, double x) {
  detail::check_order(nmax);
  if (nmax < 0) throw std::out_of_range("negative array order");
  detail::check_argument(x, true);
  double y0;
  double y1;
  if (x < detail::kAsymptoticThreshold) {
    const int m = detail::miller_start(1, x);
    const auto j = bessel_j_array(m, x);
    const double log_term = std::log(x / 2.0) + detail::kEulerGamma;
    double s0 = 0.0;
    double s1 = 0.0;
    for (int k = 1; 2 * k + 1 <= m; ++k) {
      const double sign = detail::parity(k);
      s0 += sign * j[2 * k] / k;
      s1 += sign * (2.0 * k + 1.0) * j[2 * k + 1] / (k * (k + 1.0));
    }
    y0 = 2.0 / std::numbers::pi * (log_term * j[0] - 2.0 * s0);
    y1 = 2.0 / std::numbers::pi * (-j[0] / x + (log_term - 1.0) * j[1] - s1);
  } else {
    y0 = detail::hankel_asymptotic(0, x).second;
    y1 = detail::hankel_asymptotic(1, x).second;
  }
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
  out[0] = y0;
  if (nmax >= 1) out[1] = y1;
  for (int k = 1; k < nmax; ++k) {
    out[k + 1] = (2.0 * k / x) * out[k] - out[k - 1];
  }
  return out;
}

/// H^(1)_0(x) .. H^(1)_nmax(x), x > 0.
inline std::vector<cplx> hankel1_array(int nmax, double x) {
  const auto j = bessel_j_array(nmax, x);
  const auto y = bessel_y_array(nmax, x);
  std::vector<cplx> out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out[i] = {j[i], y[i]};
  return out;
}

inline double bessel_j(int n, double x) {
  detail::check_order(n);
  const int m = std::abs(n);
  const double v = bessel_j_array(m, x)[m];
  return n < 0 ? detail::parity(m) * v : v;
}

inline double bessel_y(int n, double x) {
  detail::check_order(n);
  const int m = std::abs(n);
  const double v = bessel_y_array(m, x)[m];
  return n < 0 ? detail::parity(m) * v : v;
}

inline cplx hankel1(int n, double x) { return {bessel_j(n, x), bessel_y(n, x)}; }

namespace detail {

// F_n' = (F_{n-1} - F_{n+1}) / 2 from an array holding orders 0..|n|+1.
template <class T>
T cylinder_derivative(const std::vector<T>& f, int n) {
  const int m = std::abs(n);
  const T d = (m == 0) ? -f[1] : (f[m - 1] - f[m + 1]) / 2.0;
  return n < 0 ? parity(m) * d : d;
}

}  // namespace detail

inline double bessel_j_prime(int n, double x) {
  detail::check_order(n);
  detail::check_order(std::abs(n) + 1);
  return detail::cylinder_derivative(bessel_j_array(std::abs(n) + 1, x), n);
}

inline double bessel_y_prime(int n, double x) {
  detail::check_order(n);
  detail::check_order(std::abs(n) + 1);
  return detail::cylinder_derivative(bessel_y_array(std::abs(n) + 1, x), n);
}

inline cplx hankel1_prime(int n, double x) {
  return {bessel_j_prime(n, x), bessel_y_prime(n, x)};
}

// ---------------------------------------------------------------------------
// Spherical family, n >= 0.

namespace detail {

inline void check_spherical_order(int n) {
  check_order(n);
  if (n < 0) throw std::out_of_range("spherical Bessel order must be >= 0");
}

}  // namespace detail

/// j_0(x) .. j_nmax(x).
inline std::vector<double> spherical_j_array(int nmax, double x) {
  detail::check_spherical_order(nmax);
  detail::check_argument(x, false);
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const int stored = std::max(nmax, 1);
  double unused = 0.0;
  auto raw = detail::backward_recurrence(
      stored, detail::miller_start(stored, x), x,
      [](int k) { return 2.0 * k + 1.0; }, [](int) { return 0.0; }, unused);
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double j0 = s / x;
  double scale;
  if (x < 1.0) {
    scale = j0 / raw[0];
  } else {
    const double j1 = (s / x - c) / x;
    scale = std::abs(j0) >= std::abs(j1) ? j0 / raw[0] : j1 / raw[1];
  }
  for (int k = 0; k <= nmax; ++k) out[k] = raw[k] * scale;
  return out;
}

/// y_0(x) .. y_nmax(x), x > 0.
inline std::vector<double> spherical_y_array(int nmax, double x) {
  detail::check_spherical_order(nmax);
  detail::check_argument(x, true);
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
  const double s = std::sin(x);
  const double c = std::cos(x);
  out[0] = -c / x;
  if (nmax >= 1) out[1] = -c / (x * x) - s / x;
  for (int k = 1; k < nmax; ++k) {
    out[k + 1] = ((2.0 * k + 1.0) / x) * out[k] - out[k - 1];
  }
  return out;
}

inline std::vector<cplx> spherical_h1_array(int nmax, double x) {
  const auto j = spherical_j_array(nmax, x);
  const auto y = spherical_y_array(nmax, x);
  std::vector<cplx> out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out[i] = {j[i], y[i]};
  return out;
}

inline double spherical_j(int n, double x) { return spherical_j_array(n, x)[n]; }
inline double spherical_y(int n, double x) { return spherical_y_array(n, x)[n]; }
inline cplx spherical_h1(int n, double x) { return spherical_h1_array(n, x)[n]; }

namespace detail {

// f_n' = f_{n-1} - (n+1)/x f_n, f_0' = -f_1.
template <class T>
T spherical_derivative(const std::vector<T>& f, int n, double x) {
  if (n == 0) return -f[1];
  return f[n - 1] - ((n + 1.0) / x) * f[n];
}

}  // namespace detail

inline double spherical_j_prime(int n, double x) {
  detail::check_spherical_order(n);
  detail::check_argument(x, false);
  if (x == 0.0) return n == 1 ? 1.0 / 3.0 : 0.0;
  return detail::spherical_derivative(spherical_j_array(n + 1, x), n, x);
}

inline double spherical_y_prime(int n, double x) {
  detail::check_spherical_order(n);
  return detail::spherical_derivative(spherical_y_array(n + 1, x), n, x);
}

inline cplx spherical_h1_prime(int n, double x) {
  return {spherical_j_prime(n, x), spherical_y_prime(n, x)};
}

/// Legendre polynomial P_n(t) by the three-term recurrence.
inline double legendre_p(int n, double t) {
  if (n < 0) throw std::out_of_range("Legendre degree must be >= 0");
  if (!(t >= -1.0 && t <= 1.0)) {
    throw std::domain_error("Legendre argument outside [-1, 1]");
  }
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = t;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * t * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace scattercorr::specfun
