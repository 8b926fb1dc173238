#pragma once

// Shared vocabulary: points and small tensors of runtime dimension 2 or 3.

#include <Eigen/Dense>

#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace scattercorr {

using cplx = std::complex<double>;

/// A point or vector in R^d, d in {2, 3}; storage never leaves the stack.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using ComplexVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;
using ComplexMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;

inline Point make_point(std::initializer_list<double> coords) {
  if (coords.size() < 2 || coords.size() > 3) {
    throw std::invalid_argument("points must have 2 or 3 coordinates");
  }
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p(i++) = c;
  return p;
}

inline void check_dimension(int d) {
  if (d != 2 && d != 3) {
    throw std::invalid_argument("dimension must be 2 or 3, got " + std::to_string(d));
  }
}

inline void check_point(const Point& p, int d, const char* what) {
  if (p.size() != d) {
    throw std::invalid_argument(std::string(what) + " has dimension " +
                                std::to_string(p.size()) + ", expected " +
                                std::to_string(d));
  }
  if (!p.allFinite()) throw std::invalid_argument(std::string(what) + " is not finite");
}

/// Polar angle of the first two coordinates.
inline double polar_angle(const Point& p) { return std::atan2(p(1), p(0)); }

}  // namespace scattercorr
