#pragma once

// Quadrature on the unit circle (d = 2) and unit sphere (d = 3) with
// respect to the usual surface measure, plus Gauss-Legendre on intervals.

#include "scattercorr/types.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace scattercorr::sphquad {

struct GaussLegendre {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
inline GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
  GaussLegendre rule{std::vector<double>(n), std::vector<double>(n)};
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Gauss-Legendre rule mapped to [a, b].
inline GaussLegendre gauss_legendre(int n, double a, double b) {
  auto rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

/// Nodes on S^{d-1} with positive weights summing to the sphere's area.
struct SphereRule {
  int dimension = 2;
  std::vector<Point> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// N equispaced angles with weight 2 pi / N; exact for e^{i m theta}, |m| < N.
inline SphereRule circle_rule(int n) {
  if (n < 1) throw std::invalid_argument("circle rule needs N >= 1");
  SphereRule rule;
  rule.dimension = 2;
  rule.nodes.reserve(n);
  rule.weights.assign(n, 2.0 * std::numbers::pi / n);
  for (int j = 0; j < n; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / n;
    rule.nodes.push_back(make_point({std::cos(theta), std::sin(theta)}));
  }
  return rule;
}

/// Gauss-Legendre in cos(polar angle) times equispaced azimuth.
inline SphereRule sphere_rule(int n_polar, int n_azimuth) {
  if (n_polar < 1 || n_azimuth < 1) {
    throw std::invalid_argument("sphere rule needs positive node counts");
  }
  const auto gl = gauss_legendre(n_polar);
  SphereRule rule;
  rule.dimension = 3;
  rule.nodes.reserve(static_cast<std::size_t>(n_polar) * n_azimuth);
  rule.weights.reserve(rule.nodes.capacity());
  const double dphi = 2.0 * std::numbers::pi / n_azimuth;
  for (int i = 0; i < n_polar; ++i) {
    const double t = gl.nodes[i];
    const double s = std::sqrt((1.0 - t) * (1.0 + t));
    for (int j = 0; j < n_azimuth; ++j) {
      const double phi = dphi * j;
      rule.nodes.push_back(make_point({s * std::cos(phi), s * std::sin(phi), t}));
      rule.weights.push_back(gl.weights[i] * dphi);
    }
  }
  return rule;
}

/// Sizes that integrate angular bandwidth up to `bandwidth` exactly.
struct RuleSize {
  int circle_nodes;
  int polar_nodes;
  int azimuth_nodes;
};

inline RuleSize default_rule_size(int bandwidth) {
  return {2 * bandwidth + 16, bandwidth + 8, 2 * bandwidth + 16};
}

inline SphereRule make_rule(int dimension, const RuleSize& size) {
  check_dimension(dimension);
  return dimension == 2 ? circle_rule(size.circle_nodes)
                        : sphere_rule(size.polar_nodes, size.azimuth_nodes);
}

/// Weighted sum of f over the nodes, accumulated in node order.
template <class F>
auto integrate(const SphereRule& rule, F&& f) {
  using Result = std::decay_t<decltype(f(rule.nodes.front()))>;
  if (rule.nodes.empty()) throw std::invalid_argument("empty sphere rule");
  Result acc = rule.weights[0] * f(rule.nodes[0]);
  for (std::size_t i = 1; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(rule.nodes[i]);
  }
  return acc;
}

}  // namespace scattercorr::sphquad
