#pragma once

#include <functional>
#include <vector>

#include "nordvlas/vec3.hpp"

namespace nordvlas {

/// Nodes and weights of a one-dimensional rule on [a, b].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule mapped to [a, b] (exact for degree 2n - 1).
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Directions and weights on the unit sphere; weights sum to 4*pi.
struct SphereRule {
  std::vector<Vec3> directions;
  std::vector<double> weights;

  std::size_t size() const { return directions.size(); }

  /// 26-point Lebedev rule (exact for spherical harmonics of degree <= 7).
  static SphereRule lebedev26();
  /// Gauss-Legendre in cos(theta) times 2n-point trapezoid in azimuth.
  static SphereRule product(int n_polar);
  /// n area-uniform points on a Fibonacci spiral, equal weights.
  static SphereRule fibonacci(int n);
};

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
};

/// Globally adaptive Gauss-Kronrod (G10/K21) on [a, b]. Throws QuadratureError
/// when the error estimate stays above max(rel_tol * |value|, abs_tol).
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     double rel_tol, double abs_tol = 0.0,
                                     std::size_t max_intervals = 2000);

/// Kahan-Babuska (Neumaier) compensated sum.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace nordvlas
