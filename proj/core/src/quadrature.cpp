#include "nordvlas/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "nordvlas/errors.hpp"

namespace nordvlas {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ConfigError("Gauss-Legendre order must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // Newton on P_n from the Chebyshev-like initial guess; roots are symmetric.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

SphereRule SphereRule::lebedev26() {
  SphereRule rule;
  const double four_pi = 4.0 * std::numbers::pi;
  auto add = [&](Vec3 d, double w) {
    rule.directions.push_back(d);
    rule.weights.push_back(four_pi * w);
  };
  for (int axis = 0; axis < 3; ++axis)
    for (double s : {1.0, -1.0}) {
      Vec3 d{};
      d[axis] = s;
      add(d, 1.0 / 21.0);
    }
  const double e = 1.0 / std::numbers::sqrt2;
  for (int axis = 0; axis < 3; ++axis)
    for (double s1 : {1.0, -1.0})
      for (double s2 : {1.0, -1.0}) {
        Vec3 d{};
        d[(axis + 1) % 3] = s1 * e;
        d[(axis + 2) % 3] = s2 * e;
        add(d, 4.0 / 105.0);
      }
  const double c = 1.0 / std::numbers::sqrt3;
  for (double sx : {1.0, -1.0})
    for (double sy : {1.0, -1.0})
      for (double sz : {1.0, -1.0}) add({sx * c, sy * c, sz * c}, 9.0 / 280.0);
  return rule;
}

SphereRule SphereRule::product(int n_polar) {
  const QuadratureRule polar = gauss_legendre(n_polar, -1.0, 1.0);
  const int n_az = 2 * n_polar;
  SphereRule rule;
  rule.directions.reserve(static_cast<std::size_t>(n_polar) * n_az);
  rule.weights.reserve(static_cast<std::size_t>(n_polar) * n_az);
  const double dphi = 2.0 * std::numbers::pi / n_az;
  for (std::size_t a = 0; a < polar.size(); ++a) {
    const double u = polar.nodes[a];
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    for (int b = 0; b < n_az; ++b) {
      const double az = (b + 0.5) * dphi;
      rule.directions.push_back({s * std::cos(az), s * std::sin(az), u});
      rule.weights.push_back(polar.weights[a] * dphi);
    }
  }
  return rule;
}

SphereRule SphereRule::fibonacci(int n) {
  if (n < 1) throw ConfigError("Fibonacci sphere rule needs at least one point");
  SphereRule rule;
  rule.directions.reserve(n);
  rule.weights.assign(n, 4.0 * std::numbers::pi / n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double az = golden * i;
    rule.directions.push_back({r * std::cos(az), r * std::sin(az), z});
  }
  return rule;
}

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     double rel_tol, double abs_tol, std::size_t max_intervals) {
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;
  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> work(
      gsl_integration_workspace_alloc(max_intervals), &gsl_integration_workspace_free);
  gsl_function fn;
  fn.function = [](double x, void* params) { return (*static_cast<const std::function<double(double)>*>(params))(x); };
  fn.params = const_cast<std::function<double(double)>*>(&f);
  IntegrationResult out;
  const int status = gsl_integration_qag(&fn, a, b, abs_tol, rel_tol, max_intervals, GSL_INTEG_GAUSS21,
                                         work.get(), &out.value, &out.error);
  const double target = std::max(rel_tol * std::abs(out.value), abs_tol);
  if (!std::isfinite(out.value) || (status != GSL_SUCCESS && out.error > target))
    throw QuadratureError("adaptive quadrature did not converge: achieved error " + std::to_string(out.error) +
                          " vs target " + std::to_string(target));
  return out;
}

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v))
    comp_ += (sum_ - t) + v;
  else
    comp_ += (v - t) + sum_;
  sum_ = t;
}

}  // namespace nordvlas
