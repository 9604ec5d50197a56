#pragma once

#include "nordvlas/lattice.hpp"
#include "nordvlas/state.hpp"
#include "nordvlas/vec3.hpp"

namespace nordvlas {

/// Compactly supported polynomial bump A * (1 - |x - c|^2 / R^2)^k, zero outside
/// the ball. C^{k-1} across the support boundary.
struct RadialBump {
  double amplitude = 0.0;
  double radius = 1.0;
  int exponent = 4;
  Vec3 center{};

  double value(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
  double laplacian(const Vec3& x) const;
};

/// Polynomial profile q(s) = (1 - s)^k for s < 1, else 0.
double bump_profile(double s, int exponent);

/// Parameters of the initial data family (f0, phi0, phi1).
struct DataParams {
  double A_f = 0.0;
  double R_x = 1.0;
  double R_p = 1.0;
  double A_phi = 0.0;
  double R_phi = 1.0;
  double A_pi = 0.0;
  double R_pi = 1.0;
  Vec3 offset_f{};
  Vec3 offset_phi{};
  Vec3 offset_pi{};

  /// Throws ConfigError on non-positive radii, non-finite amplitudes or A_f < 0.
  void validate() const;

  /// Largest distance from the origin reached by any of the three supports.
  double support_extent() const;

  RadialBump phi0_bump() const { return {A_phi, R_phi, 4, offset_phi}; }
  RadialBump phi1_bump() const { return {A_pi, R_pi, 3, offset_pi}; }
};

double f0_eval(const Vec3& x, const Vec3& p, const DataParams& params);
double phi0_eval(const Vec3& x, const DataParams& params);
double phi1_eval(const Vec3& x, const DataParams& params);

/// Midpoint-rule discretization of f0: an nx^3 lattice over the spatial support
/// cube times an np^3 lattice over the momentum support cube; samples where
/// f0 vanishes are dropped. Deterministic and ordered (x outer, p inner).
Ensemble sample_ensemble(const DataParams& params, int nx_per_axis, int np_per_axis,
                         const GridSpec& grid);

/// Field lattices at t = 0: phi = phi0, dphi_dt = phi1 at every node.
ScalarFieldState initial_field(const GridSpec& grid, const DataParams& params);

}  // namespace nordvlas
