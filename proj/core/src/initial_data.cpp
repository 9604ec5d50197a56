#include "nordvlas/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nordvlas/errors.hpp"

namespace nordvlas {

double bump_profile(double s, int exponent) {
  if (s >= 1.0) return 0.0;
  const double u = 1.0 - s;
  double v = 1.0;
  for (int i = 0; i < exponent; ++i) v *= u;
  return v;
}

double RadialBump::value(const Vec3& x) const {
  if (amplitude == 0.0) return 0.0;
  return amplitude * bump_profile(norm2(x - center) / (radius * radius), exponent);
}

Vec3 RadialBump::gradient(const Vec3& x) const {
  const Vec3 d = x - center;
  const double inv_r2 = 1.0 / (radius * radius);
  const double s = norm2(d) * inv_r2;
  if (amplitude == 0.0 || s >= 1.0) return {};
  // d/dx (1 - s)^k = -k (1 - s)^{k-1} * 2 d / R^2
  const double c = -2.0 * amplitude * exponent * bump_profile(s, exponent - 1) * inv_r2;
  return c * d;
}

double RadialBump::laplacian(const Vec3& x) const {
  const double inv_r2 = 1.0 / (radius * radius);
  const double s = norm2(x - center) * inv_r2;
  if (amplitude == 0.0 || s >= 1.0) return 0.0;
  const int k = exponent;
  // -2Ak/R^2 (1-s)^{k-2} [3(1-s) - 2(k-1)s]
  const double tail = k >= 2 ? bump_profile(s, k - 2) : 1.0 / (1.0 - s);
  return -2.0 * amplitude * k * inv_r2 * tail * (3.0 * (1.0 - s) - 2.0 * (k - 1) * s);
}

void DataParams::validate() const {
  auto check_radius = [](double r, const char* name) {
    if (!(r > 0.0) || !std::isfinite(r))
      throw ConfigError(std::string("data.") + name + " must be positive and finite");
  };
  check_radius(R_x, "R_x");
  check_radius(R_p, "R_p");
  check_radius(R_phi, "R_phi");
  check_radius(R_pi, "R_pi");
  if (!std::isfinite(A_f) || !std::isfinite(A_phi) || !std::isfinite(A_pi))
    throw ConfigError("data amplitudes must be finite");
  if (A_f < 0.0) throw ConfigError("data.A_f must be >= 0 (f0 is a non-negative density)");
}

double DataParams::support_extent() const {
  double r = 0.0;
  if (A_f != 0.0) r = std::max(r, norm(offset_f) + R_x);
  if (A_phi != 0.0) r = std::max(r, norm(offset_phi) + R_phi);
  if (A_pi != 0.0) r = std::max(r, norm(offset_pi) + R_pi);
  return r;
}

double f0_eval(const Vec3& x, const Vec3& p, const DataParams& params) {
  if (params.A_f == 0.0) return 0.0;
  const double qx = bump_profile(norm2(x - params.offset_f) / (params.R_x * params.R_x), 4);
  if (qx == 0.0) return 0.0;
  return params.A_f * qx * bump_profile(norm2(p) / (params.R_p * params.R_p), 4);
}

double phi0_eval(const Vec3& x, const DataParams& params) { return params.phi0_bump().value(x); }

double phi1_eval(const Vec3& x, const DataParams& params) { return params.phi1_bump().value(x); }

Ensemble sample_ensemble(const DataParams& params, int nx_per_axis, int np_per_axis,
                         const GridSpec& grid) {
  if (nx_per_axis < 4 || np_per_axis < 4)
    throw ConfigError("sampling counts must be >= 4 per axis");
  Ensemble ensemble;
  if (params.A_f == 0.0) return ensemble;

  const double hx = 2.0 * params.R_x / nx_per_axis;
  const double hp = 2.0 * params.R_p / np_per_axis;
  const double vol = (hx * hx * hx) * (hp * hp * hp);

  std::vector<Vec3> momenta;
  for (int a = 0; a < np_per_axis; ++a)
    for (int b = 0; b < np_per_axis; ++b)
      for (int c = 0; c < np_per_axis; ++c) {
        const Vec3 p{-params.R_p + (a + 0.5) * hp, -params.R_p + (b + 0.5) * hp,
                     -params.R_p + (c + 0.5) * hp};
        if (norm2(p) < params.R_p * params.R_p) momenta.push_back(p);
      }

  const RadialBump phi0 = params.phi0_bump();
  for (int i = 0; i < nx_per_axis; ++i)
    for (int j = 0; j < nx_per_axis; ++j)
      for (int k = 0; k < nx_per_axis; ++k) {
        const Vec3 x = params.offset_f + Vec3{-params.R_x + (i + 0.5) * hx,
                                              -params.R_x + (j + 0.5) * hx,
                                              -params.R_x + (k + 0.5) * hx};
        if (norm2(x - params.offset_f) >= params.R_x * params.R_x) continue;
        if (!is_interior(grid, locate(grid, x)))
          throw DomainError("causal domain violated: initial sample outside grid interior");
        const double phi_here = phi0.value(x);
        for (const Vec3& p : momenta) {
          const double f = f0_eval(x, p, params);
          if (f <= 0.0) continue;
          PhaseParticle particle;
          particle.x = x;
          particle.p = p;
          particle.f_birth = f;
          particle.phi_birth = phi_here;
          particle.vol_birth = vol;
          particle.x_birth = x;
          particle.p_birth = p;
          ensemble.particles.push_back(particle);
        }
      }
  return ensemble;
}

ScalarFieldState initial_field(const GridSpec& grid, const DataParams& params) {
  ScalarFieldState field(grid);
  const RadialBump phi0 = params.phi0_bump();
  const RadialBump phi1 = params.phi1_bump();
  const int n = grid.nodes_per_axis();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const bool boundary = i == 0 || j == 0 || k == 0 || i == n - 1 || j == n - 1 || k == n - 1;
        if (boundary) continue;
        const Vec3 x = grid.node_position(i, j, k);
        field.phi(i, j, k) = phi0.value(x);
        field.dphi_dt(i, j, k) = phi1.value(x);
      }
  return field;
}

}  // namespace nordvlas
