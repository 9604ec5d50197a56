#pragma once

#include <cmath>

#include "nordvlas/errors.hpp"
#include "nordvlas/field_solver.hpp"
#include "nordvlas/parallel.hpp"
#include "nordvlas/state.hpp"
#include "nordvlas/vec3.hpp"

namespace nordvlas {

struct PhaseDerivative {
  Vec3 dx{};
  Vec3 dp{};
};

/// Characteristic system: dx/ds = p_hat, dp/ds = -(S phi) p - grad phi / sqrt(1 + |p|^2)
/// with S phi = d_t phi + p_hat . grad phi.
inline PhaseDerivative rhs(const Vec3& p, const FieldSample& field) {
  const double gamma = lorentz(p);
  const Vec3 v = p / gamma;
  const double s_phi = field.dphi_dt + dot(v, field.grad);
  return {v, -s_phi * p - field.grad / gamma};
}

/// Integrand of the along-characteristic energy identity,
/// d/ds [e^{2 phi} (1 + |p|^2)] = 2 e^{2 phi} d_t phi.
inline double char_energy_rate(const FieldSample& field) {
  return 2.0 * std::exp(2.0 * field.phi) * field.dphi_dt;
}

/// e^{2 phi} (1 + |p|^2).
inline double char_energy(double phi, const Vec3& p) {
  return std::exp(2.0 * phi) * (1.0 + norm2(p));
}

/// Classical RK4 over [t, t + dt] for one particle. The running integral of
/// char_energy_rate is advanced as a seventh component with the same stages.
/// `sampler(t, x)` returns a FieldSample and throws DomainError outside its domain.
template <class Sampler>
void push_particle(PhaseParticle& particle, const Sampler& sampler, double t, double dt) {
  const Vec3 x0 = particle.x;
  const Vec3 p0 = particle.p;
  const double h = 0.5 * dt;

  const FieldSample s1 = sampler(t, x0);
  const PhaseDerivative k1 = rhs(p0, s1);
  const FieldSample s2 = sampler(t + h, x0 + h * k1.dx);
  const PhaseDerivative k2 = rhs(p0 + h * k1.dp, s2);
  const FieldSample s3 = sampler(t + h, x0 + h * k2.dx);
  const PhaseDerivative k3 = rhs(p0 + h * k2.dp, s3);
  const FieldSample s4 = sampler(t + dt, x0 + dt * k3.dx);
  const PhaseDerivative k4 = rhs(p0 + dt * k3.dp, s4);

  const double sixth = dt / 6.0;
  particle.x = x0 + sixth * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  particle.p = p0 + sixth * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
  particle.char_integral += sixth * (char_energy_rate(s1) + 2.0 * char_energy_rate(s2) +
                                     2.0 * char_energy_rate(s3) + char_energy_rate(s4));
}

/// Advances every particle by dt. Particles are independent; no reductions.
template <class Sampler>
void push_step(Ensemble& ensemble, const Sampler& sampler, double dt, int threads = 1) {
  if (!(dt > 0.0)) throw ConfigError("push_step needs dt > 0");
  const double t = ensemble.time;
  parallel_for(ensemble.size(), threads, [&](std::size_t begin, std::size_t end, int) {
    for (std::size_t i = begin; i < end; ++i) push_particle(ensemble.particles[i], sampler, t, dt);
  });
  ensemble.time = t + dt;
}

/// Relative mismatch of the integrated identity
/// e^{2 phi}(1+|p|^2) = e^{2 phi_birth}(1+|p_birth|^2) + 2 int e^{2 phi} d_t phi ds.
inline double char_invariant_residual(const PhaseParticle& particle, double phi_here) {
  const double lhs = char_energy(phi_here, particle.p);
  const double rhs_value = char_energy(particle.phi_birth, particle.p_birth) + particle.char_integral;
  return std::abs(lhs - rhs_value) / lhs;
}

}  // namespace nordvlas
