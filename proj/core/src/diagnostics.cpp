#include "nordvlas/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nordvlas/errors.hpp"
#include "nordvlas/parallel.hpp"
#include "nordvlas/pusher.hpp"
#include "nordvlas/quadrature.hpp"

namespace nordvlas {

namespace {

void require_unit(const Vec3& omega) {
  if (std::abs(norm(omega) - 1.0) > 1e-12) throw std::invalid_argument("omega must be a unit vector");
}

}  // namespace

EnergyLattices energy_lattices(const Ensemble& ensemble, std::span<const double> particle_phi,
                               const ScalarFieldState& field, int threads) {
  const GridSpec& grid = field.grid;
  const int workers = effective_workers(ensemble.size(), threads);
  std::vector<ScalarLattice> kin(static_cast<std::size_t>(workers), ScalarLattice(grid));
  std::vector<VectorLattice> mom(static_cast<std::size_t>(workers), VectorLattice(grid));
  parallel_for(ensemble.size(), threads, [&](std::size_t begin, std::size_t end, int worker) {
    ScalarLattice& ke = kin[static_cast<std::size_t>(worker)];
    VectorLattice& pm = mom[static_cast<std::size_t>(worker)];
    for (std::size_t i = begin; i < end; ++i) {
      const PhaseParticle& particle = ensemble.particles[i];
      const CellLocation c = locate(grid, particle.x);
      if (!is_interior(grid, c)) throw DomainError("causal domain violated");
      const double weight = particle_weight(particle, particle_phi[i]);
      const double we = weight * lorentz(particle.p);
      const Vec3 wp = weight * particle.p;
      double w[8];
      trilinear_weights(c, w);
      int m = 0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int d = 0; d < 2; ++d, ++m) {
            ke(c.i + a, c.j + b, c.k + d) += we * w[m];
            pm(c.i + a, c.j + b, c.k + d) += w[m] * wp;
          }
    }
  });

  EnergyLattices out;
  out.e_kinetic = std::move(kin.front());
  out.pflux = std::move(mom.front());
  for (std::size_t w = 1; w < kin.size(); ++w)
    for (std::size_t q = 0; q < out.e_kinetic.size(); ++q) {
      out.e_kinetic[q] += kin[w][q];
      out.pflux[q] += mom[w][q];
    }
  const double inv_cell = 1.0 / std::pow(grid.dx(), 3);
  out.e = ScalarLattice(grid);
  const int n = grid.nodes_per_axis();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::size_t q = out.e.index(i, j, k);
        out.e_kinetic[q] *= inv_cell;
        out.pflux[q] *= inv_cell;
        const bool boundary = i == 0 || j == 0 || k == 0 || i == n - 1 || j == n - 1 || k == n - 1;
        const Vec3 g = boundary ? Vec3{} : grad_phi(field, i, j, k);
        const double dt_phi = field.dphi_dt[q];
        out.e[q] = energy_density(out.e_kinetic[q], dt_phi, g);
        out.pflux[q] = momentum_density(out.pflux[q], dt_phi, g);
      }
  return out;
}

EnergyTotals total_energy(const EnergyLattices& energy, const GridSpec& grid) {
  CompensatedSum kinetic;
  CompensatedSum field;
  for (std::size_t q = 0; q < energy.e.size(); ++q) {
    kinetic.add(energy.e_kinetic[q]);
    field.add(energy.e[q] - energy.e_kinetic[q]);
  }
  const double cell = std::pow(grid.dx(), 3);
  EnergyTotals totals;
  totals.kinetic = kinetic.value() * cell;
  totals.field = field.value() * cell;
  totals.total = totals.kinetic + totals.field;
  return totals;
}

SupportSuprema support_suprema(const Ensemble& ensemble, std::span<const double> particle_phi) {
  SupportSuprema s;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const PhaseParticle& particle = ensemble.particles[i];
    if (!(reconstruct_f(particle, particle_phi[i]) > 0.0)) continue;
    s.P_max = std::max(s.P_max, std::exp(particle_phi[i]) * lorentz(particle.p));
    s.Ptilde_max = std::max(s.Ptilde_max, norm(particle.p));
  }
  return s;
}

SupportSuprema SupportTracker::update(const Ensemble& ensemble, std::span<const double> particle_phi) {
  const SupportSuprema now = support_suprema(ensemble, particle_phi);
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (!(reconstruct_f(ensemble.particles[i], particle_phi[i]) > 0.0)) continue;
    max_exp_phi_ = std::max(max_exp_phi_, std::exp(particle_phi[i]));
    max_exp_neg_phi_ = std::max(max_exp_neg_phi_, std::exp(-particle_phi[i]));
  }
  const SupportSuprema before = running_;
  running_.P_max = std::max(running_.P_max, now.P_max);
  running_.Ptilde_max = std::max(running_.Ptilde_max, now.Ptilde_max);
  if (running_.P_max < before.P_max || running_.Ptilde_max < before.Ptilde_max)
    ++monotonicity_violations_;
  const double slack = 1.0 + 1e-12;
  const bool upper = running_.P_max <=
                     max_exp_phi_ * std::sqrt(1.0 + running_.Ptilde_max * running_.Ptilde_max) * slack;
  const bool lower = running_.Ptilde_max <= max_exp_neg_phi_ * running_.P_max * slack;
  if (!upper || !lower) ++violations_;
  return running_;
}

FieldNorms field_norms(const ScalarFieldState& field) {
  const GridSpec& grid = field.grid;
  const int n = grid.nodes_per_axis();
  CompensatedSum dt2;
  CompensatedSum g2;
  for (int i = 1; i < n - 1; ++i)
    for (int j = 1; j < n - 1; ++j)
      for (int k = 1; k < n - 1; ++k) {
        const double v = field.dphi_dt(i, j, k);
        dt2.add(v * v);
        g2.add(norm2(grad_phi(field, i, j, k)));
      }
  const double cell = std::pow(grid.dx(), 3);
  return {std::sqrt(dt2.value() * cell), std::sqrt(g2.value() * cell)};
}

double max_excess_over(const ScalarLattice& phi, const ScalarLattice& phi_hom, double tolerance) {
  double worst = -tolerance;
  for (std::size_t q = 0; q < phi.size(); ++q) worst = std::max(worst, phi[q] - phi_hom[q] - tolerance);
  return worst;
}

double cone_integrand_expansion(double e, const Vec3& pflux, const Vec3& omega,
                                double kinetic_energy, const Vec3& kinetic_momentum,
                                double dphi_dt, const Vec3& grad) {
  require_unit(omega);
  const double lhs = e + dot(pflux, omega);
  const double transverse = norm2(cross(omega, grad));
  const double null_derivative = dphi_dt - dot(omega, grad);
  const double rhs = kinetic_energy + dot(omega, kinetic_momentum) + 0.5 * transverse +
                     0.5 * null_derivative * null_derivative;
  return lhs - rhs;
}

double max_char_invariant_residual(const Ensemble& ensemble, std::span<const double> particle_phi) {
  double worst = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i)
    worst = std::max(worst, char_invariant_residual(ensemble.particles[i], particle_phi[i]));
  return worst;
}

}  // namespace nordvlas
