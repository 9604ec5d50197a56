#pragma once

#include <span>

#include "nordvlas/field_solver.hpp"
#include "nordvlas/lattice.hpp"
#include "nordvlas/state.hpp"

namespace nordvlas {

/// Energy density e and momentum density pflux on the field lattice.
/// e_kinetic keeps the particle part of e separately.
struct EnergyLattices {
  ScalarLattice e;
  ScalarLattice e_kinetic;
  VectorLattice pflux;
};

/// e = int sqrt(1+|p|^2) f dp + (d_t phi)^2 / 2 + |grad phi|^2 / 2.
inline double energy_density(double kinetic, double dphi_dt, const Vec3& grad) {
  return kinetic + 0.5 * dphi_dt * dphi_dt + 0.5 * norm2(grad);
}

/// pflux = int p f dp - d_t phi grad phi.
inline Vec3 momentum_density(const Vec3& kinetic, double dphi_dt, const Vec3& grad) {
  return kinetic - dphi_dt * grad;
}

/// Kinetic parts are cloud-in-cell deposits of f V sqrt(1+|p|^2) and f V p;
/// field parts use node values and central-difference gradients.
EnergyLattices energy_lattices(const Ensemble& ensemble, std::span<const double> particle_phi,
                               const ScalarFieldState& field, int threads = 1);

struct EnergyTotals {
  double total = 0.0;
  double kinetic = 0.0;
  double field = 0.0;
};

/// Node sums times dx^3; total = kinetic + field.
EnergyTotals total_energy(const EnergyLattices& energy, const GridSpec& grid);

struct SupportSuprema {
  double P_max = 0.0;       // sup e^{phi} sqrt(1+|p|^2) over the support
  double Ptilde_max = 0.0;  // sup |p| over the support
};

/// Instantaneous suprema over particles with positive density. Empty -> (0, 0).
SupportSuprema support_suprema(const Ensemble& ensemble, std::span<const double> particle_phi);

/// Running suprema over all snapshots seen so far, plus the extreme values of
/// e^{phi} and e^{-phi} at occupied positions needed for the equivalence bounds
///   P <= max e^{phi} sqrt(1 + Ptilde^2),   Ptilde <= max e^{-phi} P.
class SupportTracker {
 public:
  SupportSuprema update(const Ensemble& ensemble, std::span<const double> particle_phi);

  const SupportSuprema& running() const { return running_; }
  double max_exp_phi() const { return max_exp_phi_; }
  double max_exp_neg_phi() const { return max_exp_neg_phi_; }
  /// Number of updates at which either bound failed.
  int bound_violations() const { return violations_; }
  /// Number of updates at which a running supremum decreased (always 0).
  int monotonicity_violations() const { return monotonicity_violations_; }

 private:
  SupportSuprema running_{};
  double max_exp_phi_ = 0.0;
  double max_exp_neg_phi_ = 0.0;
  int violations_ = 0;
  int monotonicity_violations_ = 0;
};

/// Discrete L2 norms of d_t phi and |grad phi| over interior nodes.
struct FieldNorms {
  double dphi_dt_l2 = 0.0;
  double grad_phi_l2 = 0.0;
};
FieldNorms field_norms(const ScalarFieldState& field);

/// Largest nodewise excess of phi over phi_hom + tolerance (<= 0 when phi <= phi_hom + tol).
double max_excess_over(const ScalarLattice& phi, const ScalarLattice& phi_hom, double tolerance);

/// Residual of e + pflux . omega against
///   int (sqrt(1+|p|^2) + omega . p) f dp + |omega x grad phi|^2 / 2 + (d_t phi - omega . grad phi)^2 / 2,
/// where kinetic_energy = int sqrt(1+|p|^2) f dp and kinetic_momentum = int p f dp.
/// Throws std::invalid_argument unless |omega| = 1.
double cone_integrand_expansion(double e, const Vec3& pflux, const Vec3& omega,
                                double kinetic_energy, const Vec3& kinetic_momentum,
                                double dphi_dt, const Vec3& grad);

/// max over particles of char_invariant_residual.
double max_char_invariant_residual(const Ensemble& ensemble, std::span<const double> particle_phi);

}  // namespace nordvlas
