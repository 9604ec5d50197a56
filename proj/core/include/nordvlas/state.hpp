#pragma once

#include <cstddef>
#include <vector>

#include "nordvlas/lattice.hpp"
#include "nordvlas/vec3.hpp"

namespace nordvlas {

/// Lattice values of the scalar field at one time level.
///
/// phi_prev holds the previous leapfrog level and is only meaningful once
/// step > 0; at step 0 the wave solver bootstraps from (phi, dphi_dt).
struct ScalarFieldState {
  GridSpec grid;
  ScalarLattice phi;
  ScalarLattice dphi_dt;
  ScalarLattice phi_prev;
  double time = 0.0;
  std::size_t step = 0;

  ScalarFieldState() = default;
  explicit ScalarFieldState(const GridSpec& g)
      : grid(g), phi(g), dphi_dt(g), phi_prev(g) {}

  bool all_finite() const;
};

/// Second-order central difference of phi at an interior node.
/// Throws DomainError("gradient undefined at boundary") on boundary nodes.
Vec3 grad_phi(const ScalarFieldState& field, int i, int j, int k);
Vec3 grad_phi(const GridSpec& grid, const ScalarLattice& phi, int i, int j, int k);

/// One weighted sample of the phase-space density.
///
/// The density itself is never stored: e^{-4 phi} f is constant along
/// characteristics, so f is rebuilt from the birth values on demand.
struct PhaseParticle {
  Vec3 x{};
  Vec3 p{};
  double f_birth = 0.0;
  double phi_birth = 0.0;
  double vol_birth = 0.0;
  Vec3 x_birth{};
  Vec3 p_birth{};
  // Running value of 2 * int_0^s e^{2 phi} d_t phi along the trajectory.
  double char_integral = 0.0;
};

/// f_birth * exp(4 (phi_here - phi_birth)).
double reconstruct_f(const PhaseParticle& particle, double phi_here);

/// Phase-space volume carried by the particle: vol_birth * exp(-3 (phi_here - phi_birth)).
double current_volume(const PhaseParticle& particle, double phi_here);

/// f * V, the particle's share of any moment integral: f_birth * vol_birth * exp(phi_here - phi_birth).
double particle_weight(const PhaseParticle& particle, double phi_here);

struct Ensemble {
  std::vector<PhaseParticle> particles;
  double time = 0.0;

  std::size_t size() const { return particles.size(); }
  bool empty() const { return particles.empty(); }
};

/// One stored time level for past-light-cone evaluation.
struct HistorySlice {
  double time = 0.0;
  ScalarLattice phi;
  ScalarLattice dphi_dt;
  ScalarLattice mu;
  ScalarLattice e;
  VectorLattice pflux;
};

/// Slices stored every stride-th step, uniformly spaced by stride * dt.
class FieldHistory {
 public:
  FieldHistory() = default;
  FieldHistory(const GridSpec& grid, int stride, double dt);

  const GridSpec& grid() const { return grid_; }
  int stride() const { return stride_; }
  double spacing() const { return stride_ * dt_; }
  const std::vector<HistorySlice>& slices() const { return slices_; }
  bool empty() const { return slices_.empty(); }

  /// Appends a slice; its time must equal size() * spacing().
  void push(HistorySlice slice);

  /// True when [0, t] lies within the recorded slices.
  bool covers(double t) const;

  struct Bracket {
    std::size_t k = 0;  // lower slice
    double theta = 0.0;  // weight of slice k + 1
  };
  /// Slice pair enclosing time t for linear interpolation. Throws HistoryError.
  Bracket bracket(double t) const;

 private:
  GridSpec grid_{};
  int stride_ = 1;
  double dt_ = 0.0;
  std::vector<HistorySlice> slices_;
};

/// One time-stamped row of monitored scalars.
struct DiagnosticsRecord {
  double time = 0.0;
  double total_energy = 0.0;
  double kinetic_energy = 0.0;
  double field_energy = 0.0;
  double P_max = 0.0;
  double Ptilde_max = 0.0;
  double phi_min = 0.0;
  double phi_max = 0.0;
  double char_invariant_residual_max = 0.0;
  double energy_drift_rel = 0.0;

  friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

}  // namespace nordvlas
