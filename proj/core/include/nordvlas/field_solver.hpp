#pragma once

#include <span>
#include <vector>

#include "nordvlas/initial_data.hpp"
#include "nordvlas/lattice.hpp"
#include "nordvlas/quadrature.hpp"
#include "nordvlas/state.hpp"

namespace nordvlas {

/// Source mu = int f dp / sqrt(1 + |p|^2) on the field lattice.
struct SourceLattice {
  ScalarLattice mu;
};

/// Field values seen by a particle.
struct FieldSample {
  double phi = 0.0;
  double dphi_dt = 0.0;
  Vec3 grad{};
};

/// Trilinear interpolation of phi, d_t phi and the node-centered central
/// difference gradient. Node data is interleaved so one weight set serves all
/// five quantities.
class LatticeSampler {
 public:
  LatticeSampler(const GridSpec& grid, const ScalarLattice& phi, const ScalarLattice& dphi_dt);
  explicit LatticeSampler(const ScalarFieldState& field)
      : LatticeSampler(field.grid, field.phi, field.dphi_dt) {}

  const GridSpec& grid() const { return grid_; }

  /// Throws DomainError when x is not at least one cell inside the boundary.
  FieldSample at(const Vec3& x) const;
  /// The field is frozen in time; t is ignored.
  FieldSample operator()(double /*t*/, const Vec3& x) const { return at(x); }

 private:
  GridSpec grid_;
  int n_ = 0;
  std::vector<double> nodes_;  // 5 values per node
};

FieldSample sample_field(const ScalarFieldState& field, const Vec3& x);

/// Trilinear interpolation of phi alone at every particle position.
std::vector<double> sample_phi_at_particles(const Ensemble& ensemble, const GridSpec& grid,
                                            const ScalarLattice& phi, int threads = 1);

/// Cloud-in-cell deposit of f V / sqrt(1 + |p|^2) divided by dx^3.
/// particle_phi[i] is phi at particle i. Throws DomainError("causal domain violated").
SourceLattice deposit_mu(const Ensemble& ensemble, std::span<const double> particle_phi,
                         const GridSpec& grid, int threads = 1);
SourceLattice deposit_mu(const Ensemble& ensemble, const ScalarFieldState& field, int threads = 1);

/// 7-point discrete Laplacian at interior nodes (boundary entries are 0).
ScalarLattice laplacian(const GridSpec& grid, const ScalarLattice& phi, int threads = 1);

/// One leapfrog step of d_t^2 phi - Laplacian phi = -mu with boundary nodes held at 0.
///
/// The returned state is level n+1 with phi_prev = phi^n. Its dphi_dt is a
/// second-order Taylor predictor; the centered value becomes available one
/// step later via complete_time_derivative. Throws BlowUpError on non-finite values.
ScalarFieldState step_wave(const ScalarFieldState& field, const SourceLattice& source, double dt,
                           int threads = 1);

/// Replaces field.dphi_dt (level n) by (phi^{n+1} - phi^{n-1}) / (2 dt) once
/// phi^{n+1} is known. Level 0 keeps the exact initial data phi1.
void complete_time_derivative(ScalarFieldState& field, const ScalarFieldState& next, double dt);

/// Kirchhoff solution of the homogeneous wave equation with data (phi0, phi1):
/// phi_hom(t, x) = M_t[phi0] + t M_t[omega . grad phi0] + t M_t[phi1],
/// with M_t the mean over |y - x| = t evaluated by `rule`.
double eval_phi_hom(const DataParams& params, double t, const Vec3& x, const SphereRule& rule);

/// d_t phi_hom = M_t[phi1] + t M_t[omega . grad phi1] + t M_t[Laplacian phi0].
double eval_dtphi_hom(const DataParams& params, double t, const Vec3& x, const SphereRule& rule);

}  // namespace nordvlas
