#pragma once

#include <array>
#include <span>
#include <vector>

#include "nordvlas/initial_data.hpp"
#include "nordvlas/quadrature.hpp"
#include "nordvlas/state.hpp"

namespace nordvlas {

struct ConeOptions {
  double shell_thickness = 0.0;  // 0 selects dx / 2
  int min_sphere_points = 32;
};

/// One spherical shell of the past light cone {(t - |x - y|, y) : |x - y| <= t}.
/// The radial weights integrate r^2, r and 1 exactly over [r_inner, r_outer],
/// matching the measures dy, dy/|x-y| and dy/|x-y|^2.
struct ConeShell {
  double r_inner = 0.0;
  double r_outer = 0.0;
  double r_mid = 0.0;
  double retarded_time = 0.0;
  double weight_volume = 0.0;
  double weight_inv_r = 0.0;
  double weight_inv_r2 = 0.0;
  SphereRule sphere;
};

/// Concentric shells of fixed thickness, each sampled at its mid radius with
/// area-uniform directions whose count grows with the shell area.
class ConeQuadrature {
 public:
  ConeQuadrature(double t, const Vec3& vertex, double shell_thickness, int min_points = 32);

  double time() const { return t_; }
  const Vec3& vertex() const { return vertex_; }
  const std::vector<ConeShell>& shells() const { return shells_; }
  std::size_t point_count() const;

 private:
  double t_ = 0.0;
  Vec3 vertex_{};
  std::vector<ConeShell> shells_;
};

struct NullConeResult {
  double lhs = 0.0;
  double rhs_volume = 0.0;
  double rel_residual = 0.0;
};

/// Compares int_{|x-y|<=t} (e + pflux . omega)(t - |x-y|, y) dy with the
/// volume integral int_{|x-y|<=t} e(0, y) dy using history slices (trilinear
/// in space, linear in time). Throws HistoryError or DomainError.
NullConeResult null_cone_check(double t, const Vec3& x, const FieldHistory& history,
                               const ConeOptions& options = {});

/// Momentum integrals of f at one cone point, for the direction omega of that point:
///   inv_d        = int f / (g (1 + w.v)) dp
///   inv_d2       = int f / (g^3 (1 + w.v)^2) dp
///   a_over_d     = int (w.v) f / (g (1 + w.v)) dp
///   cross_over_d = int (w x v) f / (g (1 + w.v)) dp
/// with g = sqrt(1+|p|^2) and v = p / g.
struct RetardedMoments {
  double inv_d = 0.0;
  double inv_d2 = 0.0;
  double a_over_d = 0.0;
  Vec3 cross_over_d{};
};

/// Records particle momentum integrals at the cone points of one vertex while
/// a run is in progress, so no particle snapshots need to be kept.
///
/// Each shell needs the two history slices bracketing its retarded time; at
/// those slices the moments are gathered from the particles with cloud-in-cell
/// weights. Later reads interpolate linearly in time.
class ConeMomentRecorder {
 public:
  ConeMomentRecorder(double t, const Vec3& vertex, const GridSpec& grid, double slice_spacing,
                     const ConeOptions& options = {});

  const ConeQuadrature& quadrature() const { return quadrature_; }
  double vertex_time() const { return quadrature_.time(); }
  const Vec3& vertex() const { return quadrature_.vertex(); }

  bool wants(std::size_t slice_index) const;
  void record(std::size_t slice_index, const Ensemble& ensemble, std::span<const double> particle_phi);
  bool complete() const;

  /// Throws HistoryError when a needed slice was never recorded.
  RetardedMoments moments(std::size_t shell, std::size_t point) const;

 private:
  struct ShellRecord {
    std::size_t k_lo = 0;
    double theta = 0.0;
    bool need_hi = false;
    bool have_lo = false;
    bool have_hi = false;
    std::vector<RetardedMoments> lo;
    std::vector<RetardedMoments> hi;
  };

  GridSpec grid_;
  double spacing_ = 0.0;
  ConeQuadrature quadrature_;
  std::vector<ShellRecord> records_;
};

/// Moments at a single point y for direction omega, gathered directly from the
/// ensemble (no cell index). Used by tests and by the recorder's reference path.
RetardedMoments gather_moments(const Ensemble& ensemble, std::span<const double> particle_phi,
                               const GridSpec& grid, const Vec3& y, const Vec3& omega);

struct RepresentationOptions {
  int kirchhoff_order = 48;  // polar nodes of the product sphere rule
  int momentum_order = 48;   // Gauss nodes per momentum axis
};

struct RepresentationResult {
  double time = 0.0;
  Vec3 x{};
  double value_repr = 0.0;
  double value_grid = 0.0;
  double dtphi_hom = 0.0;
  double data_surface = 0.0;
  std::array<double, 6> Z{};
  double rel_error = 0.0;  // |repr - grid| / max(|grid|, 0.1)

  double dtphi_D() const { return dtphi_hom + data_surface; }
};

/// -(1 / (4 pi t)) int_{|x-y|=t} int f0(y,p) / (1 + omega . p_hat) dp / sqrt(1+|p|^2) dS_y.
double data_surface_term(const DataParams& params, double t, const Vec3& x, const SphereRule& rule,
                         int momentum_order);

/// Rebuilds d_t phi(t, x) from the homogeneous solution, the data surface term
/// and the six cone integrals Z_0..Z_5, and compares it to the grid value.
RepresentationResult dtphi_representation(const ConeMomentRecorder& recorder,
                                          const FieldHistory& history, const DataParams& params,
                                          const RepresentationOptions& options = {});

}  // namespace nordvlas
