#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nordvlas/vec3.hpp"

namespace nordvlas {

// Pointwise algebraic identities behind the rewriting of the d_t phi
// representation. Every function returns left side minus right side and
// throws std::invalid_argument unless |omega| = 1.

/// (w + v) . v - [(1 + w . v) - (1 + |p|^2)^{-1}],  v = p / sqrt(1 + |p|^2).
double kernel_identity_1(const Vec3& omega, const Vec3& p);

/// |w + v|^2 - [2 (1 + w . v) - (1 + |p|^2)^{-1}].
double kernel_identity_2(const Vec3& omega, const Vec3& p);

struct GradDecomposition {
  Vec3 parallel{};    // (w . g) w
  Vec3 transverse{};  // -w x (w x g)
  Vec3 residual{};    // g - parallel - transverse
};
GradDecomposition grad_decomposition(const Vec3& omega, const Vec3& g);

struct SphiResiduals {
  /// S phi - [d_t phi (1 + w.v) - (d_t phi - w.g)(w.v) + (w x g).(w x v)]
  double transport = 0.0;
  /// (w + v) . g - [(w.g)(1 + w.v) + (w x g).(w x v)]
  double flux = 0.0;
};
SphiResiduals sphi_decomposition(double dphi_dt, const Vec3& g, const Vec3& omega, const Vec3& p);

/// Integrand-level comparison of the two forms of the cone representation at
/// one momentum p with density value f_val. `first` compares term I with
/// Z_1 + Z_2 (weight dy/|x-y|^2); `second` compares II + III with
/// Z_0 + Z_3 + Z_4 + Z_5 (weight dy/|x-y|). The scales are sums of absolute
/// term values, for relative error checks.
struct ZResiduals {
  double first = 0.0;
  double second = 0.0;
  double first_scale = 0.0;
  double second_scale = 0.0;
};
ZResiduals z_decomposition_residual(const Vec3& omega, const Vec3& p, double dphi_dt, const Vec3& g,
                                    double f_val);

/// B_ab(R) = int_{|p|<=R} (sqrt(1+|p|^2) + w . p)^{-a} (1+|p|^2)^{-b} dp by
/// adaptive quadrature in polar coordinates about omega (relative tolerance
/// rel_tol). Throws QuadratureError when the tolerance is not reached.
double b_ab(double R, double a, double b, const Vec3& omega, double rel_tol = 1e-10);

enum class BabRegime { log_a1, a_below_1, a_above_1 };

struct BabLadder {
  BabRegime regime{};
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> envelopes;
  std::vector<double> ratios;
  /// No ratio exceeds twice the first rung.
  bool bounded = false;
  /// Ratios do not increase after the first rung (reported, not every regime has it).
  bool nonincreasing_after_first = false;
};

/// Envelope of the growth bound for the regime of (a, b):
///   a = 1, b < 1:           R^{2-2b} log R
///   a < 1, b < (3 - a)/2:   R^{3-2b-a}
///   a > 1, b < (1 + a)/2:   R^{1+a-2b}
/// Throws ConfigError("lemma inapplicable") outside all three.
BabRegime bab_regime(double a, double b);
double bab_envelope(double a, double b, double R);
BabLadder b_ab_bound_check(double a, double b, std::span<const double> radii);

struct AngularKernel {
  double closed_form = 0.0;  // (2 pi / v) ln((1 + v)/(1 - v)), 4 pi at v = 0
  double quadrature = 0.0;   // 2 pi int_{-1}^{1} du / (1 - v u)
  double residual = 0.0;
  double bound = 0.0;        // 4 pi (1 - ln(1 - v))
  bool bound_holds = false;
};
/// Throws std::invalid_argument unless 0 <= v < 1.
AngularKernel angular_kernel(double v);

/// Worst relative residual of each identity family over seeded random inputs.
struct IdentitySweep {
  std::string name;
  int trials = 0;
  double max_rel_residual = 0.0;
};
std::vector<IdentitySweep> run_identity_sweeps(int trials, std::uint64_t seed);

}  // namespace nordvlas
