#include "nordvlas/identities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "nordvlas/diagnostics.hpp"
#include "nordvlas/errors.hpp"
#include "nordvlas/quadrature.hpp"

namespace nordvlas {

namespace {

constexpr double kPi = std::numbers::pi;

void require_unit(const Vec3& omega) {
  if (std::abs(norm(omega) - 1.0) > 1e-12) throw std::invalid_argument("omega must be a unit vector");
}

}  // namespace

double kernel_identity_1(const Vec3& omega, const Vec3& p) {
  require_unit(omega);
  const Vec3 v = velocity(p);
  return dot(omega + v, v) - ((1.0 + dot(omega, v)) - 1.0 / (1.0 + norm2(p)));
}

double kernel_identity_2(const Vec3& omega, const Vec3& p) {
  require_unit(omega);
  const Vec3 v = velocity(p);
  return norm2(omega + v) - (2.0 * (1.0 + dot(omega, v)) - 1.0 / (1.0 + norm2(p)));
}

GradDecomposition grad_decomposition(const Vec3& omega, const Vec3& g) {
  require_unit(omega);
  GradDecomposition d;
  d.parallel = dot(omega, g) * omega;
  d.transverse = -1.0 * cross(omega, cross(omega, g));
  d.residual = g - d.parallel - d.transverse;
  return d;
}

SphiResiduals sphi_decomposition(double dphi_dt, const Vec3& g, const Vec3& omega, const Vec3& p) {
  require_unit(omega);
  const Vec3 v = velocity(p);
  const double wv = dot(omega, v);
  const double wg = dot(omega, g);
  const double cr = dot(cross(omega, g), cross(omega, v));
  SphiResiduals r;
  const double sphi = dphi_dt + dot(v, g);
  r.transport = sphi - (dphi_dt * (1.0 + wv) - (dphi_dt - wg) * wv + cr);
  r.flux = dot(omega + v, g) - (wg * (1.0 + wv) + cr);
  return r;
}

ZResiduals z_decomposition_residual(const Vec3& omega, const Vec3& p, double dphi_dt, const Vec3& g,
                                    double f_val) {
  require_unit(omega);
  const Vec3 v = velocity(p);
  const double gam = lorentz(p);
  const double gam3 = gam * gam * gam;
  const double c = 1.0 + dot(omega, v);
  const double c2 = c * c;
  const double sphi = dphi_dt + dot(v, g);
  const double n = dphi_dt - dot(omega, g);
  const double cr = dot(cross(omega, g), cross(omega, v));

  const double term_i = dot(omega + v, v) / c2 * f_val / gam;
  const double term_ii = -norm2(omega + v) / c2 * sphi * f_val / gam;
  const double term_iii = -dot(omega + v, g) / c2 * f_val / gam3;

  const double z0 = -2.0 * dphi_dt * f_val / gam;
  const double z1 = f_val / (gam * c);
  const double z2 = -f_val / (gam3 * c2);
  const double z3 = 2.0 * n * dot(omega, v) * f_val / (gam * c);
  const double z4 = n * f_val / (gam3 * c2);
  const double z5 = -2.0 * cr * f_val / (gam * c);

  ZResiduals r;
  r.first = term_i - (z1 + z2);
  r.first_scale = std::abs(term_i) + std::abs(z1) + std::abs(z2);
  r.second = (term_ii + term_iii) - (z0 + z3 + z4 + z5);
  r.second_scale = std::abs(term_ii) + std::abs(term_iii) + std::abs(z0) + std::abs(z3) +
                   std::abs(z4) + std::abs(z5);
  return r;
}

double b_ab(double R, double a, double b, const Vec3& omega, double rel_tol) {
  require_unit(omega);
  if (!(R > 0.0) || a < 0.0 || b < 0.0) throw ConfigError("b_ab needs R > 0 and a, b >= 0");
  const double inner_tol = std::max(rel_tol * 1e-2, 1e-14);

  // int_{-1}^{1} (gamma + r u)^{-a} du with w = gamma + r u and w = e^z.
  auto inner = [&](double r) {
    const double gam = std::sqrt(1.0 + r * r);
    if (a == 0.0) return 2.0;
    if (r < 1e-8) return 2.0 * std::pow(gam, -a);
    const double z_hi = std::log(gam + r);
    const double z_lo = -z_hi;  // gamma - r = 1 / (gamma + r)
    auto g = [&](double z) { return std::exp((1.0 - a) * z); };
    return integrate_adaptive(g, z_lo, z_hi, inner_tol).value / r;
  };
  auto radial = [&](double r) { return r * r * std::pow(1.0 + r * r, -b) * inner(r); };

  double total = integrate_adaptive(radial, 0.0, std::min(R, 1.0), rel_tol * 1e-1).value;
  if (R > 1.0) {
    auto log_radial = [&](double s) {
      const double r = std::exp(s);
      return radial(r) * r;
    };
    total += integrate_adaptive(log_radial, 0.0, std::log(R), rel_tol * 1e-1).value;
  }
  return 2.0 * kPi * total;
}

BabRegime bab_regime(double a, double b) {
  if (a == 1.0 && b < 1.0) return BabRegime::log_a1;
  if (a < 1.0 && b < 0.5 * (3.0 - a)) return BabRegime::a_below_1;
  if (a > 1.0 && b < 0.5 * (1.0 + a)) return BabRegime::a_above_1;
  throw ConfigError("lemma inapplicable for a = " + std::to_string(a) + ", b = " + std::to_string(b));
}

double bab_envelope(double a, double b, double R) {
  switch (bab_regime(a, b)) {
    case BabRegime::log_a1:
      return std::pow(R, 2.0 - 2.0 * b) * std::log(R);
    case BabRegime::a_below_1:
      return std::pow(R, 3.0 - 2.0 * b - a);
    case BabRegime::a_above_1:
      return std::pow(R, 1.0 + a - 2.0 * b);
  }
  return 0.0;
}

BabLadder b_ab_bound_check(double a, double b, std::span<const double> radii) {
  BabLadder ladder;
  ladder.regime = bab_regime(a, b);
  if (radii.empty()) throw ConfigError("empty radius ladder");
  for (double R : radii)
    if (!(R > 1.0)) throw ConfigError("ladder radii must exceed 1");
  const Vec3 omega{0.0, 0.0, 1.0};
  for (double R : radii) {
    const double value = b_ab(R, a, b, omega);
    const double env = bab_envelope(a, b, R);
    ladder.radii.push_back(R);
    ladder.values.push_back(value);
    ladder.envelopes.push_back(env);
    ladder.ratios.push_back(value / env);
  }
  const double first = ladder.ratios.front();
  ladder.bounded = std::all_of(ladder.ratios.begin(), ladder.ratios.end(),
                               [&](double q) { return std::isfinite(q) && q <= 2.0 * first; });
  ladder.nonincreasing_after_first = true;
  for (std::size_t i = 2; i < ladder.ratios.size(); ++i)
    if (ladder.ratios[i] > ladder.ratios[i - 1] * (1.0 + 1e-9)) ladder.nonincreasing_after_first = false;
  return ladder;
}

AngularKernel angular_kernel(double v) {
  if (!(v >= 0.0 && v < 1.0)) throw std::invalid_argument("angular kernel needs 0 <= v < 1");
  AngularKernel k;
  k.closed_form = v < 1e-8 ? 4.0 * kPi : 4.0 * kPi * std::atanh(v) / v;
  auto integrand = [v](double u) { return 1.0 / (1.0 - v * u); };
  k.quadrature = 2.0 * kPi * integrate_adaptive(integrand, -1.0, 1.0, 1e-12).value;
  k.residual = k.closed_form - k.quadrature;
  k.bound = 4.0 * kPi * (1.0 - std::log1p(-v));
  k.bound_holds = k.closed_form <= k.bound;
  return k;
}

std::vector<IdentitySweep> run_identity_sweeps(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto direction = [&] {
    Vec3 d{normal(rng), normal(rng), normal(rng)};
    return (1.0 / norm(d)) * d;
  };
  auto momentum = [&] {
    // log-uniform magnitude in [1e-3, 1e2]
    const double mag = std::pow(10.0, -3.0 + 5.0 * unit(rng));
    return mag * direction();
  };
  auto vector = [&](double scale) { return Vec3{scale * normal(rng), scale * normal(rng), scale * normal(rng)}; };

  std::vector<IdentitySweep> out = {{"kernel_identity_1", trials, 0.0}, {"kernel_identity_2", trials, 0.0},
                                    {"grad_decomposition", trials, 0.0}, {"sphi_decomposition", trials, 0.0},
                                    {"z_decomposition", trials, 0.0},    {"cone_integrand", trials, 0.0},
                                    {"angular_kernel", trials, 0.0}};
  auto note = [&](std::size_t i, double rel) { out[i].max_rel_residual = std::max(out[i].max_rel_residual, rel); };

  for (int t = 0; t < trials; ++t) {
    const Vec3 omega = direction();
    const Vec3 p = momentum();
    const Vec3 v = velocity(p);
    const double inv_g2 = 1.0 / (1.0 + norm2(p));
    const double dphi = 3.0 * normal(rng);
    const Vec3 g = vector(3.0);
    const double f_val = unit(rng);

    note(0, std::abs(kernel_identity_1(omega, p)) / (std::abs(dot(omega + v, v)) + 1.0 + std::abs(dot(omega, v)) + inv_g2));
    note(1, std::abs(kernel_identity_2(omega, p)) / (norm2(omega + v) + 2.0 + 2.0 * std::abs(dot(omega, v)) + inv_g2));

    const GradDecomposition gd = grad_decomposition(omega, g);
    note(2, norm(gd.residual) / (norm(g) + norm(gd.parallel) + norm(gd.transverse)));

    const SphiResiduals sr = sphi_decomposition(dphi, g, omega, p);
    const double sscale = std::abs(dphi) * 3.0 + 3.0 * norm(g);
    note(3, std::max(std::abs(sr.transport), std::abs(sr.flux)) / sscale);

    const ZResiduals zr = z_decomposition_residual(omega, p, dphi, g, f_val);
    if (zr.first_scale > 0.0) note(4, std::abs(zr.first) / zr.first_scale);
    if (zr.second_scale > 0.0) note(4, std::abs(zr.second) / zr.second_scale);

    const double ke = lorentz(p) * f_val;
    const Vec3 km = f_val * p;
    const double e = energy_density(ke, dphi, g);
    const Vec3 flux = momentum_density(km, dphi, g);
    const double cscale = std::abs(e) + norm(flux) + ke + norm(km) + dphi * dphi + norm2(g);
    note(5, std::abs(cone_integrand_expansion(e, flux, omega, ke, km, dphi, g)) / cscale);

    const double speed = 0.999 * unit(rng);
    const AngularKernel ak = angular_kernel(speed);
    note(6, std::abs(ak.residual) / ak.closed_form + (ak.bound_holds ? 0.0 : 1.0));
  }
  return out;
}

}  // namespace nordvlas
