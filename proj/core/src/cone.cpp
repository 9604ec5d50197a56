#include "nordvlas/cone.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "nordvlas/errors.hpp"
#include "nordvlas/field_solver.hpp"

namespace nordvlas {

namespace {

constexpr double kInvFourPi = 0.25 / std::numbers::pi;

double shell_step(const GridSpec& grid, const ConeOptions& options) {
  return options.shell_thickness > 0.0 ? options.shell_thickness : 0.5 * grid.dx();
}

struct HistoryPoint {
  const FieldHistory* history = nullptr;
  FieldHistory::Bracket bracket;
  CellLocation cell;
  bool two_slices = false;
};

HistoryPoint history_point(const FieldHistory& history, double tau, const Vec3& y) {
  HistoryPoint p;
  p.history = &history;
  p.bracket = history.bracket(tau);
  p.cell = locate(history.grid(), y);
  if (!is_interior(history.grid(), p.cell)) throw DomainError("cone exits grid");
  p.two_slices = p.bracket.theta > 0.0 && p.bracket.k + 1 < history.slices().size();
  return p;
}

template <class T, class Get>
T lerp_history(const HistoryPoint& p, Get&& get) {
  const auto& slices = p.history->slices();
  const T v0 = get(slices[p.bracket.k], p.cell);
  if (!p.two_slices) return v0;
  const T v1 = get(slices[p.bracket.k + 1], p.cell);
  return (1.0 - p.bracket.theta) * v0 + p.bracket.theta * v1;
}

Vec3 interpolated_gradient(const GridSpec& grid, const ScalarLattice& phi, const CellLocation& c) {
  double w[8];
  trilinear_weights(c, w);
  Vec3 g{};
  int m = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d) g += w[m++] * grad_phi(grid, phi, c.i + a, c.j + b, c.k + d);
  return g;
}

/// Particles bucketed by containing cell, with the per-particle factors the
/// moment kernels need.
struct CellIndex {
  int cells = 0;
  std::vector<std::uint32_t> start;
  std::vector<Vec3> x;
  std::vector<Vec3> v;
  std::vector<double> gamma;
  std::vector<double> weight;
};

CellIndex build_cell_index(const Ensemble& ensemble, std::span<const double> particle_phi,
                           const GridSpec& grid) {
  CellIndex index;
  index.cells = grid.cells_per_axis;
  const auto n = static_cast<std::size_t>(index.cells);
  std::vector<std::uint32_t> cell_of(ensemble.size());
  index.start.assign(n * n * n + 1, 0);
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const CellLocation c = locate(grid, ensemble.particles[i].x);
    if (!is_interior(grid, c)) throw DomainError("causal domain violated");
    const std::size_t flat = (static_cast<std::size_t>(c.i) * n + c.j) * n + c.k;
    cell_of[i] = static_cast<std::uint32_t>(flat);
    ++index.start[flat + 1];
  }
  for (std::size_t q = 1; q < index.start.size(); ++q) index.start[q] += index.start[q - 1];
  std::vector<std::uint32_t> cursor(index.start.begin(), index.start.end() - 1);
  index.x.resize(ensemble.size());
  index.v.resize(ensemble.size());
  index.gamma.resize(ensemble.size());
  index.weight.resize(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const PhaseParticle& particle = ensemble.particles[i];
    const std::uint32_t slot = cursor[cell_of[i]]++;
    const double g = lorentz(particle.p);
    index.x[slot] = particle.x;
    index.v[slot] = particle.p / g;
    index.gamma[slot] = g;
    index.weight[slot] = particle_weight(particle, particle_phi[i]);
  }
  return index;
}

void accumulate(RetardedMoments& m, double w, const Vec3& v, double gamma, const Vec3& omega) {
  const double a = dot(omega, v);
  const double d = 1.0 + a;
  const double inv_gd = w / (gamma * d);
  m.inv_d += inv_gd;
  m.inv_d2 += w / (gamma * gamma * gamma * d * d);
  m.a_over_d += a * inv_gd;
  m.cross_over_d += inv_gd * cross(omega, v);
}

double hat(const Vec3& d, double inv_dx) {
  const double ax = 1.0 - std::abs(d.x) * inv_dx;
  const double ay = 1.0 - std::abs(d.y) * inv_dx;
  const double az = 1.0 - std::abs(d.z) * inv_dx;
  if (ax <= 0.0 || ay <= 0.0 || az <= 0.0) return 0.0;
  return ax * ay * az;
}

RetardedMoments gather_indexed(const CellIndex& index, const GridSpec& grid, const Vec3& y,
                               const Vec3& omega) {
  const CellLocation c = locate(grid, y);
  const double inv_dx = 1.0 / grid.dx();
  const double inv_cell = inv_dx * inv_dx * inv_dx;
  const auto n = static_cast<std::size_t>(index.cells);
  RetardedMoments m;
  for (int a = std::max(0, c.i - 1); a <= std::min(index.cells - 1, c.i + 1); ++a)
    for (int b = std::max(0, c.j - 1); b <= std::min(index.cells - 1, c.j + 1); ++b)
      for (int d = std::max(0, c.k - 1); d <= std::min(index.cells - 1, c.k + 1); ++d) {
        const std::size_t flat = (static_cast<std::size_t>(a) * n + b) * n + d;
        for (std::uint32_t s = index.start[flat]; s < index.start[flat + 1]; ++s) {
          const double h = hat(index.x[s] - y, inv_dx);
          if (h == 0.0) continue;
          accumulate(m, index.weight[s] * h * inv_cell, index.v[s], index.gamma[s], omega);
        }
      }
  return m;
}

}  // namespace

ConeQuadrature::ConeQuadrature(double t, const Vec3& vertex, double shell_thickness, int min_points)
    : t_(t), vertex_(vertex) {
  if (t < 0.0) throw ConfigError("cone vertex time must be >= 0");
  if (!(shell_thickness > 0.0)) throw ConfigError("cone shell thickness must be positive");
  if (t == 0.0) return;
  const auto count = static_cast<std::size_t>(std::ceil(t / shell_thickness - 1e-9));
  for (std::size_t j = 0; j < count; ++j) {
    ConeShell shell;
    shell.r_inner = static_cast<double>(j) * shell_thickness;
    shell.r_outer = std::min(t, shell.r_inner + shell_thickness);
    shell.r_mid = 0.5 * (shell.r_inner + shell.r_outer);
    shell.retarded_time = t - shell.r_mid;
    const double a = shell.r_inner;
    const double b = shell.r_outer;
    shell.weight_volume = (b * b * b - a * a * a) / 3.0;
    shell.weight_inv_r = 0.5 * (b * b - a * a);
    shell.weight_inv_r2 = b - a;
    const double area_points =
        4.0 * std::numbers::pi * shell.r_mid * shell.r_mid / (shell_thickness * shell_thickness);
    shell.sphere = SphereRule::fibonacci(std::max(min_points, static_cast<int>(std::ceil(area_points))));
    shells_.push_back(std::move(shell));
  }
}

std::size_t ConeQuadrature::point_count() const {
  std::size_t n = 0;
  for (const auto& s : shells_) n += s.sphere.size();
  return n;
}

NullConeResult null_cone_check(double t, const Vec3& x, const FieldHistory& history,
                               const ConeOptions& options) {
  if (t == 0.0) return {};
  if (!history.covers(t)) throw HistoryError("insufficient history for null-cone check at t=" + std::to_string(t));
  const ConeQuadrature cone(t, x, shell_step(history.grid(), options), options.min_sphere_points);
  CompensatedSum lhs;
  CompensatedSum rhs;
  const HistorySlice& base = history.slices().front();
  for (const ConeShell& shell : cone.shells()) {
    double lhs_shell = 0.0;
    double rhs_shell = 0.0;
    for (std::size_t q = 0; q < shell.sphere.size(); ++q) {
      const Vec3& omega = shell.sphere.directions[q];
      const Vec3 y = x + shell.r_mid * omega;
      const HistoryPoint p = history_point(history, shell.retarded_time, y);
      const double e = lerp_history<double>(
          p, [](const HistorySlice& s, const CellLocation& c) { return interpolate(s.e, c); });
      const Vec3 flux = lerp_history<Vec3>(
          p, [](const HistorySlice& s, const CellLocation& c) { return interpolate(s.pflux, c); });
      lhs_shell += shell.sphere.weights[q] * (e + dot(flux, omega));
      rhs_shell += shell.sphere.weights[q] * interpolate(base.e, p.cell);
    }
    lhs.add(shell.weight_volume * lhs_shell);
    rhs.add(shell.weight_volume * rhs_shell);
  }
  NullConeResult out;
  out.lhs = lhs.value();
  out.rhs_volume = rhs.value();
  const double gap = std::abs(out.lhs - out.rhs_volume);
  if (out.rhs_volume != 0.0)
    out.rel_residual = gap / std::abs(out.rhs_volume);
  else
    out.rel_residual = gap == 0.0 ? 0.0 : 1.0;
  return out;
}

ConeMomentRecorder::ConeMomentRecorder(double t, const Vec3& vertex, const GridSpec& grid,
                                       double slice_spacing, const ConeOptions& options)
    : grid_(grid),
      spacing_(slice_spacing),
      quadrature_(t, vertex, shell_step(grid, options), options.min_sphere_points) {
  if (!(slice_spacing > 0.0)) throw ConfigError("slice spacing must be positive");
  for (const ConeShell& shell : quadrature_.shells()) {
    ShellRecord rec;
    const double s = shell.retarded_time / spacing_;
    rec.k_lo = static_cast<std::size_t>(std::floor(s + 1e-12));
    rec.theta = std::max(0.0, s - static_cast<double>(rec.k_lo));
    rec.need_hi = rec.theta > 1e-12;
    records_.push_back(std::move(rec));
  }
}

bool ConeMomentRecorder::wants(std::size_t slice_index) const {
  for (const ShellRecord& rec : records_)
    if (slice_index == rec.k_lo || (rec.need_hi && slice_index == rec.k_lo + 1)) return true;
  return false;
}

void ConeMomentRecorder::record(std::size_t slice_index, const Ensemble& ensemble,
                                std::span<const double> particle_phi) {
  if (!wants(slice_index)) return;
  const CellIndex index = build_cell_index(ensemble, particle_phi, grid_);
  const auto& shells = quadrature_.shells();
  for (std::size_t j = 0; j < shells.size(); ++j) {
    ShellRecord& rec = records_[j];
    const bool lo = slice_index == rec.k_lo;
    const bool hi = rec.need_hi && slice_index == rec.k_lo + 1;
    if (!lo && !hi) continue;
    std::vector<RetardedMoments> values(shells[j].sphere.size());
    for (std::size_t q = 0; q < values.size(); ++q) {
      const Vec3& omega = shells[j].sphere.directions[q];
      const Vec3 y = vertex() + shells[j].r_mid * omega;
      if (!is_interior(grid_, locate(grid_, y))) throw DomainError("cone exits grid");
      values[q] = gather_indexed(index, grid_, y, omega);
    }
    if (lo) {
      rec.lo = std::move(values);
      rec.have_lo = true;
    } else {
      rec.hi = std::move(values);
      rec.have_hi = true;
    }
  }
}

bool ConeMomentRecorder::complete() const {
  return std::all_of(records_.begin(), records_.end(), [](const ShellRecord& rec) {
    return rec.have_lo && (!rec.need_hi || rec.have_hi);
  });
}

RetardedMoments ConeMomentRecorder::moments(std::size_t shell, std::size_t point) const {
  const ShellRecord& rec = records_.at(shell);
  if (!rec.have_lo || (rec.need_hi && !rec.have_hi))
    throw HistoryError("insufficient history: retarded moments for shell " + std::to_string(shell) +
                       " were not recorded");
  const RetardedMoments& a = rec.lo[point];
  if (!rec.need_hi) return a;
  const RetardedMoments& b = rec.hi[point];
  const double t = rec.theta;
  RetardedMoments m;
  m.inv_d = (1.0 - t) * a.inv_d + t * b.inv_d;
  m.inv_d2 = (1.0 - t) * a.inv_d2 + t * b.inv_d2;
  m.a_over_d = (1.0 - t) * a.a_over_d + t * b.a_over_d;
  m.cross_over_d = (1.0 - t) * a.cross_over_d + t * b.cross_over_d;
  return m;
}

RetardedMoments gather_moments(const Ensemble& ensemble, std::span<const double> particle_phi,
                               const GridSpec& grid, const Vec3& y, const Vec3& omega) {
  const double inv_dx = 1.0 / grid.dx();
  const double inv_cell = inv_dx * inv_dx * inv_dx;
  RetardedMoments m;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const PhaseParticle& particle = ensemble.particles[i];
    const double h = hat(particle.x - y, inv_dx);
    if (h == 0.0) continue;
    const double g = lorentz(particle.p);
    accumulate(m, particle_weight(particle, particle_phi[i]) * h * inv_cell, particle.p / g, g, omega);
  }
  return m;
}

double data_surface_term(const DataParams& params, double t, const Vec3& x, const SphereRule& rule,
                         int momentum_order) {
  if (t == 0.0 || params.A_f == 0.0) return 0.0;
  // f0 factorizes as A_f q(|y - c|^2 / R_x^2) q(|p|^2 / R_p^2) and the momentum
  // profile is isotropic, so the p-integral does not depend on omega.
  const QuadratureRule radial = gauss_legendre(momentum_order, 0.0, params.R_p);
  const QuadratureRule polar = gauss_legendre(momentum_order, -1.0, 1.0);
  double momentum = 0.0;
  for (std::size_t a = 0; a < radial.size(); ++a) {
    const double r = radial.nodes[a];
    const double gamma = std::sqrt(1.0 + r * r);
    const double speed = r / gamma;
    const double q = bump_profile(r * r / (params.R_p * params.R_p), 4);
    double angular = 0.0;
    for (std::size_t b = 0; b < polar.size(); ++b) angular += polar.weights[b] / (1.0 + speed * polar.nodes[b]);
    momentum += radial.weights[a] * r * r * q / gamma * angular;
  }
  momentum *= 2.0 * std::numbers::pi;

  double mean = 0.0;
  double wsum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Vec3 y = x + t * rule.directions[q];
    mean += rule.weights[q] * bump_profile(norm2(y - params.offset_f) / (params.R_x * params.R_x), 4);
    wsum += rule.weights[q];
  }
  mean /= wsum;
  // -(1/(4 pi t)) * (4 pi t^2) * A_f * J * M_t[q_x]
  return -t * params.A_f * momentum * mean;
}

RepresentationResult dtphi_representation(const ConeMomentRecorder& recorder,
                                          const FieldHistory& history, const DataParams& params,
                                          const RepresentationOptions& options) {
  const double t = recorder.vertex_time();
  const Vec3 x = recorder.vertex();
  if (!history.covers(t)) throw HistoryError("insufficient history for representation at t=" + std::to_string(t));
  const GridSpec& grid = history.grid();

  RepresentationResult out;
  out.time = t;
  out.x = x;
  {
    const HistoryPoint p = history_point(history, t, x);
    out.value_grid = lerp_history<double>(
        p, [](const HistorySlice& s, const CellLocation& c) { return interpolate(s.dphi_dt, c); });
  }
  const SphereRule kirchhoff = SphereRule::product(options.kirchhoff_order);
  out.dtphi_hom = eval_dtphi_hom(params, t, x, kirchhoff);
  out.data_surface = data_surface_term(params, t, x, kirchhoff, options.momentum_order);

  std::array<CompensatedSum, 6> z;
  const auto& shells = recorder.quadrature().shells();
  for (std::size_t j = 0; j < shells.size(); ++j) {
    const ConeShell& shell = shells[j];
    std::array<double, 6> acc{};
    for (std::size_t q = 0; q < shell.sphere.size(); ++q) {
      const Vec3& omega = shell.sphere.directions[q];
      const double wq = shell.sphere.weights[q];
      const Vec3 y = x + shell.r_mid * omega;
      const HistoryPoint p = history_point(history, shell.retarded_time, y);
      const double dt_phi = lerp_history<double>(
          p, [](const HistorySlice& s, const CellLocation& c) { return interpolate(s.dphi_dt, c); });
      const double mu = lerp_history<double>(
          p, [](const HistorySlice& s, const CellLocation& c) { return interpolate(s.mu, c); });
      const Vec3 grad = lerp_history<Vec3>(p, [&](const HistorySlice& s, const CellLocation& c) {
        return interpolated_gradient(grid, s.phi, c);
      });
      const RetardedMoments m = recorder.moments(j, q);
      const double null_derivative = dt_phi - dot(omega, grad);
      acc[0] += wq * (-2.0 * dt_phi * mu);
      acc[1] += wq * m.inv_d;
      acc[2] += wq * (-m.inv_d2);
      acc[3] += wq * (2.0 * null_derivative * m.a_over_d);
      acc[4] += wq * (null_derivative * m.inv_d2);
      acc[5] += wq * (-2.0 * dot(cross(omega, grad), m.cross_over_d));
    }
    z[0].add(shell.weight_inv_r * acc[0]);
    z[1].add(shell.weight_inv_r2 * acc[1]);
    z[2].add(shell.weight_inv_r2 * acc[2]);
    for (int i = 3; i < 6; ++i) z[static_cast<std::size_t>(i)].add(shell.weight_inv_r * acc[static_cast<std::size_t>(i)]);
  }
  out.value_repr = out.dtphi_D();
  for (std::size_t i = 0; i < 6; ++i) {
    out.Z[i] = kInvFourPi * z[i].value();
    out.value_repr += out.Z[i];
  }
  out.rel_error = std::abs(out.value_repr - out.value_grid) / std::max(std::abs(out.value_grid), 0.1);
  return out;
}

}  // namespace nordvlas
