#include "nordvlas/field_solver.hpp"

#include <cmath>
#include <string>

#include "nordvlas/errors.hpp"
#include "nordvlas/parallel.hpp"

namespace nordvlas {

namespace {

constexpr int kSampleStride = 5;

bool is_boundary(int i, int j, int k, int last) {
  return i == 0 || j == 0 || k == 0 || i == last || j == last || k == last;
}

}  // namespace

LatticeSampler::LatticeSampler(const GridSpec& grid, const ScalarLattice& phi,
                               const ScalarLattice& dphi_dt)
    : grid_(grid), n_(grid.nodes_per_axis()), nodes_(grid.node_count() * kSampleStride, 0.0) {
  const int last = grid.cells_per_axis;
  const double inv = 0.5 / grid.dx();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        const std::size_t flat = phi.index(i, j, k);
        double* node = &nodes_[flat * kSampleStride];
        node[0] = phi[flat];
        node[1] = dphi_dt[flat];
        if (is_boundary(i, j, k, last)) continue;
        node[2] = (phi(i + 1, j, k) - phi(i - 1, j, k)) * inv;
        node[3] = (phi(i, j + 1, k) - phi(i, j - 1, k)) * inv;
        node[4] = (phi(i, j, k + 1) - phi(i, j, k - 1)) * inv;
      }
}

FieldSample LatticeSampler::at(const Vec3& x) const {
  const CellLocation c = locate(grid_, x);
  if (!is_interior(grid_, c)) throw DomainError("causal domain violated: sample point outside grid interior");
  double w[8];
  trilinear_weights(c, w);
  double acc[kSampleStride] = {};
  int m = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const std::size_t row =
          (static_cast<std::size_t>(c.i + a) * n_ + static_cast<std::size_t>(c.j + b)) * n_ + c.k;
      const double* node = &nodes_[row * kSampleStride];
      for (int d = 0; d < 2; ++d, ++m) {
        const double wm = w[m];
        for (int q = 0; q < kSampleStride; ++q) acc[q] += wm * node[d * kSampleStride + q];
      }
    }
  return {acc[0], acc[1], {acc[2], acc[3], acc[4]}};
}

FieldSample sample_field(const ScalarFieldState& field, const Vec3& x) {
  return LatticeSampler(field).at(x);
}

std::vector<double> sample_phi_at_particles(const Ensemble& ensemble, const GridSpec& grid,
                                            const ScalarLattice& phi, int threads) {
  std::vector<double> out(ensemble.size());
  parallel_for(ensemble.size(), threads, [&](std::size_t begin, std::size_t end, int) {
    for (std::size_t i = begin; i < end; ++i) {
      const CellLocation c = locate(grid, ensemble.particles[i].x);
      if (!is_interior(grid, c)) throw DomainError("causal domain violated");
      out[i] = interpolate(phi, c);
    }
  });
  return out;
}

SourceLattice deposit_mu(const Ensemble& ensemble, std::span<const double> particle_phi,
                         const GridSpec& grid, int threads) {
  const int workers = effective_workers(ensemble.size(), threads);
  std::vector<ScalarLattice> partial(static_cast<std::size_t>(workers), ScalarLattice(grid));
  parallel_for(ensemble.size(), threads, [&](std::size_t begin, std::size_t end, int worker) {
    ScalarLattice& acc = partial[static_cast<std::size_t>(worker)];
    for (std::size_t i = begin; i < end; ++i) {
      const PhaseParticle& particle = ensemble.particles[i];
      const CellLocation c = locate(grid, particle.x);
      if (!is_interior(grid, c)) throw DomainError("causal domain violated");
      const double weight = particle_weight(particle, particle_phi[i]) / lorentz(particle.p);
      double w[8];
      trilinear_weights(c, w);
      int m = 0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int d = 0; d < 2; ++d) acc(c.i + a, c.j + b, c.k + d) += weight * w[m++];
    }
  });
  SourceLattice source{std::move(partial.front())};
  for (std::size_t w = 1; w < partial.size(); ++w)
    for (std::size_t q = 0; q < source.mu.size(); ++q) source.mu[q] += partial[w][q];
  const double inv_cell = 1.0 / std::pow(grid.dx(), 3);
  for (double& v : source.mu.values()) v *= inv_cell;
  return source;
}

SourceLattice deposit_mu(const Ensemble& ensemble, const ScalarFieldState& field, int threads) {
  const std::vector<double> phi = sample_phi_at_particles(ensemble, field.grid, field.phi, threads);
  return deposit_mu(ensemble, phi, field.grid, threads);
}

ScalarLattice laplacian(const GridSpec& grid, const ScalarLattice& phi, int threads) {
  ScalarLattice out(grid);
  const int n = grid.nodes_per_axis();
  const double inv_h2 = 1.0 / (grid.dx() * grid.dx());
  parallel_for(static_cast<std::size_t>(n - 2), threads, [&](std::size_t begin, std::size_t end, int) {
    for (std::size_t ii = begin; ii < end; ++ii) {
      const int i = static_cast<int>(ii) + 1;
      for (int j = 1; j < n - 1; ++j)
        for (int k = 1; k < n - 1; ++k) {
          const double c = phi(i, j, k);
          out(i, j, k) = (phi(i + 1, j, k) + phi(i - 1, j, k) + phi(i, j + 1, k) +
                          phi(i, j - 1, k) + phi(i, j, k + 1) + phi(i, j, k - 1) - 6.0 * c) *
                         inv_h2;
        }
    }
  });
  return out;
}

ScalarFieldState step_wave(const ScalarFieldState& field, const SourceLattice& source, double dt,
                           int threads) {
  if (!source.mu.same_shape(field.phi)) throw ConfigError("source and field lattices differ in shape");
  const GridSpec& grid = field.grid;
  const ScalarLattice lap = laplacian(grid, field.phi, threads);
  ScalarFieldState next(grid);
  next.time = field.time + dt;
  next.step = field.step + 1;
  next.phi_prev = field.phi;

  const int n = grid.nodes_per_axis();
  const bool bootstrap = field.step == 0;
  const double dt2 = dt * dt;
  bool finite = true;
  for (int i = 1; i < n - 1; ++i)
    for (int j = 1; j < n - 1; ++j)
      for (int k = 1; k < n - 1; ++k) {
        const std::size_t q = field.phi.index(i, j, k);
        const double accel = lap[q] - source.mu[q];
        double v;
        if (bootstrap)
          v = field.phi[q] + dt * field.dphi_dt[q] + 0.5 * dt2 * accel;
        else
          v = 2.0 * field.phi[q] - field.phi_prev[q] + dt2 * accel;
        finite = finite && std::isfinite(v);
        next.phi[q] = v;
      }
  if (!finite) throw BlowUpError("field blow-up or instability at t=" + std::to_string(next.time));

  // Predictor for d_t phi^{n+1}; the lagged source makes it O(dt^2).
  const ScalarLattice lap_next = laplacian(grid, next.phi, threads);
  for (int i = 1; i < n - 1; ++i)
    for (int j = 1; j < n - 1; ++j)
      for (int k = 1; k < n - 1; ++k) {
        const std::size_t q = field.phi.index(i, j, k);
        next.dphi_dt[q] =
            (next.phi[q] - field.phi[q]) / dt + 0.5 * dt * (lap_next[q] - source.mu[q]);
      }
  return next;
}

void complete_time_derivative(ScalarFieldState& field, const ScalarFieldState& next, double dt) {
  if (field.step == 0) return;
  const double inv = 0.5 / dt;
  for (std::size_t q = 0; q < field.phi.size(); ++q)
    field.dphi_dt[q] = (next.phi[q] - field.phi_prev[q]) * inv;
}

namespace {

template <class Fn>
double sphere_mean(const SphereRule& rule, const Vec3& x, double t, Fn&& integrand) {
  double acc = 0.0;
  double wsum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Vec3& w = rule.directions[q];
    acc += rule.weights[q] * integrand(x + t * w, w);
    wsum += rule.weights[q];
  }
  return acc / wsum;
}

}  // namespace

double eval_phi_hom(const DataParams& params, double t, const Vec3& x, const SphereRule& rule) {
  const RadialBump phi0 = params.phi0_bump();
  const RadialBump phi1 = params.phi1_bump();
  if (t == 0.0) return phi0.value(x);
  return sphere_mean(rule, x, t, [&](const Vec3& y, const Vec3& w) {
    return phi0.value(y) + t * dot(w, phi0.gradient(y)) + t * phi1.value(y);
  });
}

double eval_dtphi_hom(const DataParams& params, double t, const Vec3& x, const SphereRule& rule) {
  const RadialBump phi0 = params.phi0_bump();
  const RadialBump phi1 = params.phi1_bump();
  if (t == 0.0) return phi1.value(x);
  return sphere_mean(rule, x, t, [&](const Vec3& y, const Vec3& w) {
    return phi1.value(y) + t * dot(w, phi1.gradient(y)) + t * phi0.laplacian(y);
  });
}

}  // namespace nordvlas
