#include "nordvlas/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "nordvlas/diagnostics.hpp"
#include "nordvlas/errors.hpp"
#include "nordvlas/field_solver.hpp"
#include "nordvlas/identities.hpp"
#include "nordvlas/initial_data.hpp"
#include "nordvlas/io.hpp"
#include "nordvlas/pusher.hpp"

namespace nordvlas {

namespace {

double sup_norm(const ScalarLattice& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

SimulationResult run_simulation(const RunConfig& config, const SimulationOptions& options) {
  config.validate();
  const GridSpec& grid = config.grid;
  const int threads = std::max(1, options.threads);
  const int steps = config.steps();
  const double dt = config.effective_dt();
  const int stride = config.history_stride;
  const double horizon = options.history_horizon < 0.0 ? config.t_end : options.history_horizon;

  if (!options.representation_probes.empty() || !options.null_cone_probes.empty()) {
    if (stride <= 0) throw ConfigError("cone checks need [history] stride > 0");
    // slices land on multiples of the stride, so the last one may precede t_end
    const double last_slice = (steps / stride) * stride * dt;
    auto check = [&](const ConeProbe& probe, const char* kind) {
      if (probe.t > horizon + 1e-12)
        throw ConfigError(std::string(kind) + " probe time beyond the history horizon");
      if (probe.t > last_slice + 1e-12)
        throw ConfigError(std::string(kind) + " probe at t=" + std::to_string(probe.t) +
                          " lies past the last history slice at t=" + std::to_string(last_slice) +
                          "; increase t_end");
    };
    for (const auto& probe : options.null_cone_probes) check(probe, "null-cone");
    for (const auto& probe : options.representation_probes) check(probe, "representation");
  }

  SimulationResult result;
  result.config = config;
  result.dt = dt;
  result.steps = steps;

  Ensemble ensemble = sample_ensemble(config.data, config.sampling.nx_per_axis, config.sampling.np_per_axis, grid);
  result.particle_count = ensemble.size();
  ScalarFieldState field = initial_field(grid, config.data);

  ScalarFieldState hom;
  SourceLattice no_source{ScalarLattice(grid)};
  if (options.homogeneous_companion) hom = field;

  if (stride > 0) result.history = FieldHistory(grid, stride, dt);
  std::vector<ConeMomentRecorder> recorders;
  for (const auto& probe : options.representation_probes) {
    recorders.emplace_back(probe.t, probe.x, grid, stride * dt, options.cone);
  }

  double c0 = 0.0;
  for (const auto& q : ensemble.particles) c0 = std::max(c0, q.f_birth * std::exp(-4.0 * q.phi_birth));

  SupportTracker tracker;
  SimulationChecks& checks = result.checks;
  const double dx2 = grid.dx() * grid.dx();

  for (int n = 0; n <= steps; ++n) {
    const std::vector<double> particle_phi = sample_phi_at_particles(ensemble, grid, field.phi, threads);
    const SourceLattice source = deposit_mu(ensemble, particle_phi, grid, threads);
    ScalarFieldState next = step_wave(field, source, dt, threads);
    complete_time_derivative(field, next, dt);

    const EnergyLattices energy = energy_lattices(ensemble, particle_phi, field, threads);
    const EnergyTotals totals = total_energy(energy, grid);
    if (n == 0) result.initial_energy = totals.total;
    const double e0 = result.initial_energy;

    for (double v : source.mu.values()) checks.mu_min = std::min(checks.mu_min, v);
    for (double v : energy.e.values()) checks.e_min = std::min(checks.e_min, v);

    const SupportSuprema sup = tracker.update(ensemble, particle_phi);
    (void)sup;
    checks.support_bound_violations = tracker.bound_violations();
    checks.monotonicity_violations = tracker.monotonicity_violations();

    if (tracker.running().P_max > 0.0) {
      double phi_occ = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < source.mu.size(); ++i)
        if (source.mu[i] > 0.0) phi_occ = std::min(phi_occ, field.phi[i]);
      if (std::isfinite(phi_occ)) {
        const double ball = b_ab(std::exp(-phi_occ) * tracker.running().P_max, 0.0, 0.5, {0.0, 0.0, 1.0}, 1e-8);
        for (std::size_t i = 0; i < source.mu.size(); ++i)
          if (source.mu[i] > 0.0)
            checks.source_bound_ratio_max =
                std::max(checks.source_bound_ratio_max, source.mu[i] / (c0 * std::exp(4.0 * field.phi[i]) * ball));
      }
    }

    const FieldNorms norms = field_norms(field);
    if (e0 > 0.0)
      checks.energy_norm_ratio_max =
          std::max(checks.energy_norm_ratio_max, std::max(norms.dphi_dt_l2, norms.grad_phi_l2) / std::sqrt(2.0 * e0));

    DiagnosticsRecord record;
    record.time = n * dt;
    record.total_energy = totals.total;
    record.kinetic_energy = totals.kinetic;
    record.field_energy = totals.field;
    record.P_max = tracker.running().P_max;
    record.Ptilde_max = tracker.running().Ptilde_max;
    const auto [lo, hi] = std::minmax_element(field.phi.values().begin(), field.phi.values().end());
    record.phi_min = *lo;
    record.phi_max = *hi;
    record.char_invariant_residual_max = max_char_invariant_residual(ensemble, particle_phi);
    record.energy_drift_rel = e0 != 0.0 ? (totals.total - e0) / std::abs(e0) : totals.total - e0;
    checks.energy_drift_max = std::max(checks.energy_drift_max, std::abs(record.energy_drift_rel));
    checks.char_residual_max = std::max(checks.char_residual_max, record.char_invariant_residual_max);

    if (options.homogeneous_companion) {
      const double hom_sup = sup_norm(hom.phi);
      checks.phi_hom_sup = std::max(checks.phi_hom_sup, hom_sup);
      checks.psi_excess_max =
          std::max(checks.psi_excess_max, max_excess_over(field.phi, hom.phi, 1e-3 * hom_sup + dx2));
    }

    if (stride > 0 && n % stride == 0 && n * dt <= horizon + stride * dt) {
      const std::size_t k = static_cast<std::size_t>(n / stride);
      for (auto& rec : recorders)
        if (rec.wants(k)) rec.record(k, ensemble, particle_phi);
      result.history.push(HistorySlice{n * dt, field.phi, field.dphi_dt, source.mu, energy.e, energy.pflux});
    }

    if (n % config.output.diagnostics_every == 0 || n == steps) {
      result.records.push_back(record);
      if (options.on_record) options.on_record(record);
    }

    if (config.output.snapshot_every > 0 && n % config.output.snapshot_every == 0 && !options.snapshot_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof name, "phi_%06d.bin", n);
      write_snapshot(options.snapshot_dir / name, grid, field.phi, n * dt);
    }

    if (n == steps) break;

    ScalarLattice phi_mid(grid);
    ScalarLattice dphi_mid(grid);
    for (std::size_t i = 0; i < phi_mid.size(); ++i) {
      phi_mid[i] = 0.5 * (field.phi[i] + next.phi[i]);
      dphi_mid[i] = (next.phi[i] - field.phi[i]) / dt;
    }
    const LatticeSampler sampler(grid, phi_mid, dphi_mid);
    push_step(ensemble, sampler, dt, threads);
    ensemble.time = (n + 1) * dt;

    if (options.homogeneous_companion) {
      ScalarFieldState hom_next = step_wave(hom, no_source, dt, threads);
      hom = std::move(hom_next);
    }
    field = std::move(next);
  }

  result.final_field = field;
  for (const auto& probe : options.null_cone_probes)
    result.null_cone.push_back(null_cone_check(probe.t, probe.x, result.history, options.cone));
  for (const auto& rec : recorders)
    result.representation.push_back(dtphi_representation(rec, result.history, config.data, options.representation));
  return result;
}

}  // namespace nordvlas
