#include "nordvlas/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nordvlas/errors.hpp"
#include "nordvlas/field_solver.hpp"
#include "nordvlas/simulation.hpp"

namespace nordvlas {

double observed_order(std::span<const double> h, std::span<const double> error) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < std::min(h.size(), error.size()); ++i) {
    if (!(error[i] > 0.0) || !(h[i] > 0.0)) continue;
    const double x = std::log(h[i]);
    const double y = std::log(error[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double traveling_wave_profile(const TravelingWaveSpec& spec, double s) {
  const double u = (s - spec.start) / spec.width;
  if (std::abs(u) >= 1.0) return 0.0;
  const double q = 1.0 - u * u;
  return spec.amplitude * q * q * q * q;
}

double traveling_wave_slope(const TravelingWaveSpec& spec, double s) {
  const double u = (s - spec.start) / spec.width;
  if (std::abs(u) >= 1.0) return 0.0;
  const double q = 1.0 - u * u;
  return spec.amplitude * 4.0 * q * q * q * (-2.0 * u / spec.width);
}

WaveLevel traveling_wave_error(const TravelingWaveSpec& spec, int cells, int threads) {
  GridSpec grid{{0.0, 0.0, 0.0}, spec.half_width, cells};
  grid.validate();
  WaveLevel level;
  level.cells = cells;
  level.dx = grid.dx();
  level.steps = static_cast<int>(std::ceil(spec.t_final / (spec.cfl_safety * grid.dx() / std::sqrt(3.0)) - 1e-9));
  level.dt = spec.t_final / level.steps;

  ScalarFieldState field(grid);
  const int n = grid.nodes_per_axis();
  for (int i = 1; i < n - 1; ++i)
    for (int j = 1; j < n - 1; ++j)
      for (int k = 1; k < n - 1; ++k) {
        const double x1 = grid.node_position(i, j, k).x;
        field.phi(i, j, k) = traveling_wave_profile(spec, x1);
        field.dphi_dt(i, j, k) = -traveling_wave_slope(spec, x1);
      }
  const SourceLattice none{ScalarLattice(grid)};
  for (int s = 0; s < level.steps; ++s) field = step_wave(field, none, level.dt, threads);

  double err = 0.0;
  for (int i = 1; i < n - 1; ++i)
    for (int j = 1; j < n - 1; ++j)
      for (int k = 1; k < n - 1; ++k) {
        const Vec3 y = grid.node_position(i, j, k);
        if (std::abs(y.y) > spec.window || std::abs(y.z) > spec.window) continue;
        err = std::max(err, std::abs(field.phi(i, j, k) - traveling_wave_profile(spec, y.x - spec.t_final)));
      }
  level.error = err;
  return level;
}

WaveLadder traveling_wave_ladder(const TravelingWaveSpec& spec, std::span<const int> cells, int threads) {
  WaveLadder ladder;
  std::vector<double> h, e;
  for (int c : cells) {
    ladder.levels.push_back(traveling_wave_error(spec, c, threads));
    h.push_back(ladder.levels.back().dx);
    e.push_back(ladder.levels.back().error);
  }
  for (std::size_t i = 1; i < h.size(); ++i)
    ladder.pairwise_orders.push_back(observed_order(std::span(h).subspan(i - 1, 2), std::span(e).subspan(i - 1, 2)));
  ladder.order = observed_order(h, e);
  return ladder;
}

RunConfig refined_config(const RunConfig& base, int cells) {
  RunConfig cfg = base;
  const double scale = static_cast<double>(cells) / base.grid.cells_per_axis;
  cfg.grid.cells_per_axis = cells;
  cfg.sampling.nx_per_axis = std::max(4, static_cast<int>(std::lround(base.sampling.nx_per_axis * scale)));
  cfg.sampling.np_per_axis = std::max(4, static_cast<int>(std::lround(base.sampling.np_per_axis * scale)));
  if (base.dt > 0.0) cfg.dt = base.dt / scale;
  return cfg;
}

EnergyLevel energy_level(const SimulationResult& run) {
  EnergyLevel level;
  level.cells = run.config.grid.cells_per_axis;
  level.nx_per_axis = run.config.sampling.nx_per_axis;
  level.np_per_axis = run.config.sampling.np_per_axis;
  level.dx = run.config.grid.dx();
  level.dt = run.dt;
  level.drift_max = run.checks.energy_drift_max;
  level.drift_final = run.records.empty() ? 0.0 : run.records.back().energy_drift_rel;
  return level;
}

bool strictly_decreasing(std::span<const EnergyLevel> levels) {
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i].drift_max < levels[i - 1].drift_max)) return false;
  return true;
}

EnergyLadder energy_drift_ladder(const RunConfig& base, std::span<const int> cells, int threads) {
  if (cells.empty()) throw ConfigError("empty refinement ladder");
  EnergyLadder ladder;
  for (int c : cells) {
    RunConfig cfg = refined_config(base, c);
    cfg.history_stride = 0;
    cfg.output.snapshot_every = 0;
    SimulationOptions opts;
    opts.threads = threads;
    ladder.levels.push_back(energy_level(run_simulation(cfg, opts)));
  }
  ladder.monotone = strictly_decreasing(ladder.levels);
  return ladder;
}

}  // namespace nordvlas
