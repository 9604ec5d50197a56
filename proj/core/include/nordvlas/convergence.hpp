#pragma once

#include <span>
#include <vector>

#include "nordvlas/config.hpp"
#include "nordvlas/simulation.hpp"

namespace nordvlas {

/// Least-squares slope of log(error) against log(h). NaN when fewer than two
/// positive errors are available.
double observed_order(std::span<const double> h, std::span<const double> error);

/// Plane wave phi = F(x_1 - t) with F(s) = A (1 - (s - s0)^2 / w^2)^4, evolved
/// by the leapfrog solver with mu = 0 and compared with the exact translate.
struct TravelingWaveSpec {
  double amplitude = 1.0;
  double width = 0.5;
  double start = -0.75;
  double half_width = 2.0;
  double t_final = 1.0;
  double cfl_safety = 0.4;
  /// Error is measured where |x_2|, |x_3| <= window, away from the faces the
  /// plane wave crosses.
  double window = 0.5;
};

double traveling_wave_profile(const TravelingWaveSpec& spec, double s);
double traveling_wave_slope(const TravelingWaveSpec& spec, double s);

struct WaveLevel {
  int cells = 0;
  double dx = 0.0;
  double dt = 0.0;
  int steps = 0;
  double error = 0.0;  // max-norm over the window
};

struct WaveLadder {
  std::vector<WaveLevel> levels;
  std::vector<double> pairwise_orders;
  double order = 0.0;
};

/// Max-norm error of one traveling-wave run.
WaveLevel traveling_wave_error(const TravelingWaveSpec& spec, int cells, int threads = 1);
WaveLadder traveling_wave_ladder(const TravelingWaveSpec& spec, std::span<const int> cells, int threads = 1);

struct EnergyLevel {
  int cells = 0;
  int nx_per_axis = 0;
  int np_per_axis = 0;
  double dx = 0.0;
  double dt = 0.0;
  double drift_max = 0.0;  // max over t of |E(t) - E(0)| / E(0)
  double drift_final = 0.0;
};

struct EnergyLadder {
  std::vector<EnergyLevel> levels;
  bool monotone = false;  // drift_max strictly decreasing along the ladder
};

/// `base` at another cell count: sampling counts scale with the cell count
/// (at least 4 per axis) and an explicit dt scales with dx.
RunConfig refined_config(const RunConfig& base, int cells);

EnergyLevel energy_level(const SimulationResult& run);

/// drift_max strictly decreasing along the levels.
bool strictly_decreasing(std::span<const EnergyLevel> levels);

/// Reruns `base` at each cell count. Sampling counts scale with the cell count
/// (at least 4 per axis); an explicit dt scales with dx.
EnergyLadder energy_drift_ladder(const RunConfig& base, std::span<const int> cells, int threads = 1);

}  // namespace nordvlas
