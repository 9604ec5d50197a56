#pragma once

#include <filesystem>
#include <functional>
#include <limits>
#include <vector>

#include "nordvlas/cone.hpp"
#include "nordvlas/config.hpp"
#include "nordvlas/state.hpp"

namespace nordvlas {

struct ConeProbe {
  double t = 0.0;
  Vec3 x{};
};

struct SimulationOptions {
  int threads = 1;
  /// Run a matter-free companion in lockstep and compare phi against it.
  bool homogeneous_companion = false;
  /// Null-cone identity checks evaluated from the history after the run.
  std::vector<ConeProbe> null_cone_probes;
  /// d_t phi representation checks; moments are recorded during the run.
  std::vector<ConeProbe> representation_probes;
  ConeOptions cone{};
  RepresentationOptions representation{};
  /// History slices are kept only up to this time (negative: t_end).
  double history_horizon = -1.0;
  /// Field snapshots go here when config.output.snapshot_every > 0.
  std::filesystem::path snapshot_dir{};
  /// Called for every emitted diagnostics row, in time order.
  std::function<void(const DiagnosticsRecord&)> on_record{};
};

/// Running minima and maxima of every runtime property check.
struct SimulationChecks {
  double mu_min = std::numeric_limits<double>::infinity();
  double e_min = std::numeric_limits<double>::infinity();
  /// max over steps and nodes of phi - (phi_hom + 1e-3 |phi_hom|_inf + dx^2); <= 0 passes.
  double psi_excess_max = -std::numeric_limits<double>::infinity();
  double phi_hom_sup = 0.0;
  int support_bound_violations = 0;
  int monotonicity_violations = 0;
  /// max over steps of max(|d_t phi|_L2, |grad phi|_L2) / sqrt(2 E(0)).
  double energy_norm_ratio_max = 0.0;
  double energy_drift_max = 0.0;
  double char_residual_max = 0.0;
  /// max over steps and nodes of mu / (C0 e^{4 phi} B_{0,1/2}(e^{-phi_min} P(t))),
  /// C0 = max f_birth e^{-4 phi_birth}, phi_min over occupied nodes; <= 1 passes.
  double source_bound_ratio_max = 0.0;
};

struct SimulationResult {
  RunConfig config{};
  double dt = 0.0;
  int steps = 0;
  std::size_t particle_count = 0;
  double initial_energy = 0.0;
  std::vector<DiagnosticsRecord> records;
  SimulationChecks checks{};
  std::vector<NullConeResult> null_cone;
  std::vector<RepresentationResult> representation;
  ScalarFieldState final_field{};
  FieldHistory history{};
};

/// Coupled time loop. Per level n: deposit mu from the particles, take one
/// leapfrog step, finish the centered d_t phi, evaluate diagnostics, then push
/// the particles through the field frozen at the half step. The final level
/// gets its diagnostics from one extra wave step and no push.
/// Throws ConfigError, DomainError, BlowUpError or HistoryError.
SimulationResult run_simulation(const RunConfig& config, const SimulationOptions& options = {});

}  // namespace nordvlas
