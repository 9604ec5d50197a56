#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nordvlas/config.hpp"
#include "nordvlas/convergence.hpp"
#include "nordvlas/errors.hpp"
#include "nordvlas/identities.hpp"
#include "nordvlas/io.hpp"
#include "nordvlas/simulation.hpp"

namespace fs = std::filesystem;
using namespace nordvlas;

namespace {

enum Exit { kOk = 0, kValidation = 1, kRuntime = 2, kCheckFailed = 3 };

Vec3 parse_point(const std::string& text) {
  Vec3 v{};
  std::istringstream in(text);
  char sep = 0;
  if (!(in >> v.x >> sep >> v.y >> sep >> v.z)) throw ConfigError("point '" + text + "' is not of the form x,y,z");
  return v;
}

std::string fmt(double v) { return format_double(v); }

int simulate(const std::string& config_path, int threads, const fs::path& out_dir) {
  const RunConfig config = load_config(config_path);
  config.validate();
  const fs::path dir = out_dir.empty() ? fs::path(config.output.dir) : out_dir;
  fs::create_directories(dir);
  std::ofstream csv(dir / config.output.diagnostics, std::ios::binary);
  if (!csv) throw ConfigError("cannot write " + (dir / config.output.diagnostics).string());
  write_diagnostics_header(csv);

  SimulationOptions opts;
  opts.threads = threads;
  opts.snapshot_dir = dir;
  opts.on_record = [&](const DiagnosticsRecord& r) {
    write_diagnostics_row(csv, r);
    csv.flush();
  };
  const SimulationResult run = run_simulation(config, opts);

  const DiagnosticsRecord& last = run.records.back();
  nlohmann::json summary = {
      {"steps", run.steps},
      {"dt", run.dt},
      {"particles", run.particle_count},
      {"initial_energy", run.initial_energy},
      {"final_energy", last.total_energy},
      {"energy_drift_max", run.checks.energy_drift_max},
      {"P_max", last.P_max},
      {"Ptilde_max", last.Ptilde_max},
      {"mu_min", run.checks.mu_min},
      {"e_min", run.checks.e_min},
      {"support_bound_violations", run.checks.support_bound_violations},
  };
  std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';
  std::cout << "steps " << run.steps << "  dt " << fmt(run.dt) << "  particles " << run.particle_count << '\n'
            << "max P(t) " << fmt(last.P_max) << "  max |p| " << fmt(last.Ptilde_max) << '\n'
            << "energy drift max " << fmt(run.checks.energy_drift_max) << '\n';
  return kOk;
}

int check_identities(int trials, std::uint64_t seed, double tolerance) {
  std::cout << "seed " << seed << "  trials " << trials << '\n';
  bool ok = true;
  for (const auto& sweep : run_identity_sweeps(trials, seed)) {
    const bool pass = sweep.max_rel_residual <= tolerance;
    ok = ok && pass;
    std::printf("%-20s max rel residual %.3e  %s\n", sweep.name.c_str(), sweep.max_rel_residual,
                pass ? "ok" : "FAIL");
  }
  return ok ? kOk : kCheckFailed;
}

int check_bab(const std::vector<double>& radii) {
  const std::vector<std::pair<double, double>> pairs = {{1, 0}, {1, 0.5}, {0.5, 0}, {2, 0.5}, {2, 0}};
  bool ok = true;
  for (auto [a, b] : pairs) {
    const BabLadder ladder = b_ab_bound_check(a, b, radii);
    ok = ok && ladder.bounded;
    std::printf("a=%g b=%g  ratios", a, b);
    for (double q : ladder.ratios) std::printf(" %.6g", q);
    std::printf("  %s\n", ladder.bounded ? "bounded" : "UNBOUNDED");
  }
  const double spot = b_ab(2.0, 0.0, 0.0, {0, 0, 1});
  std::printf("B_00(2) = %.15g  (32 pi / 3 = %.15g)\n", spot, 32.0 * M_PI / 3.0);
  return ok ? kOk : kCheckFailed;
}

int verify_representation(const std::string& config_path, int threads, const std::vector<double>& times,
                          const std::vector<std::string>& points, double tolerance) {
  RunConfig config = load_config(config_path);
  if (config.history_stride <= 0) throw ConfigError("verify-representation needs [history] stride > 0");
  double horizon = 0.0;
  SimulationOptions opts;
  opts.threads = threads;
  for (double t : times)
    for (const auto& p : points) {
      opts.representation_probes.push_back({t, parse_point(p)});
      horizon = std::max(horizon, t);
    }
  // one extra stride past the last vertex time so a slice lands at or after it
  const double step = config.dt > 0.0 ? config.dt : config.cfl_bound();
  config.t_end = std::max(horizon, 1e-3) + config.history_stride * step;
  opts.history_horizon = std::max(horizon, 1e-3);
  const SimulationResult run = run_simulation(config, opts);
  bool ok = true;
  std::printf("%8s %24s %14s %14s %11s %11s %11s %11s %11s %11s %11s %9s\n", "t", "x", "repr", "grid", "D", "Z0",
              "Z1", "Z2", "Z3", "Z4", "Z5", "rel_err");
  for (const auto& r : run.representation) {
    ok = ok && r.rel_error <= tolerance;
    std::printf("%8.4f %8.3f,%7.3f,%7.3f %14.6e %14.6e %11.3e", r.time, r.x.x, r.x.y, r.x.z, r.value_repr,
                r.value_grid, r.dtphi_D());
    for (double z : r.Z) std::printf(" %11.3e", z);
    std::printf(" %9.3e\n", r.rel_error);
  }
  return ok ? kOk : kCheckFailed;
}

int convergence(const std::string& config_path, int threads, const std::vector<int>& levels,
                const std::vector<int>& energy_levels) {
  const RunConfig config = load_config(config_path);
  TravelingWaveSpec spec;
  const WaveLadder wave = traveling_wave_ladder(spec, levels, threads);
  std::printf("traveling wave\n%8s %12s %12s %8s %14s\n", "cells", "dx", "dt", "steps", "max error");
  for (const auto& l : wave.levels) std::printf("%8d %12.5e %12.5e %8d %14.6e\n", l.cells, l.dx, l.dt, l.steps, l.error);
  for (double q : wave.pairwise_orders) std::printf("  pairwise order %.4f\n", q);
  std::printf("observed order %.4f\n", wave.order);

  std::vector<int> cells = energy_levels;
  if (cells.empty()) {
    const int n = config.grid.cells_per_axis;
    cells = {n / 2 + (n / 2) % 2, (3 * n / 4) + (3 * n / 4) % 2, n};
  }
  const EnergyLadder energy = energy_drift_ladder(config, cells, threads);
  std::printf("energy drift\n%8s %6s %6s %12s %14s %14s\n", "cells", "nx", "np", "dt", "max drift", "final drift");
  for (const auto& l : energy.levels)
    std::printf("%8d %6d %6d %12.5e %14.6e %14.6e\n", l.cells, l.nx_per_axis, l.np_per_axis, l.dt, l.drift_max,
                l.drift_final);
  std::printf("drift decreasing: %s\n", energy.monotone ? "yes" : "no");
  const bool ok = wave.order >= 1.9 && energy.monotone;
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nordstrom-Vlasov simulator and verification checks"};
  app.require_subcommand(1);
  std::string config_path;
  int threads = 1;
  std::string out_dir;

  auto* sim = app.add_subcommand("simulate", "Run the coupled simulation and write diagnostics");
  sim->add_option("--config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  sim->add_option("--threads", threads, "Worker count")->check(CLI::PositiveNumber);
  sim->add_option("--out", out_dir, "Output directory (overrides [output] dir)");

  int trials = 1000;
  std::uint64_t seed = 20261016;
  double id_tol = 1e-11;
  auto* ids = app.add_subcommand("check-identities", "Randomized sweeps of the pointwise identities");
  ids->add_option("--trials", trials, "Trials per identity")->check(CLI::PositiveNumber);
  ids->add_option("--seed", seed, "Generator seed");
  ids->add_option("--tolerance", id_tol, "Relative residual threshold");

  std::vector<double> radii = {10, 100, 1000, 10000};
  auto* bab = app.add_subcommand("check-bab", "Momentum-ball integral ladders against their growth envelopes");
  bab->add_option("--radii", radii, "Radius ladder")->delimiter(',');

  std::vector<double> times = {0.5};
  std::vector<std::string> points = {"0,0,0"};
  double rep_tol = 0.1;
  auto* rep = app.add_subcommand("verify-representation", "Rebuild d_t phi from cone integrals and compare");
  rep->add_option("--config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  rep->add_option("--threads", threads, "Worker count")->check(CLI::PositiveNumber);
  rep->add_option("--t", times, "Vertex times")->delimiter(',');
  rep->add_option("--x", points, "Vertex points x,y,z (repeatable)");
  rep->add_option("--tolerance", rep_tol, "Relative error threshold");

  std::vector<int> levels = {24, 48, 96, 192};
  std::vector<int> energy_levels;
  auto* conv = app.add_subcommand("convergence", "Traveling-wave and energy-drift refinement ladders");
  conv->add_option("--config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  conv->add_option("--threads", threads, "Worker count")->check(CLI::PositiveNumber);
  conv->add_option("--levels", levels, "Traveling-wave cell counts")->delimiter(',');
  conv->add_option("--energy-levels", energy_levels, "Energy-drift cell counts")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*sim) return simulate(config_path, threads, out_dir);
    if (*ids) return check_identities(trials, seed, id_tol);
    if (*bab) return check_bab(radii);
    if (*rep) return verify_representation(config_path, threads, times, points, rep_tol);
    if (*conv) return convergence(config_path, threads, levels, energy_levels);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const BlowUpError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kOk;
}
