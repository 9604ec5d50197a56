#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "nordvlas/initial_data.hpp"
#include "nordvlas/lattice.hpp"

namespace nordvlas {

struct SamplingParams {
  int nx_per_axis = 16;
  int np_per_axis = 16;
};

struct OutputParams {
  std::string dir = ".";
  std::string diagnostics = "diagnostics.csv";
  int diagnostics_every = 1;  // steps between CSV rows
  int snapshot_every = 0;     // steps between field snapshots, 0 = none
};

struct RunConfig {
  GridSpec grid{};
  double dt = 0.0;  // 0 selects cfl_safety * dx / sqrt(3)
  double t_end = 1.0;
  double cfl_safety = 0.4;
  SamplingParams sampling{};
  DataParams data{};
  int history_stride = 0;  // 0 disables the field history
  OutputParams output{};
  std::uint64_t seed = 0;

  double cfl_bound() const;
  /// Throws ConfigError with a message naming the violated bound.
  void validate() const;
  int steps() const;
  /// t_end / steps(): the requested step shortened so steps land on t_end.
  double effective_dt() const;
};

/// INI-style file with sections [grid] [time] [data] [sampling] [history]
/// [output] [run]. Unknown sections or keys raise ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);
std::string format_config(const RunConfig& config);

}  // namespace nordvlas
