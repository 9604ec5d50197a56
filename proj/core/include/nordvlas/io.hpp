#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nordvlas/lattice.hpp"
#include "nordvlas/state.hpp"

namespace nordvlas {

inline constexpr const char* kDiagnosticsHeader = "# nordvlas-diag v1";

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Column names, in order, of the diagnostics CSV.
const std::vector<std::string>& diagnostics_columns();

void write_diagnostics_header(std::ostream& out);
void write_diagnostics_row(std::ostream& out, const DiagnosticsRecord& record);
/// Parses a full CSV (version comment, column line, rows). Throws ConfigError on
/// a wrong version line, column set or malformed number.
std::vector<DiagnosticsRecord> read_diagnostics(std::istream& in);
std::vector<DiagnosticsRecord> read_diagnostics(const std::filesystem::path& path);

/// Snapshot file: a 64-byte ASCII header
///   "NVSNAP1 <n> <n> <n> <dx> <time>" padded with spaces, last byte '\n'
/// followed by n^3 little-endian IEEE-754 doubles in row-major order (x slowest).
struct Snapshot {
  int nodes_per_axis = 0;
  double dx = 0.0;
  double time = 0.0;
  std::vector<double> values;
};
void write_snapshot(const std::filesystem::path& path, const GridSpec& grid, const ScalarLattice& values,
                    double time);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace nordvlas
