#include "nordvlas/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nordvlas/errors.hpp"

namespace nordvlas {

namespace {

double DiagnosticsRecord::*const kFields[] = {
    &DiagnosticsRecord::time,         &DiagnosticsRecord::total_energy,
    &DiagnosticsRecord::kinetic_energy, &DiagnosticsRecord::field_energy,
    &DiagnosticsRecord::P_max,        &DiagnosticsRecord::Ptilde_max,
    &DiagnosticsRecord::phi_min,      &DiagnosticsRecord::phi_max,
    &DiagnosticsRecord::char_invariant_residual_max, &DiagnosticsRecord::energy_drift_rel,
};

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ConfigError("malformed number '" + std::string(s) + "' in diagnostics");
  return v;
}

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols = {"time",    "total_energy", "kinetic_energy",
                                                "field_energy", "P_max",    "Ptilde_max",
                                                "phi_min", "phi_max",      "char_invariant_residual_max",
                                                "energy_drift_rel"};
  return cols;
}

void write_diagnostics_header(std::ostream& out) {
  out << kDiagnosticsHeader << '\n';
  const auto& cols = diagnostics_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

void write_diagnostics_row(std::ostream& out, const DiagnosticsRecord& r) {
  bool first = true;
  for (auto field : kFields) {
    if (!first) out << ',';
    out << format_double(r.*field);
    first = false;
  }
  out << '\n';
}

std::vector<DiagnosticsRecord> read_diagnostics(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kDiagnosticsHeader)
    throw ConfigError("diagnostics file lacks the '" + std::string(kDiagnosticsHeader) + "' line");
  std::string expected;
  {
    std::ostringstream o;
    write_diagnostics_header(o);
    expected = o.str().substr(o.str().find('\n') + 1);
    expected.pop_back();
  }
  if (!std::getline(in, line) || line != expected) throw ConfigError("unexpected diagnostics columns");
  std::vector<DiagnosticsRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    DiagnosticsRecord r;
    std::size_t start = 0;
    std::size_t col = 0;
    for (auto field : kFields) {
      const std::size_t end = line.find(',', start);
      const bool last = ++col == std::size(kFields);
      if (last != (end == std::string::npos)) throw ConfigError("wrong column count in diagnostics row");
      r.*field = parse_double(std::string_view(line).substr(start, end - start));
      start = end + 1;
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<DiagnosticsRecord> read_diagnostics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return read_diagnostics(in);
}

void write_snapshot(const std::filesystem::path& path, const GridSpec& grid, const ScalarLattice& values,
                    double time) {
  const int n = grid.nodes_per_axis();
  std::string header = "NVSNAP1 " + std::to_string(n) + " " + std::to_string(n) + " " + std::to_string(n) + " " +
                       format_double(grid.dx()) + " " + format_double(time);
  if (header.size() > 63) throw ConfigError("snapshot header overflow");
  header.resize(63, ' ');
  header.push_back('\n');
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out.write(header.data(), 64);
  for (double v : values.values()) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  char header[64];
  if (!in.read(header, 64)) throw ConfigError("truncated snapshot header");
  std::istringstream h(std::string(header, 64));
  std::string magic;
  int n1 = 0, n2 = 0, n3 = 0;
  Snapshot snap;
  h >> magic >> n1 >> n2 >> n3 >> snap.dx >> snap.time;
  if (magic != "NVSNAP1" || !h || n1 != n2 || n2 != n3 || n1 <= 0) throw ConfigError("bad snapshot header");
  snap.nodes_per_axis = n1;
  const std::size_t count = static_cast<std::size_t>(n1) * n1 * n1;
  snap.values.resize(count);
  for (auto& v : snap.values) {
    std::uint64_t bits = 0;
    if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw ConfigError("truncated snapshot data");
    v = std::bit_cast<double>(to_little(bits));
  }
  return snap;
}

}  // namespace nordvlas
