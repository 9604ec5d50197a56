#include "nordvlas/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nordvlas/errors.hpp"

namespace nordvlas {

namespace pt = boost::property_tree;

double RunConfig::cfl_bound() const { return cfl_safety * grid.dx() / std::sqrt(3.0); }

void RunConfig::validate() const {
  grid.validate();
  data.validate();
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw ConfigError("cfl_safety must lie in (0, 1]");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be positive");
  if (dt < 0.0 || !std::isfinite(dt)) throw ConfigError("dt must be >= 0");
  if (dt > cfl_bound())
    throw ConfigError("dt = " + std::to_string(dt) + " violates the CFL bound dt <= cfl_safety*dx/sqrt(3) = " +
                      std::to_string(cfl_bound()));
  const double reach = data.support_extent() + norm(grid.center) + t_end;
  if (grid.half_width < reach)
    throw ConfigError("half_width = " + std::to_string(grid.half_width) +
                      " violates the causal bound half_width >= support + t_end = " + std::to_string(reach));
  if (data.A_f > 0.0 && (sampling.nx_per_axis < 4 || sampling.np_per_axis < 4))
    throw ConfigError("sampling counts must be >= 4 per axis");
  if (history_stride < 0) throw ConfigError("history stride must be >= 0");
  if (output.diagnostics_every < 1) throw ConfigError("diagnostics_every must be >= 1");
  if (output.snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
}

int RunConfig::steps() const {
  const double step = dt > 0.0 ? dt : cfl_bound();
  return static_cast<int>(std::ceil(t_end / step - 1e-9));
}

double RunConfig::effective_dt() const { return t_end / steps(); }

namespace {

using Setter = void (*)(RunConfig&, const std::string&);

template <class T>
T convert(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !(in >> std::ws).eof()) throw ConfigError("cannot parse value '" + value + "' for " + key);
  return out;
}

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"grid",
       {{"center_x", [](RunConfig& c, const std::string& v) { c.grid.center.x = convert<double>("center_x", v); }},
        {"center_y", [](RunConfig& c, const std::string& v) { c.grid.center.y = convert<double>("center_y", v); }},
        {"center_z", [](RunConfig& c, const std::string& v) { c.grid.center.z = convert<double>("center_z", v); }},
        {"half_width", [](RunConfig& c, const std::string& v) { c.grid.half_width = convert<double>("half_width", v); }},
        {"cells_per_axis",
         [](RunConfig& c, const std::string& v) { c.grid.cells_per_axis = convert<int>("cells_per_axis", v); }}}},
      {"time",
       {{"dt", [](RunConfig& c, const std::string& v) { c.dt = convert<double>("dt", v); }},
        {"t_end", [](RunConfig& c, const std::string& v) { c.t_end = convert<double>("t_end", v); }},
        {"cfl_safety", [](RunConfig& c, const std::string& v) { c.cfl_safety = convert<double>("cfl_safety", v); }}}},
      {"data",
       {{"A_f", [](RunConfig& c, const std::string& v) { c.data.A_f = convert<double>("A_f", v); }},
        {"R_x", [](RunConfig& c, const std::string& v) { c.data.R_x = convert<double>("R_x", v); }},
        {"R_p", [](RunConfig& c, const std::string& v) { c.data.R_p = convert<double>("R_p", v); }},
        {"A_phi", [](RunConfig& c, const std::string& v) { c.data.A_phi = convert<double>("A_phi", v); }},
        {"R_phi", [](RunConfig& c, const std::string& v) { c.data.R_phi = convert<double>("R_phi", v); }},
        {"A_pi", [](RunConfig& c, const std::string& v) { c.data.A_pi = convert<double>("A_pi", v); }},
        {"R_pi", [](RunConfig& c, const std::string& v) { c.data.R_pi = convert<double>("R_pi", v); }},
        {"offset_f_x", [](RunConfig& c, const std::string& v) { c.data.offset_f.x = convert<double>("offset_f_x", v); }},
        {"offset_f_y", [](RunConfig& c, const std::string& v) { c.data.offset_f.y = convert<double>("offset_f_y", v); }},
        {"offset_f_z", [](RunConfig& c, const std::string& v) { c.data.offset_f.z = convert<double>("offset_f_z", v); }},
        {"offset_phi_x",
         [](RunConfig& c, const std::string& v) { c.data.offset_phi.x = convert<double>("offset_phi_x", v); }},
        {"offset_phi_y",
         [](RunConfig& c, const std::string& v) { c.data.offset_phi.y = convert<double>("offset_phi_y", v); }},
        {"offset_phi_z",
         [](RunConfig& c, const std::string& v) { c.data.offset_phi.z = convert<double>("offset_phi_z", v); }},
        {"offset_pi_x",
         [](RunConfig& c, const std::string& v) { c.data.offset_pi.x = convert<double>("offset_pi_x", v); }},
        {"offset_pi_y",
         [](RunConfig& c, const std::string& v) { c.data.offset_pi.y = convert<double>("offset_pi_y", v); }},
        {"offset_pi_z",
         [](RunConfig& c, const std::string& v) { c.data.offset_pi.z = convert<double>("offset_pi_z", v); }}}},
      {"sampling",
       {{"nx_per_axis",
         [](RunConfig& c, const std::string& v) { c.sampling.nx_per_axis = convert<int>("nx_per_axis", v); }},
        {"np_per_axis",
         [](RunConfig& c, const std::string& v) { c.sampling.np_per_axis = convert<int>("np_per_axis", v); }}}},
      {"history",
       {{"stride", [](RunConfig& c, const std::string& v) { c.history_stride = convert<int>("stride", v); }}}},
      {"output",
       {{"dir", [](RunConfig& c, const std::string& v) { c.output.dir = v; }},
        {"diagnostics", [](RunConfig& c, const std::string& v) { c.output.diagnostics = v; }},
        {"diagnostics_every",
         [](RunConfig& c, const std::string& v) { c.output.diagnostics_every = convert<int>("diagnostics_every", v); }},
        {"snapshot_every",
         [](RunConfig& c, const std::string& v) { c.output.snapshot_every = convert<int>("snapshot_every", v); }}}},
      {"run", {{"seed", [](RunConfig& c, const std::string& v) { c.seed = convert<std::uint64_t>("seed", v); }}}},
  };
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  RunConfig config;
  for (const auto& [section, body] : tree) {
    const auto s = schema().find(section);
    if (s == schema().end()) {
      if (body.empty()) throw ConfigError("key '" + section + "' outside any section");
      throw ConfigError("unknown config section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      const auto k = s->second.find(key);
      if (k == s->second.end()) throw ConfigError("unknown config key '" + key + "' in [" + section + "]");
      k->second(config, value.get_value<std::string>());
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string format_config(const RunConfig& c) {
  std::ostringstream o;
  o.precision(17);
  o << "[grid]\ncenter_x = " << c.grid.center.x << "\ncenter_y = " << c.grid.center.y
    << "\ncenter_z = " << c.grid.center.z << "\nhalf_width = " << c.grid.half_width
    << "\ncells_per_axis = " << c.grid.cells_per_axis << "\n\n[time]\ndt = " << c.dt << "\nt_end = " << c.t_end
    << "\ncfl_safety = " << c.cfl_safety << "\n\n[data]\nA_f = " << c.data.A_f << "\nR_x = " << c.data.R_x
    << "\nR_p = " << c.data.R_p << "\nA_phi = " << c.data.A_phi << "\nR_phi = " << c.data.R_phi
    << "\nA_pi = " << c.data.A_pi << "\nR_pi = " << c.data.R_pi;
  auto vec = [&](const char* name, const Vec3& v) {
    o << "\n" << name << "_x = " << v.x << "\n" << name << "_y = " << v.y << "\n" << name << "_z = " << v.z;
  };
  vec("offset_f", c.data.offset_f);
  vec("offset_phi", c.data.offset_phi);
  vec("offset_pi", c.data.offset_pi);
  o << "\n\n[sampling]\nnx_per_axis = " << c.sampling.nx_per_axis << "\nnp_per_axis = " << c.sampling.np_per_axis
    << "\n\n[history]\nstride = " << c.history_stride << "\n\n[output]\ndir = " << c.output.dir
    << "\ndiagnostics = " << c.output.diagnostics << "\ndiagnostics_every = " << c.output.diagnostics_every
    << "\nsnapshot_every = " << c.output.snapshot_every << "\n\n[run]\nseed = " << c.seed << "\n";
  return o.str();
}

}  // namespace nordvlas
