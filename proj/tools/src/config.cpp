#include "config.hpp"

#include "wavemap/error.hpp"

#include <nlohmann/json.hpp>

#include <set>

namespace wavemap::cli {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw InvalidArgument("config: '" + where + "' must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw InvalidArgument("config: unknown key '" + (where.empty() ? k : where + "." + k) + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument("config: bad type for '" + (where.empty() ? std::string(key) : where + "." + key) + "'");
  }
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::profile: return "profile";
    case Command::spectrum: return "spectrum";
    case Command::spectrum_infty: return "spectrum-infty";
    case Command::evolve: return "evolve";
    case Command::verify_table1: return "verify-table1";
  }
  return "?";
}

Command command_from_string(const std::string& s) {
  for (auto c : {Command::profile, Command::spectrum, Command::spectrum_infty, Command::evolve, Command::verify_table1}) {
    if (to_string(c) == s) return c;
  }
  throw InvalidArgument("config: unknown command '" + s + "'");
}

ProfileOptions RunConfig::profile_options() const {
  ProfileOptions o;
  o.eps = grid.eps;
  o.series_order = grid.series_order;
  o.ode_rel_tol = 0.1 * tolerances.ode_rel;
  o.ode_abs_tol = 0.1 * tolerances.ode_abs;
  return o;
}

ShootingOptions RunConfig::shooting_options() const {
  ShootingOptions o;
  o.eps = grid.eps;
  o.series_order = grid.series_order;
  o.rel_tol = tolerances.ode_rel;
  o.abs_tol = tolerances.ode_abs;
  o.root_tol = tolerances.eig_tol;
  return o;
}

void validate(const RunConfig& c) {
  const auto& t = c.tolerances;
  if (!(t.ode_rel > 0.0 && t.ode_abs > 0.0 && t.match_tol > 0.0 && t.eig_tol > 0.0)) {
    throw InvalidArgument("config: all tolerances must be positive");
  }
  if (c.n < 0) throw InvalidArgument("config: n must be >= 0");
  if (c.ell < 1) throw InvalidArgument("config: ell must be >= 1");
  if (c.grid.size < 128) throw InvalidArgument("config: grid.size must be >= 128");
  if (!(c.grid.delta > 0.0 && c.grid.delta < 0.1)) throw InvalidArgument("config: grid.delta must lie in (0, 0.1)");
  if (!(c.grid.eps > 0.0 && c.grid.eps < 0.05)) throw InvalidArgument("config: grid.eps must lie in (0, 0.05)");
  if (c.grid.series_order < 1) throw InvalidArgument("config: grid.series_order must be >= 1");
  if (!(c.spectrum.mu_max > 0.5)) throw InvalidArgument("config: spectrum.mu_max must exceed 0.5");
  if (c.spectrum.count < 1) throw InvalidArgument("config: spectrum.count must be >= 1");
  static const std::set<std::string> seeds{"zero", "eigenmode", "gauge", "random"};
  if (!seeds.count(c.evolve.seed)) throw InvalidArgument("config: evolve.seed must be zero, eigenmode, gauge or random");
  if (c.evolve.j < 1) throw InvalidArgument("config: evolve.j must be >= 1");
  if (c.evolve.sigma_max < 0.0 || c.evolve.interval < 0.0) {
    throw InvalidArgument("config: evolve.sigma_max and evolve.interval must be nonnegative (0 selects a default)");
  }
  if (c.output.format != "json" && c.output.format != "csv") throw InvalidArgument("config: output.format must be json or csv");
  if (c.output.path.empty()) throw InvalidArgument("config: output.path must not be empty");
  if (c.command == Command::spectrum_infty && c.ell != 1) {
    throw InvalidArgument("config: spectrum-infty exists for ell = 1 only");
  }
}

void apply_json(RunConfig& c, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: not valid JSON: ") + e.what());
  }
  only_keys(j, "", {"schema_version", "command", "n", "ell", "tolerances", "grid", "spectrum", "evolve", "output"});
  if (j.contains("schema_version") && j["schema_version"] != 1) throw InvalidArgument("config: unsupported schema_version");
  if (j.contains("command")) {
    std::string s;
    read(j, "command", s, "");
    c.command = command_from_string(s);
  }
  read(j, "n", c.n, "");
  read(j, "ell", c.ell, "");
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    only_keys(t, "tolerances", {"ode_rel", "ode_abs", "match_tol", "eig_tol"});
    read(t, "ode_rel", c.tolerances.ode_rel, "tolerances");
    read(t, "ode_abs", c.tolerances.ode_abs, "tolerances");
    read(t, "match_tol", c.tolerances.match_tol, "tolerances");
    read(t, "eig_tol", c.tolerances.eig_tol, "tolerances");
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    only_keys(g, "grid", {"size", "delta", "eps", "series_order"});
    read(g, "size", c.grid.size, "grid");
    read(g, "delta", c.grid.delta, "grid");
    read(g, "eps", c.grid.eps, "grid");
    read(g, "series_order", c.grid.series_order, "grid");
  }
  if (j.contains("spectrum")) {
    const auto& s = j["spectrum"];
    only_keys(s, "spectrum", {"mu_max", "count", "direct", "profile_path"});
    read(s, "mu_max", c.spectrum.mu_max, "spectrum");
    read(s, "count", c.spectrum.count, "spectrum");
    read(s, "direct", c.spectrum.direct, "spectrum");
    read(s, "profile_path", c.spectrum.profile_path, "spectrum");
  }
  if (j.contains("evolve")) {
    const auto& e = j["evolve"];
    only_keys(e, "evolve", {"seed", "j", "growing", "sigma_max", "interval", "random_seed", "snapshots"});
    read(e, "seed", c.evolve.seed, "evolve");
    read(e, "j", c.evolve.j, "evolve");
    read(e, "growing", c.evolve.growing, "evolve");
    read(e, "sigma_max", c.evolve.sigma_max, "evolve");
    read(e, "interval", c.evolve.interval, "evolve");
    read(e, "random_seed", c.evolve.random_seed, "evolve");
    read(e, "snapshots", c.evolve.snapshots, "evolve");
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    only_keys(o, "output", {"path", "format"});
    read(o, "path", c.output.path, "output");
    read(o, "format", c.output.format, "output");
  }
}

std::string to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = 1;
  j["command"] = to_string(c.command);
  j["n"] = c.n;
  j["ell"] = c.ell;
  j["tolerances"] = {{"ode_rel", c.tolerances.ode_rel},
                     {"ode_abs", c.tolerances.ode_abs},
                     {"match_tol", c.tolerances.match_tol},
                     {"eig_tol", c.tolerances.eig_tol}};
  j["grid"] = {{"size", c.grid.size}, {"delta", c.grid.delta}, {"eps", c.grid.eps}, {"series_order", c.grid.series_order}};
  j["spectrum"] = {{"mu_max", c.spectrum.mu_max},
                   {"count", c.spectrum.count},
                   {"direct", c.spectrum.direct},
                   {"profile_path", c.spectrum.profile_path}};
  j["evolve"] = {{"seed", c.evolve.seed},
                 {"j", c.evolve.j},
                 {"growing", c.evolve.growing},
                 {"sigma_max", c.evolve.sigma_max},
                 {"interval", c.evolve.interval},
                 {"random_seed", c.evolve.random_seed},
                 {"snapshots", c.evolve.snapshots}};
  j["output"] = {{"path", c.output.path}, {"format", c.output.format}};
  return j.dump(2);
}

}  // namespace wavemap::cli
