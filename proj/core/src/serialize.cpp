#include "wavemap/serialize.hpp"

#include "wavemap/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace wavemap {

using nlohmann::json;

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw IoError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IoError(std::string("bad field '") + key + "': " + e.what());
  }
}

void check_header(const json& j, const char* kind) {
  if (!j.is_object()) throw IoError("document is not a JSON object");
  if (field<int>(j, "schema_version") != schema_version) {
    throw IoError("unsupported schema_version " + std::to_string(field<int>(j, "schema_version")));
  }
  if (field<std::string>(j, "kind") != kind) throw IoError(std::string("expected a document of kind '") + kind + "'");
}

json record_json(const EigenvalueRecord& r) {
  json o;
  o["n"] = r.n < 0 ? json("inf") : json(r.n);
  o["ell"] = r.ell;
  o["j"] = r.j;
  o["lambda"] = r.lambda;
  o["mu"] = r.mu;
  o["residual"] = r.wronskian_residual;
  return o;
}

double running_rate(std::span<const EvolutionState> traj, std::size_t upto) {
  if (upto < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i <= upto; ++i) {
    if (!(traj[i].h_norm > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double x = traj[i].sigma, y = std::log(traj[i].h_norm);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double k = static_cast<double>(upto + 1);
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace

std::string profile_to_json(const Profile& p) {
  json j;
  j["schema_version"] = schema_version;
  j["kind"] = "profile";
  j["n"] = p.n();
  j["ell"] = p.ell();
  j["b"] = p.b();
  j["c"] = p.c();
  j["tol"] = p.tol();
  j["closed_form"] = p.is_closed_form();
  std::vector<double> mesh = p.mesh(), f, df;
  for (double r : mesh) {
    f.push_back(p.evaluate(r));
    df.push_back(p.evaluate_derivative(r));
  }
  j["mesh"] = mesh;
  j["f"] = f;
  j["fprime"] = df;
  return j.dump(2);
}

Profile profile_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("profile document is not valid JSON: ") + e.what());
  }
  check_header(j, "profile");
  const int n = field<int>(j, "n"), ell = field<int>(j, "ell");
  const double b = field<double>(j, "b"), c = field<double>(j, "c"), tol = field<double>(j, "tol");
  const bool closed = j.value("closed_form", false);
  const auto mesh = field<std::vector<double>>(j, "mesh");
  const auto f = field<std::vector<double>>(j, "f");
  if (n < 0 || ell < 1) throw IoError("profile document: need n >= 0 and ell >= 1");
  if (mesh.size() != f.size() || mesh.size() < 2) throw IoError("profile document: mesh and f differ in length");
  bool constant = true;
  for (double v : f) constant = constant && std::abs(v - 0.5 * std::numbers::pi) < 1e-12;
  if (constant) throw IoError("profile document: constant pi/2 is the singular solution, not a profile");

  Profile p = [&] {
    if (closed) {
      if (n != 0 || ell != 1) throw IoError("profile document: closed form exists only for n = 0, ell = 1");
      return profile_closed_form_f0();
    }
    try {
      return Profile::from_parameters(n, ell, b, c, tol);
    } catch (const Error& e) {
      throw IoError(std::string("profile document: cannot rebuild profile: ") + e.what());
    }
  }();
  double worst = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (!(mesh[i] >= 0.0 && mesh[i] <= 1.0)) throw IoError("profile document: mesh outside [0, 1]");
    worst = std::max(worst, std::abs(p.evaluate(mesh[i]) - f[i]));
  }
  if (worst > 1e-8) throw IoError("profile document: samples disagree with the rebuilt profile by " + num(worst));
  return p;
}

std::string eigenvalues_to_csv(std::span<const EigenvalueRecord> records) {
  std::ostringstream os;
  os << "n,ell,j,lambda,mu,residual\n";
  for (const auto& r : records) {
    os << (r.n < 0 ? std::string("inf") : std::to_string(r.n)) << ',' << r.ell << ',' << r.j << ',' << num(r.lambda)
       << ',' << num(r.mu) << ',' << num(r.wronskian_residual) << '\n';
  }
  return os.str();
}

std::string eigenvalues_to_json(std::span<const EigenvalueRecord> records) {
  json j;
  j["schema_version"] = schema_version;
  j["kind"] = "eigenvalues";
  j["records"] = json::array();
  for (const auto& r : records) j["records"].push_back(record_json(r));
  return j.dump(2);
}

std::vector<EigenvalueRecord> eigenvalues_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "n,ell,j,lambda,mu,residual") throw IoError("eigenvalue CSV: bad header");
  std::vector<EigenvalueRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell[6];
    for (auto& c : cell) {
      if (!std::getline(ls, c, ',')) throw IoError("eigenvalue CSV: short row '" + line + "'");
    }
    EigenvalueRecord r;
    try {
      r.n = cell[0] == "inf" ? -1 : std::stoi(cell[0]);
      r.ell = std::stoi(cell[1]);
      r.j = std::stoi(cell[2]);
      r.lambda = std::stod(cell[3]);
      r.mu = std::stod(cell[4]);
      r.wronskian_residual = std::stod(cell[5]);
    } catch (const std::exception&) {
      throw IoError("eigenvalue CSV: unparsable row '" + line + "'");
    }
    out.push_back(r);
  }
  return out;
}

std::string trajectory_to_csv(std::span<const EvolutionState> traj) {
  std::ostringstream os;
  os << "sigma,h_norm,energy,rate\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    os << num(traj[i].sigma) << ',' << num(traj[i].h_norm) << ',' << num(traj[i].energy) << ','
       << num(running_rate(traj, i)) << '\n';
  }
  return os.str();
}

std::string trajectory_to_json(std::span<const EvolutionState> traj, std::span<const double> snapshot_sigmas) {
  json j;
  j["schema_version"] = schema_version;
  j["kind"] = "trajectory";
  j["summary"] = json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double rate = running_rate(traj, i);
    j["summary"].push_back({{"sigma", traj[i].sigma},
                            {"h_norm", traj[i].h_norm},
                            {"energy", traj[i].energy},
                            {"rate", std::isnan(rate) ? json(nullptr) : json(rate)}});
  }
  j["snapshots"] = json::array();
  for (double s : snapshot_sigmas) {
    if (traj.empty()) break;
    std::size_t best = 0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
      if (std::abs(traj[i].sigma - s) < std::abs(traj[best].sigma - s)) best = i;
    }
    const auto& st = traj[best];
    j["snapshots"].push_back({{"sigma", st.sigma}, {"rho", st.grid}, {"u", st.u}, {"u_sigma", st.v}});
  }
  return j.dump(2);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace wavemap
