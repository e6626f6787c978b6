#pragma once

#include "wavemap/evolution.hpp"
#include "wavemap/hyp_infty.hpp"
#include "wavemap/profiles.hpp"
#include "wavemap/slp.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wavemap::cli {

enum class Command { profile, spectrum, spectrum_infty, evolve, verify_table1 };

std::string to_string(Command c);
Command command_from_string(const std::string& s);

struct Tolerances {
  double ode_rel = 1e-12;
  double ode_abs = 1e-14;
  /// Newton tolerance of the profile matching.
  double match_tol = 1e-12;
  /// Relative tolerance of eigenvalue refinement.
  double eig_tol = 1e-13;
};

struct GridConfig {
  int size = 2048;
  double delta = 1e-3;
  double eps = 1e-6;
  int series_order = 8;
};

struct SpectrumConfig {
  double mu_max = 2e4;
  int count = 3;
  bool direct = false;
  /// Profile document to read instead of shooting; empty to shoot.
  std::string profile_path;
};

struct EvolveConfig {
  /// zero, eigenmode, gauge or random
  std::string seed = "eigenmode";
  int j = 1;
  bool growing = true;
  double sigma_max = 0.0;
  double interval = 0.0;
  std::uint64_t random_seed = 1;
  std::vector<double> snapshots;
};

struct OutputConfig {
  /// "-" writes to stdout.
  std::string path = "-";
  /// json or csv
  std::string format = "json";
};

struct RunConfig {
  Command command = Command::spectrum;
  int n = 1;
  int ell = 1;
  Tolerances tolerances;
  GridConfig grid;
  SpectrumConfig spectrum;
  EvolveConfig evolve;
  OutputConfig output;

  /// Profiles are integrated ten times tighter than the eigenvalue shooting.
  ProfileOptions profile_options() const;
  ShootingOptions shooting_options() const;
};

/// Throws InvalidArgument for any violated invariant.
void validate(const RunConfig& c);

/// Strict: unknown keys anywhere are rejected with InvalidArgument.
void apply_json(RunConfig& c, const std::string& text);
std::string to_json(const RunConfig& c);

}  // namespace wavemap::cli
