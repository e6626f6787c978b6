#pragma once

// Versioned JSON and CSV documents for profiles, eigenvalue lists and trajectories.

#include "wavemap/evolution.hpp"
#include "wavemap/profiles.hpp"
#include "wavemap/slp.hpp"

#include <span>
#include <string>
#include <vector>

namespace wavemap {

inline constexpr int schema_version = 1;

/// {schema_version, kind: "profile", n, ell, b, c, tol, closed_form, mesh[], f[], fprime[]}
std::string profile_to_json(const Profile& p);

/// Rebuilds the profile from (n, ell, b, c) and checks it against the stored
/// samples. Throws IoError on schema mismatch, missing fields, a constant
/// pi/2 profile, or samples that disagree with the rebuilt profile.
Profile profile_from_json(const std::string& text);

/// Columns n, ell, j, lambda, mu, residual; n is "inf" for A_infinity.
std::string eigenvalues_to_csv(std::span<const EigenvalueRecord> records);
std::string eigenvalues_to_json(std::span<const EigenvalueRecord> records);
/// Reads the CSV written above; eigenfunctions are not restored.
std::vector<EigenvalueRecord> eigenvalues_from_csv(const std::string& text);

/// Columns sigma, h_norm, energy, rate; rate is the least-squares slope of
/// log h_norm over the states so far (nan for the first two).
std::string trajectory_to_csv(std::span<const EvolutionState> traj);
/// Summary rows plus full snapshots at the states closest to the requested sigmas.
std::string trajectory_to_json(std::span<const EvolutionState> traj, std::span<const double> snapshot_sigmas = {});

std::string read_text_file(const std::string& path);
/// Throws IoError when the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace wavemap
