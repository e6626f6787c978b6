#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wavemap {

enum class ErrorKind {
  invalid_argument,
  integration_blow_up,
  profile_not_found,
  newton_divergence,
  unsupported_branch,
  mesh_too_coarse,
  gamma_pole,
  not_symmetric,
  evolution_aborted,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base class of every exception thrown by the library. `kind()` is stable and
/// is what the command-line tool reports in its error record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorKind::invalid_argument, what) {}
};

/// Step size underflow: the trajectory runs into a singularity.
class IntegrationBlowUp : public Error {
 public:
  IntegrationBlowUp(const std::string& what, double position)
      : Error(ErrorKind::integration_blow_up, what), position_(position) {}
  double position() const noexcept { return position_; }

 private:
  double position_;
};

class ProfileNotFound : public Error {
 public:
  explicit ProfileNotFound(const std::string& what) : Error(ErrorKind::profile_not_found, what) {}
};

class NewtonDivergence : public Error {
 public:
  NewtonDivergence(const std::string& what, double b, double c, double residual)
      : Error(ErrorKind::newton_divergence, what), b_(b), c_(c), residual_(residual) {}
  double last_b() const noexcept { return b_; }
  double last_c() const noexcept { return c_; }
  double last_residual() const noexcept { return residual_; }

 private:
  double b_, c_, residual_;
};

class UnsupportedBranch : public Error {
 public:
  explicit UnsupportedBranch(const std::string& what) : Error(ErrorKind::unsupported_branch, what) {}
};

class MeshTooCoarse : public Error {
 public:
  MeshTooCoarse(const std::string& what, double where)
      : Error(ErrorKind::mesh_too_coarse, what), where_(where) {}
  /// Location of the uncertified cell; refine around it.
  double where() const noexcept { return where_; }

 private:
  double where_;
};

class GammaPole : public Error {
 public:
  explicit GammaPole(const std::string& what) : Error(ErrorKind::gamma_pole, what) {}
};

class NotSymmetric : public Error {
 public:
  NotSymmetric(const std::string& what, double defect)
      : Error(ErrorKind::not_symmetric, what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace wavemap
