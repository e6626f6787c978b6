#include "wavemap/error.hpp"

namespace wavemap {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::integration_blow_up: return "integration_blow_up";
    case ErrorKind::profile_not_found: return "profile_not_found";
    case ErrorKind::newton_divergence: return "newton_divergence";
    case ErrorKind::unsupported_branch: return "unsupported_branch";
    case ErrorKind::mesh_too_coarse: return "mesh_too_coarse";
    case ErrorKind::gamma_pole: return "gamma_pole";
    case ErrorKind::not_symmetric: return "not_symmetric";
    case ErrorKind::evolution_aborted: return "evolution_aborted";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace wavemap
