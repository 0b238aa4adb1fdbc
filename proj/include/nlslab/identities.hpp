#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nlslab/grid.hpp"

namespace nlslab {

enum class IdentityStatus { Pass, Degraded, Fail };

std::string to_string(IdentityStatus s);

struct IdentityCheck {
  std::string name;
  double half_length = 0.0;
  std::size_t n = 0;
  double measured = 0.0;
  double expected = 0.0;
  /// Absolute unless relative is set.
  double tolerance = 0.0;
  bool relative = false;
  /// Where the expected value comes from: "closed_form", "quadrature" or "exact_identity".
  std::string oracle;
  IdentityStatus status = IdentityStatus::Pass;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool all_pass() const;
  nlohmann::json to_json() const;
};

/// Default resolutions: L = 32 with n = 1024 and n = 2048.
std::vector<GridPtr> default_identity_grids();

/// Static identities (no evolution) on each grid: ground-state ODE residual,
/// Pohozaev, the gradient / L6 relation, the four ground-state constants,
/// GN saturation, the L_+ / L_- kernel relations, the lowest L_+ eigenpair and
/// the diagonal Jacobian entries. A grid whose ODE residual misses tolerance
/// is under-resolved: its ODE check fails and any other miss is Degraded.
/// Dense eigen-solves use at most 1024 points of the same box.
IdentityReport check_identities(const std::vector<GridPtr>& grids = default_identity_grids());

}  // namespace nlslab
