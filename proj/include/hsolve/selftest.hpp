#pragma once

#include <string>
#include <vector>

namespace hsolve {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick runtime invariant checks (seconds): assembly symmetry, partition of
/// unity, projector identities, Krylov termination, RAS order independence.
std::vector<CheckResult> run_selftest();

}  // namespace hsolve
