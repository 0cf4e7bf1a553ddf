#pragma once

#include <stdexcept>
#include <string>

namespace pdlab {

// Exit codes reported by the CLI front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 64,      // bad flags / malformed input files
  kExitBudget = 65,     // enumeration or size budget exceeded
  kExitInternal = 70,   // broken internal invariant
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace pdlab
