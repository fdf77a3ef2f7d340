#pragma once

#include <stdexcept>
#include <string>

namespace logsurf {

// Breach of an internal invariant. Distinct from bad input: callers map
// this to its own exit status and never try to recover.
struct InternalError : std::runtime_error {
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace logsurf
