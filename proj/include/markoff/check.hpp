#pragma once

#include <stdexcept>
#include <string>

namespace markoff {

// Invariant check that survives NDEBUG; these guard algebraic identities the
// rest of a computation silently depends on.
inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::logic_error(what);
}

}  // namespace markoff
