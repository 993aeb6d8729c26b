#pragma once

#include <stdexcept>
#include <string>

namespace roughscl {

// A computation left its mathematical domain (a recursion fails to
// terminate, a CFL condition is violated, ...). Kept distinct from argument
// validation so callers can map it to a dedicated exit code.
struct MathDomainError : std::runtime_error {
  explicit MathDomainError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace roughscl
