#pragma once

#include <stdexcept>
#include <string>

namespace permcycles {

/// A precondition on an argument was violated (n, r, d, t out of range, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured resource cap (support size, retry count, exact-mode size) was hit.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}
}  // namespace detail

}  // namespace permcycles
