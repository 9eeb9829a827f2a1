#pragma once

#include <stdexcept>
#include <string>

namespace collective {

/// Raised when an operation receives arguments outside its domain.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a network/mask combination cannot support the requested
/// computation (e.g. inactive citizens with no path to any active one).
class StructuralError : public std::runtime_error {
 public:
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ParameterError(message);
}

}  // namespace detail

}  // namespace collective
