#pragma once

#include <stdexcept>
#include <string>

namespace hlskit {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: non-square tables, unknown ids, nonpositive lengths,
/// non-bijective maps. Distinct from axiom violations, which are reported,
/// not thrown.
class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& what) : Error(what) {}
};

}  // namespace hlskit
