#ifndef SLICEOP_ERRORS_HPP
#define SLICEOP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sliceop {

/// A numerical procedure failed to reach its guaranteed accuracy
/// (non-convergent bootstrap, breakdown in a lift, singular solve, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A persisted coefficient file failed its checksum or descriptor check.
class CorruptCacheError : public std::runtime_error {
 public:
  explicit CorruptCacheError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sliceop

#endif
