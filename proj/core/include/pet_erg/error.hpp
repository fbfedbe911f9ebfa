#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace pet_erg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid scenario or parameter record (bad key, violated invariant).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The auxiliary reference left its admissible region (c <= delta), so the
/// repulsive potential is undefined. Carries the simulation time when known.
class BoundaryEscape : public Error {
 public:
  explicit BoundaryEscape(const std::string& what,
                          double t = std::numeric_limits<double>::quiet_NaN())
      : Error(what), time_(t) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace pet_erg
