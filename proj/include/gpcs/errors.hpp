#ifndef GPCS_ERRORS_HPP
#define GPCS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gpcs {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

struct NotPositiveDefinite : Error {
  explicit NotPositiveDefinite(const std::string& what) : Error(what) {}
};

struct EmptyGrid : Error {
  explicit EmptyGrid(const std::string& what) : Error(what) {}
};

struct NegativeGamma : Error {
  explicit NegativeGamma(const std::string& what) : Error(what) {}
};

struct GridMismatch : Error {
  explicit GridMismatch(const std::string& what) : Error(what) {}
};

// The density at mu_c is already below the confidence threshold; callers
// must surface this, never clamp the radius.
struct EmptyConfidenceSet : Error {
  explicit EmptyConfidenceSet(const std::string& what) : Error(what) {}
};

struct NonFiniteAcquisition : Error {
  explicit NonFiniteAcquisition(const std::string& what) : Error(what) {}
};

struct OutOfDomain : Error {
  explicit OutOfDomain(const std::string& what) : Error(what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace gpcs

#endif  // GPCS_ERRORS_HPP
