#pragma once

#include <stdexcept>
#include <string>

namespace synccert {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGraph : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Parameters outside the admissible region of a certificate (e.g. theta3 bounds,
// positive nu, empty sample set).
class InadmissibleParams : public Error {
 public:
  using Error::Error;
};

// A gain bound was requested from a certificate whose mu_lo is not positive.
class Uncertified : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class BlowUp : public Error {
 public:
  BlowUp(double t, const std::string& what) : Error(what), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

// Schema violation in a JSON document; `pointer` is a JSON pointer to the offending node.
class ConfigError : public Error {
 public:
  ConfigError(std::string pointer, const std::string& what)
      : Error(pointer.empty() ? what : pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace synccert
