#pragma once

#include <stdexcept>
#include <string>

namespace pcsf {

/// Base of every error raised by the library. `exit_code` is what the CLI
/// returns for it.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const { return 1; }
  virtual const char* kind() const { return "error"; }
};

class ValidationError : public Error {
public:
  using Error::Error;
  int exit_code() const override { return 2; }
  const char* kind() const override { return "validation"; }
};

class ScaleCapError : public Error {
public:
  using Error::Error;
  int exit_code() const override { return 3; }
  const char* kind() const override { return "scale_cap"; }
};

class InfeasibleError : public Error {
public:
  using Error::Error;
  int exit_code() const override { return 4; }
  const char* kind() const override { return "infeasible"; }
};

}  // namespace pcsf
