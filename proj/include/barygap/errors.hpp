#pragma once

#include <stdexcept>
#include <string>

namespace barygap {

// Bad arguments or malformed inputs. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration or LP size guard was exceeded. The CLI maps this to exit code 3.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solver stopped before certifying its tolerance. Carries the
// best certified bracket [lower, upper] on the optimum.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double lower, double upper)
      : std::runtime_error(what), lower_(lower), upper_(upper) {}
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

}  // namespace barygap
