#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fermigp {

// Bad arguments: wrong dimension, out-of-range sizes, malformed config.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Data that cannot come from a physical state (negative radicand, non-PSD rho).
class UnphysicalInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A function sample came back non-finite. `where` holds the offending
// argument (momentum components, or the single lambda for derivatives).
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::vector<double> where)
      : std::runtime_error(what), where_(std::move(where)) {}
  const std::vector<double>& where() const noexcept { return where_; }

 private:
  std::vector<double> where_;
};

}  // namespace fermigp
