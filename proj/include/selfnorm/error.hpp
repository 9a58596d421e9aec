#pragma once

#include <stdexcept>
#include <string>

namespace selfnorm {

/// Raised when an argument lies outside the domain of a rate, bound or model.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when the data cannot support the requested statistic
/// (zero design energy, constant sample, ...).
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed or inconsistent experiment configurations and input files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace selfnorm
