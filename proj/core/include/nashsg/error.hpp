#pragma once

#include <stdexcept>
#include <string>

namespace nashsg {

/// Vector or block lengths that do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A precondition on a scalar argument (radius, step, budget, ...) failed.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An analytic oracle the caller asked for is not provided by the model.
class MissingOracle : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A sample budget ran out before the requested work was done.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nashsg
