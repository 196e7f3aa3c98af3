#pragma once

#include <stdexcept>
#include <string>

namespace ebprior {

/// Bad input: shapes, ranges, malformed files, unknown config keys.
/// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical invariant broke at run time (non-finite model output, zero
/// normalizer, failed chain initialization). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ebprior
