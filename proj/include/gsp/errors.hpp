#pragma once

#include <stdexcept>

namespace gsp {

/// Malformed graphs, weights, option values or file contents.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point (or support) for which G_p + E diag(x) E^T is not positive
/// definite; the Cholesky factorization is the arbiter.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical kernel could not produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gsp
