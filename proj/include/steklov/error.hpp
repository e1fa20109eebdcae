#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace steklov {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on a numeric argument was violated (negative radius, h outside the tube, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Cholesky met a non-positive pivot; `index` is the row where it happened.
class NotPositiveDefinite : public Error {
public:
  NotPositiveDefinite(std::size_t index, double pivot)
      : Error("matrix is not positive definite: pivot " + std::to_string(pivot) + " at row " +
              std::to_string(index)),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

/// The radial ODE integrator could not reach the requested endpoint.
class IntegrationError : public Error {
public:
  using Error::Error;
};

/// Iterative eigen-solver exhausted its sweep budget.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// Mesh construction or mesh-dependent assembly failed.
class MeshError : public Error {
public:
  using Error::Error;
};

}  // namespace steklov
