// Shared scalar/matrix aliases, tolerances and error types for the qsr library.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qsr {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Numerical tolerances used across the library. One record, so every
/// invariant check agrees on what "close" means.
struct Tolerances {
  double invariant = 1e-10;  // normalization, hermiticity, isometry residuals
  double derived = 1e-9;     // equalities that are computed two ways
  double eigen_clamp = 1e-12;  // eigenvalues below this count as zero
};

inline constexpr Tolerances kTolerances{};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Label clash, unknown label, or otherwise malformed layout.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// Dimensions that do not line up (map vs. targets, partition vs. system).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value that should satisfy an invariant (unit norm, unitarity, ...) does not.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Projection or construction produced a zero vector.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Requested computation would materialize more than the configured guard.
class GuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace qsr
