#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace corrbound {

using Complex = std::complex<double>;

// Square complex matrix, row-major. Carrier for every operator and state
// in the library (local observables, assembled sums, density matrices).
using CMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: shape mismatch, non-Hermitian data, index out of range.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Requested tensor space exceeds the configured dimension cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Numerical failure: eigensolver did not converge, consistency check tripped.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Global numeric policy. Mutated only at startup (CLI flag handling);
// all library functions read it.
struct NumericPolicy {
  // Entrywise tolerance for accepting a matrix as Hermitian. Inputs that
  // pass are symmetrized, so downstream math sees exactly Hermitian data.
  double hermiticity_tol = 1e-10;
  // Eigenvalues below this are treated as zero inside logarithms.
  double log_clamp = 1e-14;
  // Cap on the full tensor-space dimension.
  Index max_dim = 4096;
};

NumericPolicy& numeric_policy();

}  // namespace corrbound
