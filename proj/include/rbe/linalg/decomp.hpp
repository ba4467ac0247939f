#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rbe/linalg/matrix.hpp"

namespace rbe {

struct LinalgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a Cholesky pivot is not positive.
struct NotPositiveDefinite : LinalgError {
  using LinalgError::LinalgError;
};

/// The QL sweep on the tridiagonal form hit its iteration cap.
struct ConvergenceError : LinalgError {
  ConvergenceError(std::size_t dim, std::size_t index, std::size_t iterations);
  std::size_t dim;
  std::size_t index;
  std::size_t iterations;
};

struct IndefiniteMatrix : LinalgError {
  using LinalgError::LinalgError;
};

/// D x = b has no solution (x = 0, b != 0).
struct InfeasibleMap : LinalgError {
  using LinalgError::LinalgError;
};

struct EigResult {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column i pairs with values[i]
};

/// Full spectral decomposition: Householder reduction to real tridiagonal
/// form followed by implicit-shift QL. Each eigenvector is phase-normalized so
/// its largest-magnitude entry is real positive.
EigResult hermitian_eig(const HermitianMatrix& m);

/// Lower-triangular L with N = L L^*.
ComplexMatrix cholesky(const HermitianMatrix& n);

struct PencilMin {
  double value = 0.0;
  Vector vector;  // unit 2-norm
};

/// Smallest eigenpair of M v = lambda N v with N positive definite.
PencilMin definite_pencil_smallest(const HermitianMatrix& m, const HermitianMatrix& n);

/// min of (v^*Mv)/(v^*Nv) over v with v^*Nv > 0, for M, N positive
/// semidefinite. Directions where N is numerically zero (eigenvalue below
/// tol * max(1, ||N||_1)) are eliminated through the Schur complement of M.
/// Throws InfeasibleMap when N is numerically zero.
PencilMin semidefinite_pencil_smallest(const HermitianMatrix& m, const HermitianMatrix& n,
                                       double tol = 1e-10);

/// Orthonormal basis of {v : Mv = 0} for M positive semidefinite, using the
/// eigenvalue threshold tol * max(1, ||M||_1). May have zero columns.
ComplexMatrix psd_nullspace(const HermitianMatrix& m, double tol = 1e-10);

/// Minimal-Frobenius-norm D with D x = b, i.e. b x^* / ||x||^2.
ComplexMatrix min_frobenius_map(std::span<const cplx> x, std::span<const cplx> b);

struct SingularTriplet {
  double sigma = 0.0;
  Vector right;  // unit vector v with ||M v|| = sigma
};

/// Smallest singular value of a square matrix, from the Hermitian dilation
/// [[0, M], [M^*, 0]] so that small values keep absolute accuracy eps ||M||.
SingularTriplet smallest_singular_triplet(const ComplexMatrix& m);
double smallest_singular_value(const ComplexMatrix& m);

}  // namespace rbe
