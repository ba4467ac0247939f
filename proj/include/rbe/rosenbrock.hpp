#pragma once

#include <vector>

#include "rbe/linalg/matrix.hpp"

namespace rbe {

/// S(z) = [[A - z I_r, B], [C, P(z)]] with P(z) = sum_j z^j A_j.
class RosenbrockSystem {
 public:
  RosenbrockSystem() = default;
  /// Throws std::invalid_argument on inconsistent dimensions or an empty
  /// coefficient list.
  RosenbrockSystem(ComplexMatrix a, ComplexMatrix b, ComplexMatrix c, std::vector<ComplexMatrix> poly);

  std::size_t r() const { return a_.rows(); }
  std::size_t n() const { return c_.rows(); }
  std::size_t d() const { return poly_.size() - 1; }

  const ComplexMatrix& A() const { return a_; }
  const ComplexMatrix& B() const { return b_; }
  const ComplexMatrix& C() const { return c_; }
  const std::vector<ComplexMatrix>& poly() const { return poly_; }

  friend bool operator==(const RosenbrockSystem&, const RosenbrockSystem&) = default;

 private:
  ComplexMatrix a_, b_, c_;
  std::vector<ComplexMatrix> poly_;
};

/// P(z) by Horner's scheme.
ComplexMatrix evaluate_poly(const RosenbrockSystem& sys, cplx z);
ComplexMatrix evaluate(const RosenbrockSystem& sys, cplx z);

/// sqrt(||A||_F^2 + ||B||_F^2 + ||C||_F^2 + sum_j ||A_j||_F^2)
double system_norm(const RosenbrockSystem& sys);

/// (A^T, C^T, B^T, A_j^T): S_hat(z) = S(z)^T.
RosenbrockSystem transpose_system(const RosenbrockSystem& sys);

struct ErrorMatrices {
  HermitianMatrix G1, G2, H1, H2;
  double gamma = 1.0;
  cplx lambda;
  std::size_t r = 0;
  std::size_t n = 0;
};

double gamma_of(cplx lambda, std::size_t d);

ErrorMatrices assemble_error_matrices(const RosenbrockSystem& sys, cplx lambda);

}  // namespace rbe
