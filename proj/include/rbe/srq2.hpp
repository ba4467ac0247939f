#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "rbe/linalg/decomp.hpp"

namespace rbe {

using MatrixTriple = std::array<HermitianMatrix, 3>;

/// Coefficients of g(y) = y1/(alpha1 + beta1 y3) + y2/(alpha2 + beta2 y3).
struct GParams {
  double alpha1 = 1.0;
  double beta1 = 0.0;
  double alpha2 = 1.0;
  double beta2 = 0.0;

  friend bool operator==(const GParams&, const GParams&) = default;
};

/// min over unit x of  x^*A1x / x^*(a1 I + b1 A3)x  +  x^*A2x / x^*(a2 I + b2 A3)x.
class Srq2Problem {
 public:
  /// Throws std::invalid_argument when dimensions differ, a matrix is empty,
  /// or A_i, A3, alpha_i I + beta_i A3 fail positive semidefiniteness at
  /// relative tolerance 1e-12.
  Srq2Problem(MatrixTriple m, GParams p);

  std::size_t dim() const { return m_[0].dim(); }
  const MatrixTriple& matrices() const { return m_; }
  const HermitianMatrix& A(std::size_t i) const { return m_[i]; }
  const GParams& params() const { return p_; }
  double alpha(std::size_t i) const { return i == 0 ? p_.alpha1 : p_.alpha2; }
  double beta(std::size_t i) const { return i == 0 ? p_.beta1 : p_.beta2; }
  /// alpha_i I + beta_i A3 for i = 0, 1.
  const HermitianMatrix& denominator(std::size_t i) const { return den_[i]; }
  /// Zero threshold shared by numerator and denominator of quotient i.
  double eps(std::size_t i) const { return eps_[i]; }
  /// (alpha1 I + beta1 A3) + (alpha2 I + beta2 A3) is positive definite.
  bool common_null_ok() const { return comnull_; }

 private:
  MatrixTriple m_;
  GParams p_;
  std::array<HermitianMatrix, 2> den_;
  std::array<double, 2> eps_{};
  bool comnull_ = false;
};

/// Sum of the two quotients with 0/0 := 0 and c/0 := +inf. Homogeneous of
/// degree zero, so x need not be normalized.
double objective(const Srq2Problem& prob, std::span<const cplx> x);

/// Both denominators exceed their thresholds at x.
bool is_differentiable(const Srq2Problem& prob, std::span<const cplx> x);

/// H(x) for unit x; throws std::domain_error at a non-differentiable point.
HermitianMatrix nepv_matrix(const Srq2Problem& prob, std::span<const cplx> x);

/// ||H x - s x|| / (||H||_1 + 1) with s = x^*Hx.
double nepv_residual(const HermitianMatrix& h, std::span<const cplx> x);

enum class SolutionSource { SCF, NONDIFF_1, NONDIFF_2 };

struct Srq2Solution {
  Vector x;
  double value = 0.0;
  // absent for candidates from the non-differentiable search
  std::optional<double> nepvResidual;
  std::optional<double> smallestEigGap;  // x^*H(x)x - lambda_min(H(x))
  std::size_t iterations = 0;
  std::vector<double> shiftsUsed;
  SolutionSource source = SolutionSource::SCF;
  bool converged = false;
};

struct ScfOptions {
  std::size_t maxIter = 200;
  double tol = 1e-10;
  std::size_t maxShiftTries = 40;
};

/// Level-shifted SCF: x_{k+1} is the smallest eigenvector of
/// H(x_k) + sigma_k (I - x_k x_k^*), with sigma_k tried as 0, 2 delta_k, 4 delta_k, ...
/// until the objective or the NEPv residual decreases. Returns the converged
/// iterate, or the best iterate seen with converged = false.
Srq2Solution scf_solve(const Srq2Problem& prob, std::span<const cplx> x0, const ScfOptions& opts = {});

/// Minimizers over the null space of Q_i = A_i + alpha_i I + beta_i A3 where the
/// i-th quotient is 0/0. Throws std::invalid_argument when the common-null
/// condition fails.
std::vector<Srq2Solution> nondiff_candidates(const Srq2Problem& prob);

struct SolveOptions {
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
  ScfOptions scf;
};

/// SCF from seeded random starts and both single-quotient minimizers, merged
/// with nondiff_candidates; returns the candidate with the smallest objective.
Srq2Solution solve(const Srq2Problem& prob, const SolveOptions& opts = {});

/// Minimum of the objective over `budget` seeded random unit vectors, each
/// polished by projected gradient descent with Armijo backtracking.
double brute_force_oracle(const Srq2Problem& prob, std::size_t budget, std::uint64_t seed);

/// Seeded complex-normal unit vector.
Vector random_unit_vector(std::size_t n, std::uint64_t seed);

const char* to_string(SolutionSource s);

}  // namespace rbe
