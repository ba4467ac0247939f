#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "rbe/backward_error.hpp"
#include "rbe/rosenbrock.hpp"
#include "rbe/srq2.hpp"

namespace rbe::testing {

/// Formulation of eta^2 on the original system for the patterns that the library
/// computes through the transposed system, built from the row equations directly.
/// C is a quotient restricted to null(G1); the others are unconstrained SRQ2.
inline Srq2Problem direct_formulation(const ErrorMatrices& em, const PerturbationPattern& p) {
  const std::string s = p.str();
  const std::size_t dim = em.r + em.n;
  const HermitianMatrix zero = HermitianMatrix::zeros(dim);
  if (s == "C") {
    const ComplexMatrix u = psd_nullspace(em.G1);
    return Srq2Problem({em.G2.congruence(u), HermitianMatrix::zeros(u.cols()), em.H1.congruence(u)}, {0, 1, 1, 0});
  }
  if (s == "AC") return Srq2Problem({em.G1 + em.G2, zero, em.H1}, {0, 1, 1, 0});
  if (s == "BP") return Srq2Problem({em.G1 + (1.0 / em.gamma) * em.G2, zero, em.H2}, {0, 1, 1, 0});
  if (s == "ACP") return Srq2Problem({em.G1, em.G2, em.H2}, {1, -1, 1, em.gamma - 1});
  throw std::invalid_argument("no direct formulation for " + s);
}

/// sqrt of the brute-force minimum of the direct formulation.
inline double direct_eta(const RosenbrockSystem& sys, cplx lambda, const PerturbationPattern& p, std::size_t budget,
                         std::uint64_t seed) {
  const Srq2Problem prob = direct_formulation(assemble_error_matrices(sys, lambda), p);
  return std::sqrt(brute_force_oracle(prob, budget, seed));
}

}  // namespace rbe::testing
