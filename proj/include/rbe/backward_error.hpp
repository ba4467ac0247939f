#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbe/rosenbrock.hpp"
#include "rbe/srq2.hpp"

namespace rbe {

/// Nonempty subset of the blocks {A, B, C, P} that may be perturbed.
class PerturbationPattern {
 public:
  PerturbationPattern(bool a, bool b, bool c, bool p);

  /// Letters from "ABCP" in any order, no repeats; throws std::invalid_argument
  /// with the list of valid letters otherwise.
  static PerturbationPattern parse(std::string_view s);

  bool A() const { return a_; }
  bool B() const { return b_; }
  bool C() const { return c_; }
  bool P() const { return p_; }
  bool contains(const PerturbationPattern& other) const;
  /// Canonical spelling, letters in the order A, B, C, P.
  std::string str() const;

  friend bool operator==(const PerturbationPattern&, const PerturbationPattern&) = default;

 private:
  bool a_, b_, c_, p_;
};

/// All 15 patterns, ordered by size and then canonically.
std::vector<PerturbationPattern> all_patterns();

/// For C, AC, BP and ACP: the pattern handled on the transposed system
/// (B, AB, CP, ABP). nullopt for patterns computed directly.
std::optional<PerturbationPattern> transposed_image(const PerturbationPattern& p);

enum class Method { ZERO_EIGENVALUE, PENCIL, SRQ2, TRANSPOSED_PENCIL, TRANSPOSED_SRQ2 };
const char* to_string(Method m);

struct Certificate {
  double normMatch = 0.0;          // | |||dS||| - eta |
  double sigmaMinPerturbed = 0.0;  // sigma_min(S(lambda) - dS(lambda))
  std::optional<double> nepvResidual;
  std::optional<double> pencilResidual;
  bool normOk = false;
  bool sigmaOk = false;
  bool nepvOk = true;
  bool pencilOk = true;
  bool pass = false;
  std::string note;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct BackwardErrorResult {
  PerturbationPattern pattern{true, true, true, true};
  cplx lambda;
  double eta = 0.0;  // +inf when the pattern admits no perturbation
  Method method = Method::ZERO_EIGENVALUE;
  // Minimizer; for transposed methods it belongs to the transposed system.
  std::optional<Vector> x;
  bool transposed = false;
  // Block deltas (A, B, C, A_0..A_d) of the original system; absent when eta = inf.
  std::optional<RosenbrockSystem> perturbation;
  std::string witness;  // reason for eta = inf
  bool converged = true;
  std::size_t iterations = 0;
  std::optional<double> solverResidual;
  std::vector<double> shiftsUsed;
  Certificate certificate;
};

struct BackwardErrorOptions {
  SolveOptions srq2;
  double nullTol = 1e-10;
};

BackwardErrorResult backward_error(const RosenbrockSystem& sys, cplx lambda, const PerturbationPattern& pattern,
                                   const BackwardErrorOptions& opts = {});

/// The SRQ2 problem whose minimum is eta^2 for the patterns handled by SRQ2
/// without transposition: AP, BC, ABC, ABP, BCP, ABCP. nullopt otherwise.
std::optional<Srq2Problem> srq2_formulation(const ErrorMatrices& em, const PerturbationPattern& pattern);

/// Minimal-norm block perturbation that makes S(lambda) - dS(lambda) annihilate
/// x, with blocks outside the pattern zero. Throws InfeasibleMap when a block row
/// with unknowns has a zero coefficient vector but a nonzero right-hand side.
RosenbrockSystem reconstruct_perturbation(const RosenbrockSystem& sys, cplx lambda, const PerturbationPattern& pattern,
                                          std::span<const cplx> x);

/// sqrt of the sum over block rows of ||b_i||^2 / ||z_i||^2, the objective the
/// reconstruction attains at x; +inf when infeasible.
double perturbation_objective(const RosenbrockSystem& sys, cplx lambda, const PerturbationPattern& pattern,
                              std::span<const cplx> x);

/// Same block structure, entries zero.
RosenbrockSystem zero_like(const RosenbrockSystem& sys);
/// Blockwise sys - delta.
RosenbrockSystem subtract(const RosenbrockSystem& sys, const RosenbrockSystem& delta);

/// Recomputes the perturbation from result.x and checks it against result.eta.
Certificate certify(const RosenbrockSystem& sys, cplx lambda, const PerturbationPattern& pattern,
                    const BackwardErrorResult& result);

}  // namespace rbe
