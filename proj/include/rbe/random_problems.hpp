#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "rbe/rosenbrock.hpp"
#include "rbe/srq2.hpp"

namespace rbe {

/// Parameter layouts of the SRQ2 problems that arise from the block patterns.
/// Each fixes (alpha_i, beta_i) and how A2 is scaled; gamma enters the P-patterns.
enum class Srq2Template { AP, BC, ABC, ABP, ACP, BCP, ABCP };

inline constexpr Srq2Template kAllTemplates[] = {Srq2Template::AP,  Srq2Template::BC,  Srq2Template::ABC,
                                                 Srq2Template::ABP, Srq2Template::ACP, Srq2Template::BCP,
                                                 Srq2Template::ABCP};

std::string_view to_string(Srq2Template t);

/// Builds the template's problem from A1, A2, A3 and gamma.
Srq2Problem make_template_problem(Srq2Template t, HermitianMatrix a1, HermitianMatrix a2, HermitianMatrix a3,
                                  double gamma);

struct RandomSrq2Options {
  std::size_t n = 3;
  // rank of A1 and A2 (Z Z^* with Z of size n x rank); 0 means full rank
  std::size_t rank = 0;
};

/// Random instance of the given template: A_i = Z Z^*, A3 either a unitary
/// conjugate of diag(U[0,1]) or a random orthogonal projector, gamma ~ U[1,5].
Srq2Problem random_srq2(std::mt19937_64& rng, Srq2Template t, const RandomSrq2Options& opts = {});

struct RandomSystemOptions {
  std::size_t r = 3;
  std::size_t n = 3;
  std::size_t d = 1;
  double scale = 1.0;
};

/// Entries i.i.d. complex normal with standard deviation `scale`.
RosenbrockSystem random_system(std::mt19937_64& rng, const RandomSystemOptions& opts);

}  // namespace rbe
