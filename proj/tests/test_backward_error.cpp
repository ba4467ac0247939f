#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "rbe/backward_error.hpp"
#include "rbe/random_problems.hpp"
#include "support/direct_forms.hpp"
#include "support/linearization.hpp"
#include "support/test_util.hpp"

namespace rbe {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PerturbationPattern pat(const char* s) { return PerturbationPattern::parse(s); }

cplx random_shift(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  return {nd(rng), nd(rng)};
}

TEST(PerturbationPattern, ParseAndCanonicalSpelling) {
  EXPECT_EQ(pat("PCBA").str(), "ABCP");
  EXPECT_EQ(pat("CA").str(), "AC");
  EXPECT_THROW(pat("ab"), std::invalid_argument);
  EXPECT_TRUE(pat("ABC").contains(pat("AC")));
  EXPECT_FALSE(pat("AC").contains(pat("ABC")));
  EXPECT_THROW(pat(""), std::invalid_argument);
  EXPECT_THROW(pat("AA"), std::invalid_argument);
  EXPECT_THROW(PerturbationPattern(false, false, false, false), std::invalid_argument);
  try {
    pat("Q");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("A, B, C, P"), std::string::npos);
  }
}

TEST(PerturbationPattern, AllFifteen) {
  const auto all = all_patterns();
  ASSERT_EQ(all.size(), 15u);
  EXPECT_EQ(all.front().str(), "A");
  EXPECT_EQ(all.back().str(), "ABCP");
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) EXPECT_NE(all[i], all[j]);
}

TEST(TransposedImage, Table) {
  EXPECT_EQ(transposed_image(pat("C"))->str(), "B");
  EXPECT_EQ(transposed_image(pat("AC"))->str(), "AB");
  EXPECT_EQ(transposed_image(pat("BP"))->str(), "CP");
  EXPECT_EQ(transposed_image(pat("ACP"))->str(), "ABP");
  EXPECT_FALSE(transposed_image(pat("ABCP")));
  EXPECT_FALSE(transposed_image(pat("A")));
}

TEST(BackwardError, ZeroAtEigenvalues) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 4; ++t) {
    const RosenbrockSystem sys = random_system(rng, {3, 2, static_cast<std::size_t>(t % 3), 1.0});
    const auto eigs = testing::system_eigenvalues(sys);
    ASSERT_FALSE(eigs.empty());
    for (const auto& p : all_patterns()) {
      const BackwardErrorResult r = backward_error(sys, eigs.front(), p);
      EXPECT_LE(r.eta, 1e-8) << p.str();
    }
  }
}

TEST(BackwardError, FullPatternBoundedBySystemNorm) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const RosenbrockSystem sys = random_system(rng, {1 + t % 4u, 1 + t % 3u, t % 3u, 1.0});
    const BackwardErrorResult r = backward_error(sys, random_shift(rng), pat("ABCP"));
    EXPECT_LE(r.eta, system_norm(sys) + 1e-10);
    EXPECT_TRUE(r.converged);
  }
}

TEST(BackwardError, ScalarSystemMatchesOracle) {
  const RosenbrockSystem sys(ComplexMatrix{{0}}, ComplexMatrix{{1}}, ComplexMatrix{{1}}, {ComplexMatrix{{0}}});
  const ErrorMatrices em = assemble_error_matrices(sys, 1.0);
  EXPECT_EQ(em.gamma, 1.0);
  const auto prob = srq2_formulation(em, pat("ABCP"));
  ASSERT_TRUE(prob);
  EXPECT_EQ(prob->dim(), 2u);
  const BackwardErrorResult r = backward_error(sys, 1.0, pat("ABCP"));
  EXPECT_EQ(r.method, Method::SRQ2);
  EXPECT_NEAR(r.eta * r.eta, brute_force_oracle(*prob, 2000, 3), 1e-8);
}

TEST(BackwardError, MethodDispatch) {
  std::mt19937_64 rng(3);
  const RosenbrockSystem sys = random_system(rng, {3, 3, 1, 1.0});
  const cplx lambda = random_shift(rng);
  const std::map<std::string, Method> expect{
      {"A", Method::PENCIL},          {"B", Method::PENCIL},         {"P", Method::PENCIL},
      {"C", Method::TRANSPOSED_PENCIL}, {"AB", Method::PENCIL},      {"CP", Method::PENCIL},
      {"AC", Method::TRANSPOSED_PENCIL}, {"BP", Method::TRANSPOSED_PENCIL}, {"AP", Method::SRQ2},
      {"BC", Method::SRQ2},           {"ABC", Method::SRQ2},         {"ABP", Method::SRQ2},
      {"BCP", Method::SRQ2},          {"ACP", Method::TRANSPOSED_SRQ2}, {"ABCP", Method::SRQ2}};
  for (const auto& [s, m] : expect) {
    const BackwardErrorResult r = backward_error(sys, lambda, pat(s.c_str()));
    EXPECT_EQ(r.method, m) << s;
    EXPECT_EQ(r.transposed, m == Method::TRANSPOSED_PENCIL || m == Method::TRANSPOSED_SRQ2) << s;
  }
}

TEST(BackwardError, MonotoneAndFullPatternDominates) {
  std::mt19937_64 rng(4);
  const auto all = all_patterns();
  for (int t = 0; t < 5; ++t) {
    const RosenbrockSystem sys = random_system(rng, {2 + t % 3u, 1 + t % 3u, t % 3u, 1.0});
    const cplx lambda = random_shift(rng);
    std::vector<double> eta;
    for (const auto& p : all) eta.push_back(backward_error(sys, lambda, p).eta);
    for (std::size_t i = 0; i < all.size(); ++i) {
      EXPECT_LE(eta.back(), eta[i] + 1e-8);
      for (std::size_t j = 0; j < all.size(); ++j) {
        if (i == j || !all[j].contains(all[i]) || std::isinf(eta[i])) continue;
        EXPECT_GE(eta[i], eta[j] - 1e-8) << all[i].str() << " vs " << all[j].str();
      }
    }
  }
}

TEST(BackwardError, InfiniteWhenNullSpaceMissesFirstBlock) {
  // C square nonsingular and P(lambda) = 0: null(G2) = {[0; x2]}, so V^*H1V = 0.
  std::mt19937_64 rng(5);
  const RosenbrockSystem sys(testing::random_matrix(rng, 2, 2), testing::random_matrix(rng, 2, 2),
                             testing::random_matrix(rng, 2, 2), {ComplexMatrix(2, 2)});
  const BackwardErrorResult r = backward_error(sys, cplx(0.3, 0.1), pat("A"));
  EXPECT_EQ(r.eta, kInf);
  EXPECT_FALSE(r.witness.empty());
  EXPECT_FALSE(r.perturbation);
  EXPECT_FALSE(r.certificate.pass);
}

TEST(BackwardError, TransposeReductionsMatchDirectForms) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 6; ++t) {
    const RosenbrockSystem sys = random_system(rng, {1 + t % 3u, 1 + t % 4u, t % 3u, 1.0});
    const cplx lambda = random_shift(rng);
    for (const char* s : {"C", "AC", "BP", "ACP"}) {
      const BackwardErrorResult r = backward_error(sys, lambda, pat(s));
      const double direct = testing::direct_eta(sys, lambda, pat(s), 2000, t);
      if (std::isinf(direct)) {
        EXPECT_TRUE(std::isinf(r.eta)) << s;
      } else {
        EXPECT_NEAR(r.eta, direct, 1e-6) << s;
      }
    }
  }
}

TEST(Reconstruction, StructureOfSingleBlockPattern) {
  std::mt19937_64 rng(7);
  const RosenbrockSystem sys = random_system(rng, {3, 2, 2, 1.0});
  const BackwardErrorResult r = backward_error(sys, random_shift(rng), pat("A"));
  ASSERT_TRUE(std::isfinite(r.eta));
  ASSERT_TRUE(r.perturbation);
  const RosenbrockSystem& d = *r.perturbation;
  EXPECT_EQ(d.B().frobenius_norm(), 0.0);
  EXPECT_EQ(d.C().frobenius_norm(), 0.0);
  for (const auto& m : d.poly()) EXPECT_EQ(m.frobenius_norm(), 0.0);
  EXPECT_NEAR(d.A().frobenius_norm(), r.eta, 1e-10 * r.eta);
}

TEST(Reconstruction, FullPatternCertificate) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 5; ++t) {
    const RosenbrockSystem sys = random_system(rng, {2 + t % 3u, 2, t % 3u, 1.0});
    const cplx lambda = random_shift(rng);
    const BackwardErrorResult r = backward_error(sys, lambda, pat("ABCP"));
    ASSERT_TRUE(r.perturbation);
    EXPECT_NEAR(system_norm(*r.perturbation), r.eta, 1e-10 * r.eta);
    const ComplexMatrix s = evaluate(sys, lambda);
    EXPECT_LE(smallest_singular_value(evaluate(subtract(sys, *r.perturbation), lambda)), 1e-8 * std::max(1.0, s.norm1()));
    EXPECT_TRUE(r.certificate.pass) << r.certificate.note;
  }
}

TEST(Reconstruction, WeightedNormIdentityInObjective) {
  // Full pattern: phi^2 = ||R1 x||^2/||x||^2 + ||R2 x||^2/(||x1||^2 + gamma ||x2||^2).
  std::mt19937_64 rng(9);
  const RosenbrockSystem sys = random_system(rng, {3, 2, 2, 1.0});
  const cplx lambda(0.8, -0.6);
  const ErrorMatrices em = assemble_error_matrices(sys, lambda);
  for (int t = 0; t < 10; ++t) {
    const Vector x = testing::random_unit(rng, 5);
    const double xt = em.H1.quadratic_form(x) + em.gamma * em.H2.quadratic_form(x);
    const double phi2 = em.G1.quadratic_form(x) + em.G2.quadratic_form(x) / xt;
    const double phi = perturbation_objective(sys, lambda, pat("ABCP"), x);
    EXPECT_NEAR(phi * phi, phi2, 1e-12 * phi2);
    const RosenbrockSystem d = reconstruct_perturbation(sys, lambda, pat("ABCP"), x);
    EXPECT_NEAR(system_norm(d), phi, 1e-12 * phi);
  }
}

TEST(Reconstruction, InfeasibleMapIsReported) {
  std::mt19937_64 rng(10);
  const RosenbrockSystem sys = random_system(rng, {2, 2, 1, 1.0});
  // Pattern B only frees the second block of x; x2 = 0 with a nonzero first row is infeasible.
  const Vector x{1.0, 0.0, 0.0, 0.0};
  EXPECT_THROW(reconstruct_perturbation(sys, 0.5, pat("B"), x), InfeasibleMap);
  EXPECT_EQ(perturbation_objective(sys, 0.5, pat("B"), x), kInf);
}

TEST(Certify, CorruptedMinimizerFails) {
  std::mt19937_64 rng(11);
  const RosenbrockSystem sys = random_system(rng, {3, 2, 1, 1.0});
  const cplx lambda = random_shift(rng);
  BackwardErrorResult r = backward_error(sys, lambda, pat("ABCP"));
  ASSERT_TRUE(r.certificate.pass);
  Vector x = *r.x;
  const Vector noise = testing::random_vector(rng, x.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += 0.1 * noise[i];
  r.x = normalized(x);
  const Certificate c = certify(sys, lambda, pat("ABCP"), r);
  EXPECT_FALSE(c.pass);
  EXPECT_FALSE(c.normOk && c.nepvOk);
}

TEST(Certify, ZeroEtaPathPasses) {
  std::mt19937_64 rng(12);
  const RosenbrockSystem sys = random_system(rng, {2, 2, 1, 1.0});
  const cplx lambda = testing::system_eigenvalues(sys).front();
  const BackwardErrorResult r = backward_error(sys, lambda, pat("BC"));
  ASSERT_EQ(r.method, Method::ZERO_EIGENVALUE);
  EXPECT_EQ(r.eta, 0.0);
  ASSERT_TRUE(r.perturbation);
  EXPECT_EQ(system_norm(*r.perturbation), 0.0);
  EXPECT_TRUE(certify(sys, lambda, pat("BC"), r).pass);
}

TEST(Certify, EveryConvergedResultPasses) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 4; ++t) {
    const RosenbrockSystem sys = random_system(rng, {1u + t, 1 + t % 2u, t % 3u, 1.0});
    const cplx lambda = random_shift(rng);
    for (const auto& p : all_patterns()) {
      const BackwardErrorResult r = backward_error(sys, lambda, p);
      if (!r.converged || std::isinf(r.eta)) continue;
      EXPECT_TRUE(r.certificate.pass) << p.str() << ": " << r.certificate.note;
    }
  }
}

TEST(ZeroLikeAndSubtract, Blockwise) {
  std::mt19937_64 rng(14);
  const RosenbrockSystem sys = random_system(rng, {2, 3, 2, 1.0});
  EXPECT_EQ(system_norm(zero_like(sys)), 0.0);
  EXPECT_EQ(subtract(sys, zero_like(sys)), sys);
  EXPECT_EQ(system_norm(subtract(sys, sys)), 0.0);
}

}  // namespace
}  // namespace rbe
