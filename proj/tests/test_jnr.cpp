#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rbe/jnr.hpp"
#include "rbe/random_problems.hpp"
#include "support/reference3.hpp"
#include "support/test_util.hpp"

namespace rbe {
namespace {

using testing::random_psd;
using testing::random_unit;

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

MatrixTriple identities(std::size_t n) {
  const auto id = HermitianMatrix::identity(n);
  return {id, id, id};
}

TEST(Rho, IdentitiesGiveOnes) {
  std::mt19937_64 rng(1);
  const Vec3 y = rho(identities(4), random_unit(rng, 4));
  for (double v : y) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(Rho, ImaginaryPartGuardQuietOnHermitianInput) {
  std::mt19937_64 rng(2);
  const MatrixTriple m{testing::random_hermitian(rng, 3), testing::random_hermitian(rng, 3),
                       testing::random_hermitian(rng, 3)};
  for (int t = 0; t < 50; ++t) EXPECT_NO_THROW(rho(m, random_unit(rng, 3)));
}

TEST(Rho, Reference3PrintedMinimizer) {
  const Vec3 y = rho(testing::reference3_matrices(), normalized(testing::reference3_xstar()));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(y[i], testing::kReference3YStar[i], 5e-2);
}

TEST(Rho, CompositionIdentity) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const Srq2Problem p = random_srq2(rng, kAllTemplates[t % 7], {3, 0});
    const Vector x = random_unit(rng, 3);
    if (!is_differentiable(p, x)) continue;
    EXPECT_NEAR(objective(p, x), g_value(p.params(), rho(p.matrices(), x)), 1e-12 * std::max(1.0, objective(p, x)));
  }
}

TEST(DirectionGrid, SinglePointIsNorthPole) {
  const auto g = direction_grid(1);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0], (Vec3{0.0, 0.0, 1.0}));
  EXPECT_THROW(direction_grid(0), std::invalid_argument);
}

TEST(DirectionGrid, UnitAndDeterministic) {
  const auto g = direction_grid(800);
  ASSERT_EQ(g.size(), 800u);
  for (const Vec3& v : g) EXPECT_NEAR(std::sqrt(dot3(v, v)), 1.0, 1e-15);
  EXPECT_EQ(g, direction_grid(800));
}

TEST(DirectionGrid, SpacingNearIdeal) {
  const auto g = direction_grid(800);
  const double ideal = std::sqrt(4.0 * std::numbers::pi / 800.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double best = 10.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      best = std::min(best, std::acos(std::clamp(dot3(g[i], g[j]), -1.0, 1.0)));
    }
    EXPECT_LE(best, 2.0 * ideal) << i;
    EXPECT_GE(best, 0.5 * ideal) << i;
  }
}

TEST(BoundarySample, SingletonRange) {
  const auto pts = boundary_sample(identities(3), direction_grid(20));
  for (const JnrPoint& p : pts)
    for (double v : p.point) EXPECT_NEAR(v, 1.0, 1e-13);
}

TEST(BoundarySample, PointInvariants) {
  const MatrixTriple m = testing::reference3_matrices();
  const auto pts = boundary_sample(m, direction_grid(100));
  for (const JnrPoint& p : pts) {
    EXPECT_NEAR(dot3(p.direction, p.point), p.supportValue, 1e-10);
    EXPECT_NEAR(norm(p.witness), 1.0, 1e-14);
    const Vec3 y = rho(m, p.witness);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(y[i], p.point[i], 1e-12);
  }
}

TEST(BoundarySample, SupportPlanes) {
  const auto pts = boundary_sample(testing::reference3_matrices(), direction_grid(300));
  for (const JnrPoint& v : pts)
    for (const JnrPoint& w : pts) EXPECT_GE(dot3(v.direction, w.point), v.supportValue - 1e-9);
}

TEST(BoundarySample, PermutationEquivariant) {
  const MatrixTriple m = testing::reference3_matrices();
  auto dirs = direction_grid(50);
  const auto a = boundary_sample(m, dirs);
  std::reverse(dirs.begin(), dirs.end());
  const auto b = boundary_sample(m, dirs);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].point, b[a.size() - 1 - i].point);
    EXPECT_EQ(a[i].supportValue, b[a.size() - 1 - i].supportValue);
  }
}

TEST(BoundarySample, ConvexityEvidence) {
  std::mt19937_64 rng(4);
  const MatrixTriple m{random_psd(rng, 4, 4), random_psd(rng, 4, 4), random_psd(rng, 4, 4)};
  const auto pts = boundary_sample(m, direction_grid(200));
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  for (int t = 0; t < 200; ++t) {
    const Vec3& a = pts[pick(rng)].point;
    const Vec3& b = pts[pick(rng)].point;
    const Vec3 mid{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2};
    for (const JnrPoint& v : pts) EXPECT_GE(dot3(v.direction, mid), v.supportValue - 1e-9);
  }
}

TEST(OptimalityCertificate, Reference3Minimizer) {
  const Srq2Problem p = testing::reference3_problem();
  const Srq2Solution s = solve(p);
  const OptimalityCertificate c = optimality_certificate(p.matrices(), p.params(), s.x);
  EXPECT_GE(c.supportGap, -1e-12);
  EXPECT_LE(c.supportGap, 1e-8);
}

TEST(OptimalityCertificate, Reference3SpuriousPointHasGap) {
  const Srq2Problem p = testing::reference3_problem();
  const OptimalityCertificate c =
      optimality_certificate(p.matrices(), p.params(), normalized(testing::reference3_spurious()));
  EXPECT_GT(c.supportGap, 1e-2);
}

TEST(OptimalityCertificate, SingleQuotientPencilMinimizer) {
  std::mt19937_64 rng(5);
  const auto a1 = random_psd(rng, 4, 4), a3 = random_psd(rng, 4, 4);
  const GParams g{1, 1, 1, 0};
  const MatrixTriple m{a1, HermitianMatrix::zeros(4), a3};
  const PencilMin pm = definite_pencil_smallest(a1, shifted(1, 1, a3));
  const OptimalityCertificate c = optimality_certificate(m, g, pm.vector);
  EXPECT_LE(std::abs(c.supportGap), 1e-10);
}

TEST(OptimalityCertificate, GapIsNonnegative) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const Srq2Problem p = random_srq2(rng, kAllTemplates[t % 7], {3, 0});
    const Vector x = random_unit(rng, 3);
    if (!is_differentiable(p, x)) continue;
    EXPECT_GE(optimality_certificate(p.matrices(), p.params(), x).supportGap, -1e-12);
  }
}

TEST(OptimalityCertificate, RejectsNonDifferentiablePoint) {
  const auto a3 = HermitianMatrix::diagonal(std::vector<double>{0.0, 1.0, 1.0});
  const MatrixTriple m{HermitianMatrix::identity(3), HermitianMatrix::identity(3), a3};
  EXPECT_THROW(optimality_certificate(m, {0, 1, 1, 0}, Vector{1.0, 0.0, 0.0}), std::domain_error);
}

TEST(GGradient, MatchesFiniteDifferences) {
  const GParams p{1.0, 0.5, 2.0, -0.3};
  const Vec3 y{0.4, 0.7, 1.1};
  const Vec3 grad = g_gradient(p, y);
  for (int i = 0; i < 3; ++i) {
    Vec3 a = y, b = y;
    a[i] += 1e-6;
    b[i] -= 1e-6;
    EXPECT_NEAR((g_value(p, a) - g_value(p, b)) / 2e-6, grad[i], 1e-8);
  }
}

TEST(SampleDiagnostic, Reference3MinimizerBeatsEverySample) {
  const Srq2Problem p = testing::reference3_problem();
  const Srq2Solution s = solve(p);
  const auto pts = boundary_sample(p.matrices(), direction_grid(800));
  const JnrDiagnostic d = sample_diagnostic(p.params(), rho(p.matrices(), s.x), pts);
  EXPECT_NEAR(d.gStar, s.value, 1e-12);
  EXPECT_GE(d.minGap, -1e-9);
}

}  // namespace
}  // namespace rbe
