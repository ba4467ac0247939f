#include <gtest/gtest.h>

#include <random>

#include "rbe/linalg/decomp.hpp"
#include "rbe/linalg/kernels.hpp"
#include "support/test_util.hpp"

namespace rbe {
namespace {

using kernels::KernelTable;

class KernelEquivalence : public ::testing::TestWithParam<std::size_t> {
 protected:
  void SetUp() override {
    simd_ = kernels::avx2_table();
    if (simd_ == nullptr) GTEST_SKIP() << "AVX2/FMA not available on this host";
  }
  const KernelTable& ref() const { return kernels::scalar_table(); }
  const KernelTable* simd_ = nullptr;
};

double tol_for(std::size_t n) { return 1e-14 * static_cast<double>(n + 1); }

TEST_P(KernelEquivalence, DotProducts) {
  const std::size_t n = GetParam();
  std::mt19937_64 rng(100 + n);
  const Vector x = testing::random_vector(rng, n), y = testing::random_vector(rng, n);
  const double scale = std::sqrt(ref().nrm2sq(x.data(), n) * ref().nrm2sq(y.data(), n)) + 1.0;
  EXPECT_LE(std::abs(ref().dotc(x.data(), y.data(), n) - simd_->dotc(x.data(), y.data(), n)), tol_for(n) * scale);
  EXPECT_LE(std::abs(ref().dotu(x.data(), y.data(), n) - simd_->dotu(x.data(), y.data(), n)), tol_for(n) * scale);
  EXPECT_NEAR(ref().nrm2sq(x.data(), n), simd_->nrm2sq(x.data(), n), tol_for(n) * scale);
}

TEST_P(KernelEquivalence, Updates) {
  const std::size_t n = GetParam();
  std::mt19937_64 rng(200 + n);
  const Vector x = testing::random_vector(rng, n), y = testing::random_vector(rng, n);
  const cplx a(0.3, -1.7);

  Vector y1 = y, y2 = y;
  ref().axpy(a, x.data(), y1.data(), n);
  simd_->axpy(a, x.data(), y2.data(), n);
  EXPECT_LE(testing::vec_diff(y1, y2), tol_for(n));

  Vector x1 = x, x2 = x;
  y1 = y;
  y2 = y;
  ref().rot(x1.data(), y1.data(), 0.6, 0.8, n);
  simd_->rot(x2.data(), y2.data(), 0.6, 0.8, n);
  EXPECT_LE(testing::vec_diff(x1, x2), tol_for(n));
  EXPECT_LE(testing::vec_diff(y1, y2), tol_for(n));

  x1 = x;
  x2 = x;
  ref().scal(-2.5, x1.data(), n);
  simd_->scal(-2.5, x2.data(), n);
  EXPECT_EQ(x1, x2);
}

// Lengths cover the empty case, every remainder of the 4-wide unroll and a long tail.
INSTANTIATE_TEST_SUITE_P(Lengths, KernelEquivalence,
                         ::testing::Values(0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 63, 64, 257));

TEST(KernelScalar, ReferenceValues) {
  const KernelTable& t = kernels::scalar_table();
  const Vector x{{1, 2}, {3, -1}};
  const Vector y{{0, 1}, {2, 2}};
  // conj(1+2i)(i) + conj(3-i)(2+2i) = (2+i) + (4+8i)
  EXPECT_EQ(t.dotc(x.data(), y.data(), 2), cplx(6, 9));
  // (1+2i)(i) + (3-i)(2+2i) = (-2+i) + (8+4i)
  EXPECT_EQ(t.dotu(x.data(), y.data(), 2), cplx(6, 5));
  EXPECT_EQ(t.nrm2sq(x.data(), 2), 15.0);
  Vector xr = x, yr = y;
  t.rot(xr.data(), yr.data(), 0.0, 1.0, 2);
  EXPECT_EQ(xr, y);
  EXPECT_EQ(yr[0], -x[0]);
}

TEST(KernelBackends, EigensolverAgreesAcrossBackends) {
  if (kernels::avx2_table() == nullptr) GTEST_SKIP() << "AVX2/FMA not available on this host";
  std::mt19937_64 rng(9);
  const HermitianMatrix m = testing::random_hermitian(rng, 40);
  kernels::select(kernels::Backend::Scalar);
  const EigResult a = hermitian_eig(m);
  kernels::select(kernels::Backend::Avx2);
  const EigResult b = hermitian_eig(m);
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-11);
  // a simple spectrum makes each phase-fixed eigenvector unique
  for (std::size_t j = 0; j < a.values.size(); ++j) EXPECT_LE(testing::vec_diff(a.vectors.col(j), b.vectors.col(j)), 1e-8);
}

}  // namespace
}  // namespace rbe
