#include "rbe/rosenbrock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rbe {

namespace {

void require_shape(const ComplexMatrix& m, std::size_t rows, std::size_t cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw std::invalid_argument(what + " has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

ComplexMatrix block_row(const ComplexMatrix& left, const ComplexMatrix& right) {
  ComplexMatrix out(left.rows(), left.cols() + right.cols());
  out.set_block(0, 0, left);
  out.set_block(0, left.cols(), right);
  return out;
}

std::vector<ComplexMatrix> transposed(const std::vector<ComplexMatrix>& ms) {
  std::vector<ComplexMatrix> out;
  out.reserve(ms.size());
  for (const ComplexMatrix& m : ms) out.push_back(m.transpose());
  return out;
}

}  // namespace

RosenbrockSystem::RosenbrockSystem(ComplexMatrix a, ComplexMatrix b, ComplexMatrix c, std::vector<ComplexMatrix> poly)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), poly_(std::move(poly)) {
  const std::size_t r = a_.rows();
  const std::size_t n = c_.rows();
  if (r == 0) throw std::invalid_argument("state dimension r must be at least 1");
  if (n == 0) throw std::invalid_argument("block size n must be at least 1");
  if (poly_.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
  require_shape(a_, r, r, "A");
  require_shape(b_, r, n, "B");
  require_shape(c_, n, r, "C");
  for (std::size_t j = 0; j < poly_.size(); ++j) require_shape(poly_[j], n, n, "A_" + std::to_string(j));
}

ComplexMatrix evaluate_poly(const RosenbrockSystem& sys, cplx z) {
  const auto& p = sys.poly();
  ComplexMatrix acc = p.back();
  for (std::size_t j = p.size() - 1; j-- > 0;) {
    acc *= z;
    acc += p[j];
  }
  return acc;
}

ComplexMatrix evaluate(const RosenbrockSystem& sys, cplx z) {
  const std::size_t r = sys.r();
  ComplexMatrix s(r + sys.n(), r + sys.n());
  ComplexMatrix a = sys.A();
  for (std::size_t i = 0; i < r; ++i) a(i, i) -= z;
  s.set_block(0, 0, a);
  s.set_block(0, r, sys.B());
  s.set_block(r, 0, sys.C());
  s.set_block(r, r, evaluate_poly(sys, z));
  return s;
}

double system_norm(const RosenbrockSystem& sys) {
  double s = 0.0;
  auto add = [&s](const ComplexMatrix& m) {
    const double f = m.frobenius_norm();
    s += f * f;
  };
  add(sys.A());
  add(sys.B());
  add(sys.C());
  for (const ComplexMatrix& m : sys.poly()) add(m);
  return std::sqrt(s);
}

RosenbrockSystem transpose_system(const RosenbrockSystem& sys) {
  return RosenbrockSystem(sys.A().transpose(), sys.C().transpose(), sys.B().transpose(), transposed(sys.poly()));
}

double gamma_of(cplx lambda, std::size_t d) {
  const double a2 = std::norm(lambda);
  double g = 0.0, term = 1.0;
  for (std::size_t j = 0; j <= d; ++j) {
    g += term;
    term *= a2;
  }
  return g;
}

ErrorMatrices assemble_error_matrices(const RosenbrockSystem& sys, cplx lambda) {
  const std::size_t r = sys.r(), n = sys.n();
  ComplexMatrix a = sys.A();
  for (std::size_t i = 0; i < r; ++i) a(i, i) -= lambda;
  const ComplexMatrix top = block_row(a, sys.B());
  const ComplexMatrix bottom = block_row(sys.C(), evaluate_poly(sys, lambda));

  ErrorMatrices em;
  em.G1 = HermitianMatrix(adjoint_multiply(top, top));
  em.G2 = HermitianMatrix(adjoint_multiply(bottom, bottom));
  std::vector<double> h1(r + n, 0.0), h2(r + n, 0.0);
  for (std::size_t i = 0; i < r; ++i) h1[i] = 1.0;
  for (std::size_t i = r; i < r + n; ++i) h2[i] = 1.0;
  em.H1 = HermitianMatrix::diagonal(h1);
  em.H2 = HermitianMatrix::diagonal(h2);
  em.gamma = gamma_of(lambda, sys.d());
  em.lambda = lambda;
  em.r = r;
  em.n = n;
  return em;
}

}  // namespace rbe
