#include "rbe/linalg/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rbe/linalg/kernels.hpp"

namespace rbe {

namespace {

void require_finite(const std::vector<cplx>& v) {
  for (const cplx& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument("matrix entry is not finite");
    }
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("matrix entry count " + std::to_string(data_.size()) + " != " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }
  require_finite(data_);
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  require_finite(m.data_);
  return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const cplx> v) {
  return ComplexMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

Vector ComplexMatrix::col(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void ComplexMatrix::set_col(std::size_t j, std::span<const cplx> v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix t = *this;
  for (cplx& z : t.data_) z = std::conj(z);
  return t;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                                   std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("block outside matrix");
  ComplexMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw std::out_of_range("block outside matrix");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

double ComplexMatrix::frobenius_norm() const {
  return std::sqrt(kernels::nrm2sq(data_));
}

double ComplexMatrix::norm1() const {
  std::vector<double> colsum(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) colsum[j] += std::abs((*this)(i, j));
  double m = 0.0;
  for (double s : colsum) m = std::max(m, s);
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch in +=");
  kernels::axpy(1.0, o.data_, data_);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch in -=");
  kernels::axpy(-1.0, o.data_, data_);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("shape mismatch in multiply");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto crow = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik != cplx{}) kernels::axpy(aik, b.row(k), crow);
    }
  }
  return c;
}

ComplexMatrix adjoint_multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("shape mismatch in adjoint_multiply");
  ComplexMatrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const auto brow = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const cplx aki = std::conj(a(k, i));
      if (aki != cplx{}) kernels::axpy(aki, brow, c.row(i));
    }
  }
  return c;
}

Vector matvec(const ComplexMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("shape mismatch in matvec");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = kernels::dotu(a.row(i), x);
  return y;
}

Vector adjoint_matvec(const ComplexMatrix& a, std::span<const cplx> x) {
  if (a.rows() != x.size()) throw std::invalid_argument("shape mismatch in adjoint_matvec");
  Vector y(a.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) kernels::axpy(std::conj(x[k]), a.row(k), y);
  for (cplx& z : y) z = std::conj(z);
  return y;
}

HermitianMatrix::HermitianMatrix(ComplexMatrix m) {
  if (!m.square()) throw std::invalid_argument("Hermitian matrix must be square");
  const std::size_t n = m.rows();
  double skew = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const cplx a = m(i, j), b = std::conj(m(j, i));
      const cplx avg = 0.5 * (a + b);
      const double diff = std::norm(0.5 * (a - b));
      skew += (i == j) ? diff : 2.0 * diff;
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
  m_ = std::move(m);
  asymmetry_ = std::sqrt(skew);
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
  return HermitianMatrix(ComplexMatrix::identity(n));
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  return HermitianMatrix(ComplexMatrix::diagonal(d));
}

HermitianMatrix HermitianMatrix::zeros(std::size_t n) { return HermitianMatrix(ComplexMatrix(n, n)); }

double HermitianMatrix::quadratic_form(std::span<const cplx> x) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) acc += (std::conj(x[i]) * kernels::dotu(m_.row(i), x)).real();
  return acc;
}

HermitianMatrix HermitianMatrix::congruence(const ComplexMatrix& v) const {
  return HermitianMatrix(adjoint_multiply(v, multiply(m_, v)));
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

HermitianMatrix shifted(double a, double b, const HermitianMatrix& m) {
  ComplexMatrix out = m.matrix();
  out *= b;
  for (std::size_t i = 0; i < m.dim(); ++i) out(i, i) += a;
  return HermitianMatrix(std::move(out));
}

HermitianMatrix rank_one_update(const HermitianMatrix& m, double s, std::span<const cplx> v) {
  ComplexMatrix out = m.matrix();
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) out(i, j) += s * v[i] * std::conj(v[j]);
  return HermitianMatrix(std::move(out));
}

double norm(std::span<const cplx> v) { return std::sqrt(kernels::nrm2sq(v)); }

cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size()) throw std::invalid_argument("length mismatch in dotc");
  return kernels::dotc(x, y);
}

Vector normalized(std::span<const cplx> v) {
  const double nv = norm(v);
  if (!(nv > 0.0) || !std::isfinite(nv)) throw std::invalid_argument("cannot normalize a zero vector");
  Vector out(v.begin(), v.end());
  kernels::scal(1.0 / nv, out);
  return out;
}

void fix_phase(std::span<cplx> v) {
  std::size_t best = 0;
  double mag = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    // prefer the first index among (near-)ties so the choice is stable
    if (a > mag * (1.0 + 1e-12)) {
      mag = a;
      best = i;
    }
  }
  if (mag <= 0.0) return;
  const cplx phase = std::conj(v[best]) / mag;
  for (cplx& z : v) z *= phase;
  v[best] = cplx(std::abs(v[best]), 0.0);
}

}  // namespace rbe
