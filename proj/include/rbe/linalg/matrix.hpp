#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rbe {

using cplx = std::complex<double>;
using Vector = std::vector<cplx>;

/// Dense complex matrix, row-major. Constructors reject NaN/Inf entries.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> d);
  /// n x 1 column from a vector.
  static ComplexMatrix column(std::span<const cplx> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vector col(std::size_t j) const;
  void set_col(std::size_t j, std::span<const cplx> v);

  const std::vector<cplx>& entries() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;

  /// Copy of the block [r0, r0+nr) x [c0, c0+nc).
  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);

  double frobenius_norm() const;
  /// Maximum absolute column sum.
  double norm1() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

/// A * B
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
/// A^* * B
ComplexMatrix adjoint_multiply(const ComplexMatrix& a, const ComplexMatrix& b);
/// A * x
Vector matvec(const ComplexMatrix& a, std::span<const cplx> x);
/// A^* * x
Vector adjoint_matvec(const ComplexMatrix& a, std::span<const cplx> x);

/// Hermitian matrix. Construction from a general square matrix replaces it by
/// (M + M^*)/2 and keeps the Frobenius norm of the removed part.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(ComplexMatrix m);

  static HermitianMatrix identity(std::size_t n);
  static HermitianMatrix diagonal(std::span<const double> d);
  static HermitianMatrix zeros(std::size_t n);

  std::size_t dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double asymmetry() const { return asymmetry_; }

  double frobenius_norm() const { return m_.frobenius_norm(); }
  double norm1() const { return m_.norm1(); }

  /// x^* M x (real by construction; the imaginary rounding residue is dropped).
  double quadratic_form(std::span<const cplx> x) const;
  Vector apply(std::span<const cplx> x) const { return matvec(m_, x); }

  /// V^* M V
  HermitianMatrix congruence(const ComplexMatrix& v) const;

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

 private:
  ComplexMatrix m_;
  double asymmetry_ = 0.0;
};

HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b);
HermitianMatrix operator*(double s, HermitianMatrix a);
/// a I + b M
HermitianMatrix shifted(double a, double b, const HermitianMatrix& m);
/// M + s v v^*
HermitianMatrix rank_one_update(const HermitianMatrix& m, double s, std::span<const cplx> v);

double norm(std::span<const cplx> v);
cplx dotc(std::span<const cplx> x, std::span<const cplx> y);
/// Returns v / ||v||; throws on a zero vector.
Vector normalized(std::span<const cplx> v);
/// Multiplies v by a unit phase so its largest-magnitude entry is real positive.
void fix_phase(std::span<cplx> v);

}  // namespace rbe
