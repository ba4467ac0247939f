#pragma once

// Complex BLAS-1 style kernels used by the dense Hermitian solvers.
//
// Every kernel has a portable scalar reference implementation and, on x86-64
// hosts whose CPU reports AVX2+FMA, a vectorized variant. The active table is
// chosen once at first use; RBE_SIMD=scalar|avx2|auto overrides the choice.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace rbe::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  std::string_view name;

  // sum_i conj(x_i) * y_i
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
  // sum_i x_i * y_i
  cplx (*dotu)(const cplx* x, const cplx* y, std::size_t n);
  // y += a * x
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // (x, y) <- (c x + s y, c y - s x) with real c, s
  void (*rot)(cplx* x, cplx* y, double c, double s, std::size_t n);
  // sum_i |x_i|^2
  double (*nrm2sq)(const cplx* x, std::size_t n);
  // x *= a (real)
  void (*scal)(double a, cplx* x, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the build or the host CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

const KernelTable& active();

// Test hook. Not thread-safe; call before spawning workers.
void select(Backend b);

inline cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  return active().dotc(x.data(), y.data(), x.size());
}
inline cplx dotu(std::span<const cplx> x, std::span<const cplx> y) {
  return active().dotu(x.data(), y.data(), x.size());
}
inline void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
inline void rot(std::span<cplx> x, std::span<cplx> y, double c, double s) {
  active().rot(x.data(), y.data(), c, s, x.size());
}
inline double nrm2sq(std::span<const cplx> x) {
  return active().nrm2sq(x.data(), x.size());
}
inline void scal(double a, std::span<cplx> x) {
  active().scal(a, x.data(), x.size());
}

}  // namespace rbe::kernels
