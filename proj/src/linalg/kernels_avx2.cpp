// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the dispatcher has confirmed CPU support.

#include "kernels_impl.hpp"

#include <immintrin.h>

namespace rbe::kernels::detail {

namespace {

// One __m256d holds two interleaved complex values [re0, im0, re1, im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }
inline __m256d swap_ri(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// even lanes minus odd lanes
inline double hdiff(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_sub_sd(s, _mm_unpackhi_pd(s, s)));
}

cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  __m256d same0 = _mm256_setzero_pd(), cross0 = _mm256_setzero_pd();
  __m256d same1 = _mm256_setzero_pd(), cross1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xa = load2(x + i), ya = load2(y + i);
    const __m256d xb = load2(x + i + 2), yb = load2(y + i + 2);
    same0 = _mm256_fmadd_pd(xa, ya, same0);
    cross0 = _mm256_fmadd_pd(xa, swap_ri(ya), cross0);
    same1 = _mm256_fmadd_pd(xb, yb, same1);
    cross1 = _mm256_fmadd_pd(xb, swap_ri(yb), cross1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d xa = load2(x + i), ya = load2(y + i);
    same0 = _mm256_fmadd_pd(xa, ya, same0);
    cross0 = _mm256_fmadd_pd(xa, swap_ri(ya), cross0);
  }
  const __m256d same = _mm256_add_pd(same0, same1);
  const __m256d cross = _mm256_add_pd(cross0, cross1);
  // same: xr*yr, xi*yi   cross: xr*yi, xi*yr
  double re = hsum(same);
  double im = hdiff(cross);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

cplx dotu_avx2(const cplx* x, const cplx* y, std::size_t n) {
  __m256d same0 = _mm256_setzero_pd(), cross0 = _mm256_setzero_pd();
  __m256d same1 = _mm256_setzero_pd(), cross1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xa = load2(x + i), ya = load2(y + i);
    const __m256d xb = load2(x + i + 2), yb = load2(y + i + 2);
    same0 = _mm256_fmadd_pd(xa, ya, same0);
    cross0 = _mm256_fmadd_pd(xa, swap_ri(ya), cross0);
    same1 = _mm256_fmadd_pd(xb, yb, same1);
    cross1 = _mm256_fmadd_pd(xb, swap_ri(yb), cross1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d xa = load2(x + i), ya = load2(y + i);
    same0 = _mm256_fmadd_pd(xa, ya, same0);
    cross0 = _mm256_fmadd_pd(xa, swap_ri(ya), cross0);
  }
  const __m256d same = _mm256_add_pd(same0, same1);
  const __m256d cross = _mm256_add_pd(cross0, cross1);
  double re = hdiff(same);
  double im = hsum(cross);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
  }
  return {re, im};
}

void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_setr_pd(-a.imag(), a.imag(), -a.imag(), a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    __m256d yv = load2(y + i);
    yv = _mm256_fmadd_pd(ai, swap_ri(xv), yv);
    yv = _mm256_fmadd_pd(ar, xv, yv);
    store2(y + i, yv);
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + a.real() * xr - a.imag() * xi, y[i].imag() + a.real() * xi + a.imag() * xr};
  }
}

void rot_avx2(cplx* x, cplx* y, double c, double s, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    const __m256d yv = load2(y + i);
    store2(x + i, _mm256_fmadd_pd(cv, xv, _mm256_mul_pd(sv, yv)));
    store2(y + i, _mm256_fmsub_pd(cv, yv, _mm256_mul_pd(sv, xv)));
  }
  for (; i < n; ++i) {
    const cplx xi = x[i];
    x[i] = c * xi + s * y[i];
    y[i] = c * y[i] - s * xi;
  }
}

double nrm2sq_avx2(const cplx* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = load2(x + i), b = load2(x + i + 2);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d a = load2(x + i);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

void scal_avx2(double a, cplx* x, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(x + i, _mm256_mul_pd(av, load2(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

}  // namespace

const KernelTable kAvx2Table{Backend::Avx2, "avx2", dotc_avx2, dotu_avx2, axpy_avx2,
                             rot_avx2,      nrm2sq_avx2, scal_avx2};

}  // namespace rbe::kernels::detail
