#include "rbe/linalg/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rbe/linalg/kernels.hpp"

namespace rbe {

ConvergenceError::ConvergenceError(std::size_t d, std::size_t idx, std::size_t it)
    : LinalgError("Hermitian eigensolver did not converge (dim " + std::to_string(d) + ", eigenvalue " +
                  std::to_string(idx) + ", " + std::to_string(it) + " iterations)"),
      dim(d),
      index(idx),
      iterations(it) {}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxQlIterations = 60;

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> sub;  // sub[k] couples k and k+1; sub[n-1] = 0
  ComplexMatrix basis_t;    // row j is column j of the unitary reduction Q D
};

// Householder reduction A = (Q D) T (Q D)^* with T real symmetric tridiagonal.
Tridiagonal tridiagonalize(const HermitianMatrix& m) {
  const std::size_t n = m.dim();
  ComplexMatrix a = m.matrix();
  std::vector<Vector> refl(n);
  std::vector<double> tau(n, 0.0);
  std::vector<cplx> sub(n, cplx{});

  Vector p, w, vconj, wconj;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::size_t len = n - k - 1;
    const std::size_t off = k + 1;
    if (len == 1) {
      sub[k] = a(off, k);
      continue;
    }
    Vector v(len);
    for (std::size_t i = 0; i < len; ++i) v[i] = a(off + i, k);
    const double alpha = norm(v);
    if (alpha == 0.0) continue;
    const double x0abs = std::abs(v[0]);
    const cplx phase = x0abs == 0.0 ? cplx(1.0) : v[0] / x0abs;
    v[0] += phase * alpha;
    const double t = 2.0 / kernels::nrm2sq(v);
    sub[k] = -phase * alpha;

    // Trailing update A22 <- H A22 H with H = I - t v v^*.
    p.assign(len, cplx{});
    for (std::size_t i = 0; i < len; ++i) {
      p[i] = t * kernels::dotu(a.row(off + i).subspan(off, len), v);
    }
    const cplx kfac = 0.5 * t * kernels::dotc(v, p);
    w = p;
    kernels::axpy(-kfac, v, w);
    vconj.resize(len);
    wconj.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
      vconj[i] = std::conj(v[i]);
      wconj[i] = std::conj(w[i]);
    }
    for (std::size_t i = 0; i < len; ++i) {
      auto r = a.row(off + i).subspan(off, len);
      kernels::axpy(-v[i], wconj, r);
      kernels::axpy(-w[i], vconj, r);
    }
    refl[k] = std::move(v);
    tau[k] = t;
  }

  // Q = H_0 H_1 ... accumulated on rows.
  ComplexMatrix q = ComplexMatrix::identity(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (tau[k] == 0.0) continue;
    const Vector& v = refl[k];
    const std::size_t off = k + 1;
    vconj.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) vconj[i] = std::conj(v[i]);
    for (std::size_t i = 0; i < n; ++i) {
      auto r = q.row(i).subspan(off, v.size());
      const cplx s = kernels::dotu(r, v);
      if (s != cplx{}) kernels::axpy(-tau[k] * s, vconj, r);
    }
  }

  Tridiagonal out;
  out.diag.resize(n);
  out.sub.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) out.diag[i] = a(i, i).real();

  // Diagonal unitary D turning the complex subdiagonal real and nonnegative.
  std::vector<cplx> delta(n, cplx(1.0));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double mag = std::abs(sub[k]);
    out.sub[k] = mag;
    delta[k + 1] = mag == 0.0 ? delta[k] : delta[k] * (sub[k] / mag);
  }

  out.basis_t = ComplexMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.basis_t(i, j) = q(j, i) * delta[i];
  return out;
}

// Implicit-shift QL on (d, e); rotations are applied to the rows of zt.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& zt) {
  const int n = static_cast<int>(d.size());
  // Absolute floor: clusters of tiny eigenvalues never meet the relative test.
  double tnorm = 0.0;
  for (int k = 0; k < n; ++k) tnorm = std::max(tnorm, std::abs(d[k]) + std::abs(e[k]));
  const double floor = kEps * tnorm;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd || std::abs(e[m]) <= floor ||
            std::abs(e[m]) < std::numeric_limits<double>::min())
          break;
      }
      if (m != l) {
        if (iter++ == kMaxQlIterations) {
          throw ConvergenceError(static_cast<std::size_t>(n), static_cast<std::size_t>(l),
                                 static_cast<std::size_t>(iter));
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        bool underflow = false;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          kernels::rot(zt.row(static_cast<std::size_t>(i + 1)), zt.row(static_cast<std::size_t>(i)), c, s);
        }
        if (underflow && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// Forward substitution L X = B for lower-triangular L, row-major B.
ComplexMatrix lower_solve(const ComplexMatrix& l, const ComplexMatrix& b) {
  ComplexMatrix x = b;
  for (std::size_t i = 0; i < l.rows(); ++i) {
    auto xi = x.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      if (l(i, k) != cplx{}) kernels::axpy(-l(i, k), x.row(k), xi);
    }
    kernels::scal(1.0 / l(i, i).real(), xi);
  }
  return x;
}

// Solves L^* v = u.
Vector lower_adjoint_solve(const ComplexMatrix& l, std::span<const cplx> u) {
  const std::size_t n = l.rows();
  Vector v(u.begin(), u.end());
  for (std::size_t ii = n; ii-- > 0;) {
    cplx acc = v[ii];
    for (std::size_t k = ii + 1; k < n; ++k) acc -= std::conj(l(k, ii)) * v[k];
    v[ii] = acc / l(ii, ii).real();
  }
  return v;
}

}  // namespace

EigResult hermitian_eig(const HermitianMatrix& m) {
  const std::size_t n = m.dim();
  EigResult res;
  if (n == 0) return res;
  Tridiagonal t = tridiagonalize(m);
  tridiagonal_ql(t.diag, t.sub, t.basis_t);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return t.diag[a] < t.diag[b]; });

  res.values.resize(n);
  res.vectors = ComplexMatrix(n, n);
  Vector col(n);
  for (std::size_t j = 0; j < n; ++j) {
    res.values[j] = t.diag[order[j]];
    const auto r = t.basis_t.row(order[j]);
    std::copy(r.begin(), r.end(), col.begin());
    fix_phase(col);
    res.vectors.set_col(j, col);
  }
  return res;
}

ComplexMatrix cholesky(const HermitianMatrix& nm) {
  const std::size_t n = nm.dim();
  const ComplexMatrix& a = nm.matrix();
  double maxdiag = 0.0;
  for (std::size_t i = 0; i < n; ++i) maxdiag = std::max(maxdiag, std::abs(a(i, i).real()));
  // pivots at rounding level relative to the diagonal count as nonpositive
  const double floor = static_cast<double>(n) * kEps * maxdiag;
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double piv = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) piv -= std::norm(l(j, k));
    if (!(piv > floor)) {
      throw NotPositiveDefinite("Cholesky pivot " + std::to_string(j) + " is not positive (" +
                                std::to_string(piv) + ")");
    }
    const double ljj = std::sqrt(piv);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return l;
}

PencilMin definite_pencil_smallest(const HermitianMatrix& m, const HermitianMatrix& n) {
  if (m.dim() != n.dim()) throw std::invalid_argument("pencil dimension mismatch");
  if (m.dim() == 0) throw std::invalid_argument("empty pencil");
  const ComplexMatrix l = cholesky(n);
  // C = L^{-1} M L^{-*} = L^{-1} (L^{-1} M)^* since M is Hermitian.
  const ComplexMatrix y = lower_solve(l, m.matrix());
  const HermitianMatrix c(lower_solve(l, y.adjoint()));
  const EigResult e = hermitian_eig(c);
  PencilMin out;
  out.value = e.values.front();
  out.vector = normalized(lower_adjoint_solve(l, e.vectors.col(0)));
  fix_phase(out.vector);
  return out;
}

PencilMin semidefinite_pencil_smallest(const HermitianMatrix& m, const HermitianMatrix& n, double tol) {
  if (m.dim() != n.dim()) throw std::invalid_argument("pencil dimension mismatch");
  const std::size_t dim = m.dim();
  if (dim == 0) throw std::invalid_argument("empty pencil");

  const EigResult en = hermitian_eig(n);
  const double thr = tol * std::max(1.0, n.norm1());
  std::vector<std::size_t> pos, zero;
  for (std::size_t j = 0; j < dim; ++j) (en.values[j] > thr ? pos : zero).push_back(j);
  if (pos.empty()) throw InfeasibleMap("pencil right-hand side is numerically zero");

  ComplexMatrix w(dim, pos.size()), k(dim, zero.size());
  for (std::size_t j = 0; j < pos.size(); ++j) w.set_col(j, en.vectors.col(pos[j]));
  for (std::size_t j = 0; j < zero.size(); ++j) k.set_col(j, en.vectors.col(zero[j]));

  ComplexMatrix mred = adjoint_multiply(w, multiply(m.matrix(), w));
  ComplexMatrix elim;  // maps W-coordinates to the optimal K-coordinates
  if (!zero.empty()) {
    const ComplexMatrix mk = multiply(m.matrix(), k);
    const HermitianMatrix mkk(adjoint_multiply(k, mk));
    const ComplexMatrix mkw = adjoint_multiply(mk, w);
    // pseudo-inverse of M_KK applied to M_KW
    const EigResult ek = hermitian_eig(mkk);
    const double kthr = tol * std::max(1.0, m.norm1());
    ComplexMatrix proj = adjoint_multiply(ek.vectors, mkw);
    for (std::size_t i = 0; i < proj.rows(); ++i) {
      const double ev = ek.values[i];
      const double inv = ev > kthr ? 1.0 / ev : 0.0;
      kernels::scal(inv, proj.row(i));
    }
    elim = multiply(ek.vectors, proj);
    mred -= adjoint_multiply(mkw, elim);
  }

  // Symmetric diagonal scaling turns (mred, diag(nu)) into a standard problem.
  std::vector<double> isq(pos.size());
  for (std::size_t j = 0; j < pos.size(); ++j) isq[j] = 1.0 / std::sqrt(en.values[pos[j]]);
  for (std::size_t i = 0; i < mred.rows(); ++i)
    for (std::size_t j = 0; j < mred.cols(); ++j) mred(i, j) *= isq[i] * isq[j];
  const EigResult er = hermitian_eig(HermitianMatrix(mred));

  Vector c = er.vectors.col(0);
  for (std::size_t j = 0; j < c.size(); ++j) c[j] *= isq[j];
  Vector x = matvec(w, c);
  if (!zero.empty()) {
    const Vector kc = matvec(elim, c);
    const Vector kx = matvec(k, kc);
    kernels::axpy(-1.0, kx, x);
  }
  PencilMin out;
  out.value = er.values.front();
  out.vector = normalized(x);
  fix_phase(out.vector);
  return out;
}

ComplexMatrix psd_nullspace(const HermitianMatrix& m, double tol) {
  const EigResult e = hermitian_eig(m);
  const double thr = tol * std::max(1.0, m.norm1());
  if (!e.values.empty() && e.values.front() < -thr) {
    throw IndefiniteMatrix("matrix is indefinite beyond tolerance (smallest eigenvalue " +
                           std::to_string(e.values.front()) + ")");
  }
  std::size_t k = 0;
  while (k < e.values.size() && e.values[k] <= thr) ++k;
  ComplexMatrix basis(m.dim(), k);
  for (std::size_t j = 0; j < k; ++j) basis.set_col(j, e.vectors.col(j));
  return basis;
}

ComplexMatrix min_frobenius_map(std::span<const cplx> x, std::span<const cplx> b) {
  const double xx = kernels::nrm2sq(x);
  ComplexMatrix d(b.size(), x.size());
  if (xx == 0.0) {
    if (kernels::nrm2sq(b) != 0.0) throw InfeasibleMap("D x = b with x = 0 and b != 0");
    return d;
  }
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) d(i, j) = b[i] * std::conj(x[j]) / xx;
  return d;
}

SingularTriplet smallest_singular_triplet(const ComplexMatrix& m) {
  if (!m.square()) throw std::invalid_argument("smallest_singular_value needs a square matrix");
  const std::size_t n = m.rows();
  SingularTriplet out;
  if (n == 0) return out;
  ComplexMatrix dil(2 * n, 2 * n);
  dil.set_block(0, n, m);
  dil.set_block(n, 0, m.adjoint());
  const EigResult e = hermitian_eig(HermitianMatrix(std::move(dil)));
  // eigenvalues come in pairs +-sigma; the n-th and (n+1)-th straddle zero
  std::size_t best = 0;
  for (std::size_t j = 1; j < e.values.size(); ++j)
    if (std::abs(e.values[j]) < std::abs(e.values[best])) best = j;
  out.sigma = std::abs(e.values[best]);
  const Vector z = e.vectors.col(best);
  Vector v(z.begin() + static_cast<std::ptrdiff_t>(n), z.end());
  const double nv = norm(v);
  if (nv > 0.0) {
    out.right = normalized(v);
  } else {
    out.right.assign(n, cplx{});
    out.right[0] = 1.0;
  }
  fix_phase(out.right);
  return out;
}

double smallest_singular_value(const ComplexMatrix& m) { return smallest_singular_triplet(m).sigma; }

}  // namespace rbe
