#include "rbe/srq2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "rbe/linalg/kernels.hpp"
#include "rbe/parallel.hpp"

namespace rbe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPsdTol = 1e-12;
constexpr double kAcceptSlack = 1e-14;
constexpr double kPerturbSize = 1e-8;
constexpr std::uint64_t kPerturbSeed = 0x5ca1ab1e;

void require_psd(const HermitianMatrix& m, const char* what) {
  const double lmin = hermitian_eig(m).values.front();
  if (lmin < -kPsdTol * std::max(1.0, m.norm1())) {
    throw std::invalid_argument(std::string(what) + " is not positive semidefinite (smallest eigenvalue " +
                                std::to_string(lmin) + ")");
  }
}

double quotient(double num, double den, double eps) {
  if (den <= eps) return num <= eps ? 0.0 : kInf;
  return num / den;
}

Vector complex_normal(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  Vector v(n);
  for (cplx& z : v) z = cplx(nd(rng), nd(rng));
  return v;
}

// Random tangent step of size kPerturbSize, renormalized.
Vector perturb(std::span<const cplx> x, std::mt19937_64& rng) {
  Vector d = complex_normal(rng, x.size());
  const cplx c = kernels::dotc(x, d);
  kernels::axpy(-c, x, d);
  const double nd = norm(d);
  Vector out(x.begin(), x.end());
  if (nd > 0.0) kernels::axpy(kPerturbSize / nd, d, out);
  return normalized(out);
}

bool lex_less(const Vector& a, const Vector& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return a.size() < b.size();
}

// Quadratic forms, objective and H(x)x without forming H, for the oracle's
// inner loop.
class FastEval {
 public:
  explicit FastEval(const Srq2Problem& p) : p_(p), n_(p.dim()) {
    for (std::size_t i = 0; i < 3; ++i) u_[i].resize(n_);
  }

  // Fills u_i = A_i x and the quadratic forms; returns the objective.
  double eval(std::span<const cplx> x) {
    const double xx = kernels::nrm2sq(x);
    for (std::size_t i = 0; i < 3; ++i) {
      const ComplexMatrix& a = p_.A(i).matrix();
      double q = 0.0;
      for (std::size_t r = 0; r < n_; ++r) {
        // explicit real arithmetic keeps the loop free of the Annex G complex multiply
        double sr = 0.0, si = 0.0;
        const cplx* row = &a(r, 0);
        for (std::size_t c = 0; c < n_; ++c) {
          const double ar = row[c].real(), ai = row[c].imag();
          const double xr = x[c].real(), xi = x[c].imag();
          sr += ar * xr - ai * xi;
          si += ar * xi + ai * xr;
        }
        u_[i][r] = cplx(sr, si);
        q += x[r].real() * sr + x[r].imag() * si;
      }
      q_[i] = q;
    }
    double f = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      den_[i] = p_.alpha(i) * xx + p_.beta(i) * q_[2];
      f += quotient(q_[i], den_[i], p_.eps(i) * xx);
    }
    return f;
  }

  bool differentiable(double xx) const { return den_[0] > p_.eps(0) * xx && den_[1] > p_.eps(1) * xx; }

  // H(x) x for unit x after eval(x).
  void hx(std::span<cplx> out) const {
    std::fill(out.begin(), out.end(), cplx{});
    for (std::size_t i = 0; i < 2; ++i) {
      const double inv = 1.0 / den_[i];
      const double w3 = -q_[i] * p_.beta(i) * inv * inv;
      for (std::size_t r = 0; r < n_; ++r) out[r] += inv * u_[i][r] + w3 * u_[2][r];
    }
  }

 private:
  const Srq2Problem& p_;
  std::size_t n_;
  std::array<Vector, 3> u_;
  std::array<double, 3> q_{};
  std::array<double, 2> den_{};
};

double polish(const Srq2Problem& prob, Vector& x, FastEval& ev, std::array<Vector, 3>& work) {
  constexpr int kSteps = 200;
  constexpr int kBacktracks = 40;
  constexpr double kArmijo = 1e-4;
  const std::size_t n = x.size();
  Vector& g = work[0];
  Vector& trial = work[1];
  Vector& gprev = work[2];
  const double hscale = prob.A(0).norm1() + prob.A(1).norm1() + prob.A(2).norm1();
  double f = ev.eval(x);
  double step = 1.0 / (hscale + 1.0);
  for (int it = 0; it < kSteps; ++it) {
    if (!std::isfinite(f) || !ev.differentiable(1.0)) break;
    ev.hx(g);
    // project onto the tangent space at x
    const cplx c = kernels::dotc(x, g);
    kernels::axpy(-c, x, g);
    const double gg = kernels::nrm2sq(g);
    if (std::sqrt(gg) <= 1e-10 * (hscale + 1.0)) break;
    if (it > 0) {
      // Barzilai-Borwein trial step from the last displacement and gradient change
      double sy = 0.0, ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const cplx si = x[i] - trial[i];
        const cplx yi = g[i] - gprev[i];
        sy += si.real() * yi.real() + si.imag() * yi.imag();
        ss += std::norm(si);
      }
      if (sy > 0.0) step = std::clamp(ss / sy, 1e-12, 1e6);
    }
    bool accepted = false;
    double t = step;
    gprev = g;
    for (int bt = 0; bt < kBacktracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - t * g[i];
      kernels::scal(1.0 / std::sqrt(kernels::nrm2sq(trial)), trial);
      const double ft = ev.eval(trial);
      // the directional derivative of f along -g is -2||g||^2
      if (ft <= f - kArmijo * t * 2.0 * gg) {
        x.swap(trial);  // trial now holds the previous iterate
        f = ft;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    step = t;
  }
  return f;
}

}  // namespace

const char* to_string(SolutionSource s) {
  switch (s) {
    case SolutionSource::SCF:
      return "SCF";
    case SolutionSource::NONDIFF_1:
      return "NONDIFF_1";
    case SolutionSource::NONDIFF_2:
      return "NONDIFF_2";
  }
  return "SCF";
}

Srq2Problem::Srq2Problem(MatrixTriple m, GParams p) : m_(std::move(m)), p_(p) {
  const std::size_t n = m_[0].dim();
  if (n == 0) throw std::invalid_argument("SRQ2 matrices must be nonempty");
  if (m_[1].dim() != n || m_[2].dim() != n) throw std::invalid_argument("SRQ2 matrices differ in dimension");
  for (double v : {p.alpha1, p.beta1, p.alpha2, p.beta2}) {
    if (!std::isfinite(v)) throw std::invalid_argument("SRQ2 parameters must be finite");
  }
  require_psd(m_[0], "A1");
  require_psd(m_[1], "A2");
  require_psd(m_[2], "A3");
  for (std::size_t i = 0; i < 2; ++i) {
    den_[i] = shifted(alpha(i), beta(i), m_[2]);
    require_psd(den_[i], i == 0 ? "alpha1 I + beta1 A3" : "alpha2 I + beta2 A3");
    eps_[i] = 1e-12 * std::max({1.0, m_[i].norm1(), den_[i].norm1()});
  }
  const HermitianMatrix sum = den_[0] + den_[1];
  comnull_ = hermitian_eig(sum).values.front() > 1e-10 * std::max(1.0, sum.norm1());
}

double objective(const Srq2Problem& prob, std::span<const cplx> x) {
  const double xx = kernels::nrm2sq(x);
  double f = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    f += quotient(prob.A(i).quadratic_form(x), prob.denominator(i).quadratic_form(x), prob.eps(i) * xx);
  }
  return f;
}

bool is_differentiable(const Srq2Problem& prob, std::span<const cplx> x) {
  const double xx = kernels::nrm2sq(x);
  for (std::size_t i = 0; i < 2; ++i) {
    if (prob.denominator(i).quadratic_form(x) <= prob.eps(i) * xx) return false;
  }
  return true;
}

HermitianMatrix nepv_matrix(const Srq2Problem& prob, std::span<const cplx> x) {
  const std::size_t n = prob.dim();
  const double y3 = prob.A(2).quadratic_form(x);
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < 2; ++i) {
    const double den = prob.alpha(i) + prob.beta(i) * y3;
    if (den <= prob.eps(i)) throw std::domain_error("H(x) is undefined at a non-differentiable point");
    const double yi = prob.A(i).quadratic_form(x);
    h += cplx(1.0 / den) * prob.A(i).matrix();
    h += cplx(-yi * prob.beta(i) / (den * den)) * prob.A(2).matrix();
  }
  return HermitianMatrix(std::move(h));
}

double nepv_residual(const HermitianMatrix& h, std::span<const cplx> x) {
  Vector hx = h.apply(x);
  const double s = h.quadratic_form(x);
  kernels::axpy(-s, x, hx);
  return norm(hx) / (h.norm1() + 1.0);
}

namespace {

struct ScfStep {
  Vector x;
  HermitianMatrix h;  // empty at a non-differentiable point
  double f = kInf;
  double res = kInf;
  double sigma = 0.0;
};

ScfStep make_step(const Srq2Problem& prob, Vector x, double sigma) {
  ScfStep s;
  s.f = objective(prob, x);
  if (is_differentiable(prob, x)) {
    s.h = nepv_matrix(prob, x);
    s.res = nepv_residual(s.h, x);
  }
  s.x = std::move(x);
  s.sigma = sigma;
  return s;
}

}  // namespace

Srq2Solution scf_solve(const Srq2Problem& prob, std::span<const cplx> x0, const ScfOptions& opts) {
  if (x0.size() != prob.dim()) throw std::invalid_argument("start vector has the wrong dimension");
  std::mt19937_64 rng(kPerturbSeed);
  Vector x = normalized(x0);
  for (int attempt = 0; attempt < 8 && !is_differentiable(prob, x); ++attempt) x = perturb(x, rng);

  Srq2Solution out;
  out.source = SolutionSource::SCF;
  if (!is_differentiable(prob, x)) {
    out.x = x;
    fix_phase(out.x);
    out.value = objective(prob, out.x);
    return out;
  }

  ScfStep cur = make_step(prob, std::move(x), 0.0);
  Vector best = cur.x;
  double bestf = cur.f;
  std::vector<double> shifts;
  std::size_t k = 0;
  bool converged = false;

  for (;; ++k) {
    if (cur.f < bestf) {
      bestf = cur.f;
      best = cur.x;
    }
    if (cur.res <= opts.tol) {
      converged = true;
      break;
    }
    if (k >= opts.maxIter) break;

    const EigResult e = hermitian_eig(cur.h);
    double delta = e.values.size() >= 2 ? e.values[1] - e.values[0] : 0.0;
    if (delta <= 1e-14) delta = std::max(1e-8, 1e-8 * cur.h.norm1());

    // Objective reduction is sought along the whole shift schedule first; a
    // residual reduction is taken only when no shift lowers f, or when f has
    // reached rounding level and can no longer register progress.
    std::optional<ScfStep> next, fallback;
    for (std::size_t t = 0; t <= opts.maxShiftTries && !next; ++t) {
      const double sigma = t == 0 ? 0.0 : std::ldexp(delta, static_cast<int>(t));
      // H + sigma (I - x x^*) shares eigenvectors with H - sigma x x^*; the shift
      // favours the current iterate so large sigma gives a short, damped step
      Vector cand =
          t == 0 ? e.vectors.col(0) : hermitian_eig(rank_one_update(cur.h, -sigma, cur.x)).vectors.col(0);
      ScfStep s = make_step(prob, std::move(cand), sigma);
      const bool f_flat = std::abs(s.f - cur.f) <= 1e-13 * std::max(1.0, std::abs(cur.f));
      if (s.f < cur.f - kAcceptSlack) {
        next = std::move(s);
      } else if (s.res < cur.res - kAcceptSlack) {
        if (t == 0 && f_flat) {
          next = std::move(s);
        } else if (!fallback) {
          fallback = std::move(s);
        }
      }
    }
    if (!next) next = std::move(fallback);
    if (!next) break;

    if (!std::isfinite(next->res)) {
      // landed on a non-differentiable point: step off it to keep H defined
      if (next->f < bestf) {
        bestf = next->f;
        best = next->x;
      }
      Vector moved = next->x;
      for (int attempt = 0; attempt < 8 && !is_differentiable(prob, moved); ++attempt) moved = perturb(moved, rng);
      if (!is_differentiable(prob, moved)) break;
      const double sigma = next->sigma;
      next = make_step(prob, std::move(moved), sigma);
    }
    shifts.push_back(next->sigma);
    cur = std::move(*next);
  }

  out.iterations = k;
  out.shiftsUsed = std::move(shifts);
  out.converged = converged;
  out.x = converged ? cur.x : best;
  fix_phase(out.x);
  out.value = objective(prob, out.x);
  if (is_differentiable(prob, out.x)) {
    const HermitianMatrix hf = nepv_matrix(prob, out.x);
    out.nepvResidual = nepv_residual(hf, out.x);
    out.smallestEigGap = hf.quadratic_form(out.x) - hermitian_eig(hf).values.front();
  }
  return out;
}


std::vector<Srq2Solution> nondiff_candidates(const Srq2Problem& prob) {
  if (!prob.common_null_ok()) {
    throw std::invalid_argument("common-null condition fails: the two denominators share a null vector");
  }
  std::vector<Srq2Solution> out;
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t j = 1 - i;
    const HermitianMatrix q = prob.A(i) + prob.denominator(i);
    const ComplexMatrix k = psd_nullspace(q, 1e-10);
    if (k.cols() == 0) continue;
    PencilMin pm;
    try {
      pm = definite_pencil_smallest(prob.A(j).congruence(k), prob.denominator(j).congruence(k));
    } catch (const NotPositiveDefinite&) {
      throw LinalgError("restricted denominator of the surviving quotient is not positive definite");
    }
    Srq2Solution s;
    s.x = normalized(matvec(k, pm.vector));
    fix_phase(s.x);
    s.value = objective(prob, s.x);
    s.source = i == 0 ? SolutionSource::NONDIFF_1 : SolutionSource::NONDIFF_2;
    s.converged = true;
    out.push_back(std::move(s));
  }
  return out;
}

Vector random_unit_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return normalized(complex_normal(rng, n));
}

Srq2Solution solve(const Srq2Problem& prob, const SolveOptions& opts) {
  const std::size_t n = prob.dim();
  std::vector<Vector> starts;
  std::mt19937_64 rng(opts.seed);
  for (std::size_t i = 0; i < opts.restarts; ++i) starts.push_back(normalized(complex_normal(rng, n)));
  for (std::size_t i = 0; i < 2; ++i) {
    try {
      starts.push_back(semidefinite_pencil_smallest(prob.A(i), prob.denominator(i)).vector);
    } catch (const LinalgError&) {
      // quotient i has an identically zero denominator; no warm start from it
    }
  }

  std::vector<Srq2Solution> cands(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) { cands[i] = scf_solve(prob, starts[i], opts.scf); });
  if (prob.common_null_ok()) {
    for (Srq2Solution& s : nondiff_candidates(prob)) cands.push_back(std::move(s));
  }
  if (cands.empty()) throw std::runtime_error("SRQ2 solve produced no candidate");

  double fmin = kInf;
  for (const Srq2Solution& s : cands) fmin = std::min(fmin, s.value);
  const double band = std::isfinite(fmin) ? 1e-12 * std::max(1.0, std::abs(fmin)) : 0.0;
  const Srq2Solution* pick = nullptr;
  for (const Srq2Solution& s : cands) {
    const bool tied = std::isfinite(fmin) ? s.value <= fmin + band : s.value == fmin;
    if (!tied) continue;
    if (pick == nullptr || (s.converged && !pick->converged) ||
        (s.converged == pick->converged && lex_less(s.x, pick->x))) {
      pick = &s;
    }
  }
  return *pick;
}

double brute_force_oracle(const Srq2Problem& prob, std::size_t budget, std::uint64_t seed) {
  const std::size_t n = prob.dim();
  std::mt19937_64 rng(seed);
  std::vector<Vector> samples(budget);
  for (Vector& v : samples) v = normalized(complex_normal(rng, n));

  const std::size_t chunks = std::min<std::size_t>(budget, 64);
  std::vector<double> chunk_min(chunks, kInf);
  parallel_for(chunks, [&](std::size_t c) {
    FastEval ev(prob);
    std::array<Vector, 3> work{Vector(n), Vector(n), Vector(n)};
    for (std::size_t s = c; s < budget; s += chunks) {
      chunk_min[c] = std::min(chunk_min[c], polish(prob, samples[s], ev, work));
    }
  });
  double best = kInf;
  for (double v : chunk_min) best = std::min(best, v);
  return best;
}

}  // namespace rbe
