#include "rbe/backward_error.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rbe/linalg/kernels.hpp"

namespace rbe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PencilSpec {
  HermitianMatrix m, n;
  ComplexMatrix basis;
  double scale = 1.0;
  const char* witness = "";
};

// Pencil (M, N) on a null-space basis whose smallest eigenvalue times `scale`
// is eta^2, for A, B, P, AB and CP.
std::optional<PencilSpec> pencil_spec(const ErrorMatrices& em, const PerturbationPattern& p, double tol) {
  const std::string s = p.str();
  PencilSpec spec;
  if (s == "A" || s == "B" || s == "AB") {
    spec.basis = psd_nullspace(em.G2, tol);
    spec.m = em.G1;
    if (s == "A") {
      spec.n = em.H1;
      spec.witness = "V*H1V = 0";
    } else if (s == "B") {
      spec.n = em.H2;
      spec.witness = "V*H2V = 0";
    } else {
      spec.n = HermitianMatrix::identity(em.r + em.n);
    }
  } else if (s == "P" || s == "CP") {
    spec.basis = psd_nullspace(em.G1, tol);
    spec.m = em.G2;
    if (s == "P") {
      spec.n = em.H2;
      spec.scale = 1.0 / em.gamma;
      spec.witness = "U*H2U = 0";
    } else {
      spec.n = em.H1 + em.gamma * em.H2;
    }
  } else {
    return std::nullopt;
  }
  spec.m = spec.m.congruence(spec.basis);
  spec.n = spec.n.congruence(spec.basis);
  return spec;
}

struct RowBlocks {
  Vector b1, b2;    // [A - lambda I, B] x and [C, P(lambda)] x
  Vector z1, z2;    // vectors the free blocks act on, stacked
  bool free1 = false, free2 = false;
};

RowBlocks row_blocks(const RosenbrockSystem& sys, cplx lambda, const PerturbationPattern& p,
                     std::span<const cplx> x) {
  const std::size_t r = sys.r(), n = sys.n();
  if (x.size() != r + n) throw std::invalid_argument("minimizer has the wrong dimension");
  const std::span<const cplx> x1 = x.subspan(0, r), x2 = x.subspan(r, n);
  RowBlocks rb;
  rb.b1 = matvec(sys.A(), x1);
  kernels::axpy(-lambda, x1, rb.b1);
  kernels::axpy(1.0, matvec(sys.B(), x2), rb.b1);
  rb.b2 = matvec(sys.C(), x1);
  kernels::axpy(1.0, matvec(evaluate_poly(sys, lambda), x2), rb.b2);

  if (p.A()) rb.z1.insert(rb.z1.end(), x1.begin(), x1.end());
  if (p.B()) rb.z1.insert(rb.z1.end(), x2.begin(), x2.end());
  if (p.C()) rb.z2.insert(rb.z2.end(), x1.begin(), x1.end());
  if (p.P()) {
    cplx pw = 1.0;
    for (std::size_t j = 0; j <= sys.d(); ++j) {
      for (const cplx& v : x2) rb.z2.push_back(pw * v);
      pw *= lambda;
    }
  }
  rb.free1 = p.A() || p.B();
  rb.free2 = p.C() || p.P();
  return rb;
}

// ||b||^2 / ||z||^2 with 0/0 = 0; a row without free blocks contributes nothing.
double row_term(const Vector& b, const Vector& z, bool free) {
  if (!free) return 0.0;
  const double zz = kernels::nrm2sq(z);
  const double bb = kernels::nrm2sq(b);
  if (zz == 0.0) return bb == 0.0 ? 0.0 : kInf;
  return bb / zz;
}

double pencil_residual(const PencilSpec& spec, std::span<const cplx> x) {
  const Vector w = adjoint_matvec(spec.basis, x);
  const double ww = kernels::nrm2sq(w);
  if (ww == 0.0) return kInf;
  // distance of x from the basis range
  Vector back = matvec(spec.basis, w);
  kernels::axpy(-1.0, x, back);
  const double off = norm(back);
  const double mu = spec.m.quadratic_form(w) / spec.n.quadratic_form(w);
  Vector r = spec.m.apply(w);
  kernels::axpy(-mu, spec.n.apply(w), r);
  const double rel = norm(r) / ((spec.m.norm1() + std::abs(mu) * spec.n.norm1()) * std::sqrt(ww));
  return std::max(rel, off);
}

}  // namespace

PerturbationPattern::PerturbationPattern(bool a, bool b, bool c, bool p) : a_(a), b_(b), c_(c), p_(p) {
  if (!(a || b || c || p)) throw std::invalid_argument("perturbation pattern must be nonempty");
}

PerturbationPattern PerturbationPattern::parse(std::string_view s) {
  bool f[4] = {false, false, false, false};
  for (char ch : s) {
    const std::string_view letters = "ABCP";
    const auto pos = letters.find(ch);
    if (pos == std::string_view::npos) {
      throw std::invalid_argument("unknown pattern letter '" + std::string(1, ch) +
                                  "'; valid letters are A, B, C, P");
    }
    if (f[pos]) throw std::invalid_argument("pattern letter '" + std::string(1, ch) + "' repeated");
    f[pos] = true;
  }
  if (s.empty()) throw std::invalid_argument("empty pattern; use a nonempty subset of A, B, C, P");
  return PerturbationPattern(f[0], f[1], f[2], f[3]);
}

bool PerturbationPattern::contains(const PerturbationPattern& o) const {
  return (a_ || !o.a_) && (b_ || !o.b_) && (c_ || !o.c_) && (p_ || !o.p_);
}

std::string PerturbationPattern::str() const {
  std::string s;
  if (a_) s += 'A';
  if (b_) s += 'B';
  if (c_) s += 'C';
  if (p_) s += 'P';
  return s;
}

std::optional<PerturbationPattern> transposed_image(const PerturbationPattern& p) {
  const std::string s = p.str();
  if (s == "C") return PerturbationPattern::parse("B");
  if (s == "AC") return PerturbationPattern::parse("AB");
  if (s == "BP") return PerturbationPattern::parse("CP");
  if (s == "ACP") return PerturbationPattern::parse("ABP");
  return std::nullopt;
}

std::vector<PerturbationPattern> all_patterns() {
  std::vector<PerturbationPattern> out;
  for (int size = 1; size <= 4; ++size) {
    for (int mask = 1; mask < 16; ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) != size) continue;
      out.emplace_back(mask & 1, mask & 2, mask & 4, mask & 8);
    }
  }
  return out;
}

const char* to_string(Method m) {
  switch (m) {
    case Method::ZERO_EIGENVALUE:
      return "ZERO_EIGENVALUE";
    case Method::PENCIL:
      return "PENCIL";
    case Method::SRQ2:
      return "SRQ2";
    case Method::TRANSPOSED_PENCIL:
      return "TRANSPOSED_PENCIL";
    case Method::TRANSPOSED_SRQ2:
      return "TRANSPOSED_SRQ2";
  }
  return "SRQ2";
}

std::optional<Srq2Problem> srq2_formulation(const ErrorMatrices& em, const PerturbationPattern& pattern) {
  const std::string s = pattern.str();
  const double g = em.gamma;
  auto make = [&](double scale2, GParams p) {
    return Srq2Problem({em.G1, scale2 * em.G2, em.H2}, p);
  };
  if (s == "AP") return make(1.0 / g, {1, -1, 0, 1});
  if (s == "BC") return make(1.0, {0, 1, 1, -1});
  if (s == "ABC") return make(1.0, {1, 0, 1, -1});
  if (s == "ABP") return make(1.0 / g, {1, 0, 0, 1});
  if (s == "BCP") return make(1.0, {0, 1, 1, g - 1});
  if (s == "ABCP") return make(1.0, {1, 0, 1, g - 1});
  return std::nullopt;
}

RosenbrockSystem zero_like(const RosenbrockSystem& sys) {
  std::vector<ComplexMatrix> poly(sys.poly().size(), ComplexMatrix(sys.n(), sys.n()));
  return RosenbrockSystem(ComplexMatrix(sys.r(), sys.r()), ComplexMatrix(sys.r(), sys.n()),
                          ComplexMatrix(sys.n(), sys.r()), std::move(poly));
}

RosenbrockSystem subtract(const RosenbrockSystem& sys, const RosenbrockSystem& delta) {
  std::vector<ComplexMatrix> poly;
  for (std::size_t j = 0; j < sys.poly().size(); ++j) poly.push_back(sys.poly()[j] - delta.poly()[j]);
  return RosenbrockSystem(sys.A() - delta.A(), sys.B() - delta.B(), sys.C() - delta.C(), std::move(poly));
}

double perturbation_objective(const RosenbrockSystem& sys, cplx lambda, const PerturbationPattern& pattern,
                              std::span<const cplx> x) {
  const RowBlocks rb = row_blocks(sys, lambda, pattern, x);
  return std::sqrt(row_term(rb.b1, rb.z1, rb.free1) + row_term(rb.b2, rb.z2, rb.free2));
}

RosenbrockSystem reconstruct_perturbation(const RosenbrockSystem& sys, cplx lambda, const PerturbationPattern& p,
                                          std::span<const cplx> x) {
  const std::size_t r = sys.r(), n = sys.n();
  const RowBlocks rb = row_blocks(sys, lambda, p, x);
  RosenbrockSystem delta = zero_like(sys);
  ComplexMatrix da = delta.A(), db = delta.B(), dc = delta.C();
  std::vector<ComplexMatrix> dp = delta.poly();

  if (rb.free1) {
    const ComplexMatrix d1 = min_frobenius_map(rb.z1, rb.b1);
    std::size_t off = 0;
    if (p.A()) {
      da = d1.block(0, off, r, r);
      off += r;
    }
    if (p.B()) db = d1.block(0, off, r, n);
  }
  if (rb.free2) {
    const ComplexMatrix d2 = min_frobenius_map(rb.z2, rb.b2);
    std::size_t off = 0;
    if (p.C()) {
      dc = d2.block(0, off, n, r);
      off += r;
    }
    if (p.P()) {
      for (std::size_t j = 0; j <= sys.d(); ++j) {
        dp[j] = d2.block(0, off, n, n);
        off += n;
      }
    }
  }
  return RosenbrockSystem(std::move(da), std::move(db), std::move(dc), std::move(dp));
}

Certificate certify(const RosenbrockSystem& sys, cplx lambda, const PerturbationPattern& pattern,
                    const BackwardErrorResult& result) {
  Certificate c;
  const ComplexMatrix s = evaluate(sys, lambda);
  const double sigma_tol = 1e-8 * std::max(1.0, s.norm1());
  auto finish = [&c] {
    c.pass = c.normOk && c.sigmaOk && c.nepvOk && c.pencilOk;
    return c;
  };

  if (!std::isfinite(result.eta)) {
    c.note = "eta is infinite: no perturbation to certify";
    return finish();
  }
  if (result.method == Method::ZERO_EIGENVALUE) {
    c.normMatch = std::abs(result.eta);
    c.normOk = result.eta == 0.0;
    c.sigmaMinPerturbed = smallest_singular_value(s);
    c.sigmaOk = c.sigmaMinPerturbed <= sigma_tol;
    return finish();
  }
  if (!result.x) {
    c.note = "result carries no minimizer";
    return finish();
  }

  RosenbrockSystem work = sys;
  PerturbationPattern core = pattern;
  if (result.transposed) {
    const auto img = transposed_image(pattern);
    if (!img) {
      c.note = "pattern " + pattern.str() + " is not computed through the transposed system";
      return finish();
    }
    work = transpose_system(sys);
    core = *img;
  }
  if (result.x->size() != sys.r() + sys.n() || norm(*result.x) == 0.0) {
    c.note = "minimizer has the wrong dimension or is zero";
    return finish();
  }
  const Vector x = normalized(*result.x);

  RosenbrockSystem delta = zero_like(sys);
  try {
    const RosenbrockSystem dcore = reconstruct_perturbation(work, lambda, core, x);
    delta = result.transposed ? transpose_system(dcore) : dcore;
  } catch (const InfeasibleMap& e) {
    c.note = std::string("reconstruction infeasible at x: ") + e.what();
    c.normMatch = kInf;
    c.sigmaMinPerturbed = smallest_singular_value(s);
    c.sigmaOk = c.sigmaMinPerturbed <= sigma_tol;
    return finish();
  }

  const double dnorm = system_norm(delta);
  c.normMatch = std::abs(dnorm - result.eta);
  c.normOk = c.normMatch <= 1e-10 * result.eta || (result.eta == 0.0 && dnorm == 0.0);
  c.sigmaMinPerturbed = smallest_singular_value(evaluate(subtract(sys, delta), lambda));
  c.sigmaOk = c.sigmaMinPerturbed <= sigma_tol;

  const ErrorMatrices em = assemble_error_matrices(work, lambda);
  if (result.method == Method::PENCIL || result.method == Method::TRANSPOSED_PENCIL) {
    const auto spec = pencil_spec(em, core, 1e-10);
    if (spec) {
      c.pencilResidual = pencil_residual(*spec, x);
      c.pencilOk = *c.pencilResidual <= 1e-9;
    }
  } else if (result.method == Method::SRQ2 || result.method == Method::TRANSPOSED_SRQ2) {
    const auto prob = srq2_formulation(em, core);
    if (prob && is_differentiable(*prob, x)) {
      c.nepvResidual = nepv_residual(nepv_matrix(*prob, x), x);
      c.nepvOk = *c.nepvResidual <= 1e-8;
    }
  }
  return finish();
}

BackwardErrorResult backward_error(const RosenbrockSystem& sys, cplx lambda, const PerturbationPattern& pattern,
                                   const BackwardErrorOptions& opts) {
  BackwardErrorResult res;
  res.pattern = pattern;
  res.lambda = lambda;

  const ComplexMatrix s = evaluate(sys, lambda);
  const SingularTriplet trip = smallest_singular_triplet(s);
  if (trip.sigma <= 1e-12 * std::max(1.0, s.norm1())) {
    res.eta = 0.0;
    res.method = Method::ZERO_EIGENVALUE;
    res.x = trip.right;
    res.perturbation = zero_like(sys);
    res.certificate = certify(sys, lambda, pattern, res);
    return res;
  }

  const auto img = transposed_image(pattern);
  res.transposed = img.has_value();
  const PerturbationPattern core = img.value_or(pattern);
  const RosenbrockSystem work = res.transposed ? transpose_system(sys) : sys;
  const ErrorMatrices em = assemble_error_matrices(work, lambda);

  Vector x;
  if (const auto spec = pencil_spec(em, core, opts.nullTol)) {
    res.method = res.transposed ? Method::TRANSPOSED_PENCIL : Method::PENCIL;
    const std::size_t k = spec->basis.cols();
    if (k == 0 || spec->n.norm1() <= 1e-12 * std::max<double>(1.0, static_cast<double>(k))) {
      res.eta = kInf;
      res.witness = k == 0 ? "null space basis is empty" : spec->witness;
      res.certificate = certify(sys, lambda, pattern, res);
      return res;
    }
    const PencilMin pm = semidefinite_pencil_smallest(spec->m, spec->n, opts.nullTol);
    x = normalized(matvec(spec->basis, pm.vector));
    fix_phase(x);
  } else {
    res.method = res.transposed ? Method::TRANSPOSED_SRQ2 : Method::SRQ2;
    const Srq2Problem prob = *srq2_formulation(em, core);
    const Srq2Solution sol = solve(prob, opts.srq2);
    x = sol.x;
    res.converged = sol.converged;
    res.iterations = sol.iterations;
    res.solverResidual = sol.nepvResidual;
    res.shiftsUsed = sol.shiftsUsed;
  }

  // eta from the row-block form at x: the same quantity as the quadratic
  // forms, without squaring the blocks of S(lambda)
  res.eta = perturbation_objective(work, lambda, core, x);
  res.x = x;
  if (std::isfinite(res.eta)) {
    try {
      const RosenbrockSystem d = reconstruct_perturbation(work, lambda, core, x);
      res.perturbation = res.transposed ? transpose_system(d) : d;
    } catch (const InfeasibleMap&) {
      // left absent; certify records the failure
    }
  }
  res.certificate = certify(sys, lambda, pattern, res);
  return res;
}

}  // namespace rbe
