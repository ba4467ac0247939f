#include "rbe/jnr.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rbe/linalg/kernels.hpp"
#include "rbe/parallel.hpp"

namespace rbe {

Vec3 rho(const MatrixTriple& m, std::span<const cplx> x) {
  Vec3 y{};
  for (std::size_t i = 0; i < 3; ++i) {
    const cplx q = dotc(x, m[i].apply(x));
    const double scale = std::max(1.0, m[i].norm1()) * kernels::nrm2sq(x);
    if (std::abs(q.imag()) > 1e-12 * scale) throw std::logic_error("quadratic form has a nonzero imaginary part");
    y[i] = q.real();
  }
  return y;
}

std::vector<JnrPoint> boundary_sample(const MatrixTriple& m, const std::vector<Vec3>& directions) {
  if (m[0].dim() == 0) throw std::invalid_argument("joint numerical range of empty matrices");
  std::vector<JnrPoint> out(directions.size());
  parallel_for(directions.size(), [&](std::size_t k) {
    const Vec3& v = directions[k];
    ComplexMatrix hv = m[0].matrix();
    hv *= v[0];
    hv += cplx(v[1]) * m[1].matrix();
    hv += cplx(v[2]) * m[2].matrix();
    const EigResult e = hermitian_eig(HermitianMatrix(std::move(hv)));
    JnrPoint& pt = out[k];
    pt.direction = v;
    pt.witness = e.vectors.col(0);
    pt.point = rho(m, pt.witness);
    pt.supportValue = e.values.front();
  });
  return out;
}

std::vector<Vec3> direction_grid(std::size_t n) {
  if (n == 0) throw std::invalid_argument("direction grid needs at least one point");
  std::vector<Vec3> out(n);
  if (n == 1) {
    out[0] = {0.0, 0.0, 1.0};
    return out;
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    Vec3 v{rad * std::cos(phi), rad * std::sin(phi), z};
    const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    for (double& c : v) c /= len;
    out[i] = v;
  }
  return out;
}

double g_value(const GParams& p, const Vec3& y) {
  return y[0] / (p.alpha1 + p.beta1 * y[2]) + y[1] / (p.alpha2 + p.beta2 * y[2]);
}

Vec3 g_gradient(const GParams& p, const Vec3& y) {
  const double d1 = p.alpha1 + p.beta1 * y[2];
  const double d2 = p.alpha2 + p.beta2 * y[2];
  if (d1 == 0.0 || d2 == 0.0) throw std::domain_error("g is not differentiable where a denominator vanishes");
  return {1.0 / d1, 1.0 / d2, -(p.beta1 * y[0] / (d1 * d1) + p.beta2 * y[1] / (d2 * d2))};
}

OptimalityCertificate optimality_certificate(const MatrixTriple& m, const GParams& p, std::span<const cplx> x) {
  const Srq2Problem prob(m, p);
  const Vector xu = normalized(x);
  if (!is_differentiable(prob, xu)) throw std::domain_error("x is a non-differentiable point of g");
  const Vec3 y = rho(m, xu);
  OptimalityCertificate c;
  c.gradDirection = g_gradient(p, y);
  const auto pts = boundary_sample(m, {c.gradDirection});
  const Vec3& v = c.gradDirection;
  c.supportGap = v[0] * y[0] + v[1] * y[1] + v[2] * y[2] - pts.front().supportValue;
  return c;
}

JnrDiagnostic sample_diagnostic(const GParams& p, const Vec3& yStar, const std::vector<JnrPoint>& samples) {
  JnrDiagnostic d;
  d.gStar = g_value(p, yStar);
  d.minGap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Vec3& y = samples[k].point;
    const double d1 = p.alpha1 + p.beta1 * y[2], d2 = p.alpha2 + p.beta2 * y[2];
    if (!(d1 > 0.0) || !(d2 > 0.0)) continue;
    const double gap = g_value(p, y) - d.gStar;
    if (gap < d.minGap) {
      d.minGap = gap;
      d.argmin = k;
    }
  }
  return d;
}

}  // namespace rbe
