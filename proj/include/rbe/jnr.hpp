#pragma once

#include <array>
#include <vector>

#include "rbe/srq2.hpp"

namespace rbe {

using Vec3 = std::array<double, 3>;

struct JnrPoint {
  Vec3 direction{};
  Vec3 point{};          // rho(witness)
  double supportValue = 0.0;  // lambda_min(v1 A1 + v2 A2 + v3 A3)
  Vector witness;
};

/// [x^*A1x, x^*A2x, x^*A3x]. Throws std::logic_error if an imaginary part
/// exceeds 1e-12 times the matrix scale, which would mean a non-Hermitian input.
Vec3 rho(const MatrixTriple& m, std::span<const cplx> x);

/// Supporting point of the joint numerical range for each outer normal.
/// Directions are processed in parallel; output order follows input order.
std::vector<JnrPoint> boundary_sample(const MatrixTriple& m, const std::vector<Vec3>& directions);

/// N points on the unit sphere from the Fibonacci spiral, from the north pole
/// (0, 0, 1) down to the south pole; N = 1 gives the north pole only.
std::vector<Vec3> direction_grid(std::size_t n);

/// grad g(y) for g(y) = y1/(a1 + b1 y3) + y2/(a2 + b2 y3); throws
/// std::domain_error where a denominator vanishes.
Vec3 g_gradient(const GParams& p, const Vec3& y);
double g_value(const GParams& p, const Vec3& y);

struct OptimalityCertificate {
  Vec3 gradDirection{};
  double supportGap = 0.0;  // v . rho(x) - lambda_min(H_v) >= 0
};

OptimalityCertificate optimality_certificate(const MatrixTriple& m, const GParams& p, std::span<const cplx> x);

struct JnrDiagnostic {
  double gStar = 0.0;
  double minGap = 0.0;  // min over samples of g(y) - g(y_star)
  std::size_t argmin = 0;
};

/// DIAGNOSTIC: evidence, not a proof, that no sampled boundary point beats
/// g(y_star). Points where g is undefined or infinite are skipped.
JnrDiagnostic sample_diagnostic(const GParams& p, const Vec3& yStar, const std::vector<JnrPoint>& samples);

}  // namespace rbe
