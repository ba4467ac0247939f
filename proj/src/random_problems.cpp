#include "rbe/random_problems.hpp"

namespace rbe {

namespace {

ComplexMatrix complex_normal_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  return m;
}

HermitianMatrix gram(std::mt19937_64& rng, std::size_t n, std::size_t rank) {
  const ComplexMatrix z = complex_normal_matrix(rng, n, rank, 1.0);
  return HermitianMatrix(multiply(z, z.adjoint()));
}

}  // namespace

std::string_view to_string(Srq2Template t) {
  switch (t) {
    case Srq2Template::AP:
      return "AP";
    case Srq2Template::BC:
      return "BC";
    case Srq2Template::ABC:
      return "ABC";
    case Srq2Template::ABP:
      return "ABP";
    case Srq2Template::ACP:
      return "ACP";
    case Srq2Template::BCP:
      return "BCP";
    case Srq2Template::ABCP:
      return "ABCP";
  }
  return "ABCP";
}

Srq2Problem make_template_problem(Srq2Template t, HermitianMatrix a1, HermitianMatrix a2, HermitianMatrix a3,
                                  double gamma) {
  GParams p;
  switch (t) {
    case Srq2Template::AP:
      p = {1, -1, 0, 1};
      a2 *= 1.0 / gamma;
      break;
    case Srq2Template::BC:
      p = {0, 1, 1, -1};
      break;
    case Srq2Template::ABC:
      p = {1, 0, 1, -1};
      break;
    case Srq2Template::ABP:
      p = {1, 0, 0, 1};
      a2 *= 1.0 / gamma;
      break;
    case Srq2Template::ACP:
      p = {1, -1, 1, gamma - 1};
      break;
    case Srq2Template::BCP:
      p = {0, 1, 1, gamma - 1};
      break;
    case Srq2Template::ABCP:
      p = {1, 0, 1, gamma - 1};
      break;
  }
  return Srq2Problem({std::move(a1), std::move(a2), std::move(a3)}, p);
}

Srq2Problem random_srq2(std::mt19937_64& rng, Srq2Template t, const RandomSrq2Options& opts) {
  const std::size_t n = opts.n;
  const std::size_t rank = opts.rank == 0 ? n : opts.rank;
  HermitianMatrix a1 = gram(rng, n, rank);
  HermitianMatrix a2 = gram(rng, n, rank);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool projector = unit(rng) < 0.5;
  std::vector<double> diag(n);
  if (projector) {
    // rank in [1, n-1] when n > 1 so both blocks of the splitting are present
    const std::size_t k = n > 1 ? 1 + static_cast<std::size_t>(unit(rng) * static_cast<double>(n - 1)) : 1;
    for (std::size_t i = 0; i < n; ++i) diag[i] = i < k ? 1.0 : 0.0;
  } else {
    for (double& v : diag) v = unit(rng);
  }
  const ComplexMatrix q = hermitian_eig(HermitianMatrix(complex_normal_matrix(rng, n, n, 1.0))).vectors;
  ComplexMatrix qd = q;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) qd(i, j) *= diag[j];
  HermitianMatrix a3(multiply(qd, q.adjoint()));

  const double gamma = 1.0 + 4.0 * unit(rng);
  return make_template_problem(t, std::move(a1), std::move(a2), std::move(a3), gamma);
}

RosenbrockSystem random_system(std::mt19937_64& rng, const RandomSystemOptions& opts) {
  ComplexMatrix a = complex_normal_matrix(rng, opts.r, opts.r, opts.scale);
  ComplexMatrix b = complex_normal_matrix(rng, opts.r, opts.n, opts.scale);
  ComplexMatrix c = complex_normal_matrix(rng, opts.n, opts.r, opts.scale);
  std::vector<ComplexMatrix> poly;
  for (std::size_t j = 0; j <= opts.d; ++j) poly.push_back(complex_normal_matrix(rng, opts.n, opts.n, opts.scale));
  return RosenbrockSystem(std::move(a), std::move(b), std::move(c), std::move(poly));
}

}  // namespace rbe
