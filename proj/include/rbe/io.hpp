#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rbe/backward_error.hpp"
#include "rbe/jnr.hpp"
#include "rbe/rosenbrock.hpp"
#include "rbe/srq2.hpp"

namespace rbe::io {

inline constexpr const char* kSchemaVersion = "1.0";

/// Malformed input: bad JSON, ragged or non-finite arrays, inconsistent shapes.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest decimal string that reads back to the same binary64.
std::string format_double(double v);

/// `a+bi` or `a-bi` with both parts written with a decimal point, e.g. 1.0+2.0i,
/// -0.5-1.25e-3i. Exponents are allowed after the point.
cplx parse_complex_literal(std::string_view s);
std::string format_complex_literal(cplx z);

std::string serialize_system(const RosenbrockSystem& sys);
RosenbrockSystem parse_system(std::string_view json);

struct Srq2ProblemDocument {
  MatrixTriple matrices;
  GParams params;
};

/// {"schemaVersion", "kind": "srq2", "A1", "A2", "A3", "g": {alpha1, beta1, alpha2, beta2}}
std::string serialize_srq2_problem(const Srq2ProblemDocument& doc);
Srq2ProblemDocument parse_srq2_problem(std::string_view json);
/// True when the document declares "kind": "srq2".
bool is_srq2_document(std::string_view json);

struct SolverInfo {
  std::size_t iterations = 0;
  std::optional<double> residual;
  std::vector<double> shiftsUsed;
  bool converged = true;

  friend bool operator==(const SolverInfo&, const SolverInfo&) = default;
};

struct ResultDocument {
  std::string pattern;
  cplx lambda;
  double eta = 0.0;
  std::string method;
  std::optional<Vector> x;
  bool transposed = false;  // x belongs to the transposed system
  std::string witness;
  Certificate certificates;
  SolverInfo solver;

  friend bool operator==(const ResultDocument&, const ResultDocument&) = default;
};

ResultDocument make_result_document(const BackwardErrorResult& r);
/// Inverse of make_result_document for the fields the document carries; the
/// perturbation itself is not stored and is recomputed by certify.
BackwardErrorResult to_result(const ResultDocument& doc);

std::string serialize_result(const ResultDocument& doc);
ResultDocument parse_result(std::string_view json);

/// Header `vx,vy,vz,y1,y2,y3,support`, one row per point, LF line endings.
std::string jnr_csv(const std::vector<JnrPoint>& points);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace rbe::io
