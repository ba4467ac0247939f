#include "rbe/io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace rbe::io {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Non-finite values travel as strings since JSON has no literal for them.
json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_number(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InputError(what + " must be a number");
}

double get_finite(const json& j, const std::string& what) {
  if (!j.is_number()) throw InputError(what + " must be a finite number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(what + " must be a finite number");
  return v;
}

std::optional<double> get_optional(const json& j, const std::string& what) {
  if (j.is_null()) return std::nullopt;
  return get_number(j, what);
}

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) throw InputError("expected a JSON object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError(std::string("missing field \"") + key + "\"");
  return *it;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw InputError(what + " must be a [re, im] pair");
  return {get_finite(j[0], what), get_finite(j[1], what)};
}

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from(const json& j, std::size_t rows, std::size_t cols, const std::string& what) {
  if (!j.is_array()) throw InputError(what + " must be an array of rows");
  if (j.size() != rows) {
    throw InputError(what + " has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
  }
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != cols) {
      throw InputError(what + " row " + std::to_string(i) + " does not have " + std::to_string(cols) + " entries");
    }
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = complex_from(row[k], what);
  }
  return m;
}

// Square matrix whose size is taken from the data.
ComplexMatrix square_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw InputError(what + " must be a nonempty array of rows");
  return matrix_from(j, j.size(), j.size(), what);
}

std::size_t count_from(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw InputError(what + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

void check_schema(const json& doc) {
  const json& v = field(doc, "schemaVersion");
  if (!v.is_string()) throw InputError("schemaVersion must be a string");
  if (v.get<std::string>() != kSchemaVersion) {
    throw InputError("unsupported schemaVersion " + v.get<std::string>() + ", expected " + kSchemaVersion);
  }
}

Method method_from(const std::string& s) {
  for (Method m : {Method::ZERO_EIGENVALUE, Method::PENCIL, Method::SRQ2, Method::TRANSPOSED_PENCIL,
                   Method::TRANSPOSED_SRQ2}) {
    if (s == to_string(m)) return m;
  }
  throw InputError("unknown method " + s);
}

bool get_bool(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_boolean()) throw InputError(std::string(key) + " must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw InputError(std::string(key) + " must be a string");
  return v.get<std::string>();
}

// Accepts [+-]digits.digits[e[+-]digits]; returns the length consumed, 0 on failure.
std::size_t scan_decimal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  const std::size_t int_start = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == int_start || i >= s.size() || s[i] != '.') return 0;
  ++i;
  const std::size_t frac_start = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == frac_start) return 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    std::size_t j = i + 1;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
    const std::size_t exp_start = j;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == exp_start) return 0;
    i = j;
  }
  return i;
}

double decimal_value(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InputError("number out of range in complex literal");
  }
  return v;
}

// to_chars omits the decimal point for integral values; the literal needs one.
std::string with_point(double v) {
  std::string s = format_double(v);
  if (s.find_first_of(".eEni") == std::string::npos) s += ".0";
  const auto e = s.find_first_of("eE");
  if (e != std::string::npos && s.find('.') == std::string::npos) s.insert(e, ".0");
  return s;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

cplx parse_complex_literal(std::string_view s) {
  const std::string bad = "complex literal must look like 1.0+2.0i or 1.0-2.0i, got \"" + std::string(s) + "\"";
  const std::size_t re_len = scan_decimal(s);
  if (re_len == 0 || re_len >= s.size() || (s[re_len] != '+' && s[re_len] != '-')) throw InputError(bad);
  const std::string_view rest = s.substr(re_len);
  const std::size_t im_len = scan_decimal(rest);
  if (im_len == 0 || im_len + 1 != rest.size() || rest.back() != 'i') throw InputError(bad);
  return {decimal_value(s.substr(0, re_len)), decimal_value(rest.substr(0, im_len))};
}

std::string format_complex_literal(cplx z) {
  std::string im = with_point(z.imag());
  if (im.front() != '-') im.insert(0, "+");
  return with_point(z.real()) + im + "i";
}

std::string serialize_system(const RosenbrockSystem& sys) {
  json doc;
  doc["schemaVersion"] = kSchemaVersion;
  doc["r"] = sys.r();
  doc["n"] = sys.n();
  doc["d"] = sys.d();
  doc["A"] = matrix_json(sys.A());
  doc["B"] = matrix_json(sys.B());
  doc["C"] = matrix_json(sys.C());
  json poly = json::array();
  for (const ComplexMatrix& m : sys.poly()) poly.push_back(matrix_json(m));
  doc["polyCoeffs"] = std::move(poly);
  return doc.dump(1) + "\n";
}

RosenbrockSystem parse_system(std::string_view text) {
  const json doc = parse_json(text);
  check_schema(doc);
  const std::size_t r = count_from(field(doc, "r"), "r");
  const std::size_t n = count_from(field(doc, "n"), "n");
  const std::size_t d = count_from(field(doc, "d"), "d");
  if (r == 0 || n == 0) throw InputError("r and n must be at least 1");
  const json& pj = field(doc, "polyCoeffs");
  if (!pj.is_array() || pj.size() != d + 1) {
    throw InputError("polyCoeffs must hold d+1 = " + std::to_string(d + 1) + " matrices");
  }
  std::vector<ComplexMatrix> poly;
  for (std::size_t j = 0; j <= d; ++j) poly.push_back(matrix_from(pj[j], n, n, "polyCoeffs[" + std::to_string(j) + "]"));
  try {
    return RosenbrockSystem(matrix_from(field(doc, "A"), r, r, "A"), matrix_from(field(doc, "B"), r, n, "B"),
                            matrix_from(field(doc, "C"), n, r, "C"), std::move(poly));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

std::string serialize_srq2_problem(const Srq2ProblemDocument& d) {
  json doc;
  doc["schemaVersion"] = kSchemaVersion;
  doc["kind"] = "srq2";
  doc["A1"] = matrix_json(d.matrices[0].matrix());
  doc["A2"] = matrix_json(d.matrices[1].matrix());
  doc["A3"] = matrix_json(d.matrices[2].matrix());
  doc["g"] = {{"alpha1", d.params.alpha1}, {"beta1", d.params.beta1}, {"alpha2", d.params.alpha2}, {"beta2", d.params.beta2}};
  return doc.dump(1) + "\n";
}

bool is_srq2_document(std::string_view text) {
  const json doc = parse_json(text);
  const auto it = doc.is_object() ? doc.find("kind") : doc.end();
  return doc.is_object() && it != doc.end() && it->is_string() && it->get<std::string>() == "srq2";
}

Srq2ProblemDocument parse_srq2_problem(std::string_view text) {
  const json doc = parse_json(text);
  check_schema(doc);
  if (get_string(doc, "kind") != "srq2") throw InputError("kind must be \"srq2\"");
  Srq2ProblemDocument out;
  const char* names[3] = {"A1", "A2", "A3"};
  for (std::size_t i = 0; i < 3; ++i) {
    ComplexMatrix m = square_from(field(doc, names[i]), names[i]);
    const double scale = std::max(1.0, m.frobenius_norm());
    out.matrices[i] = HermitianMatrix(std::move(m));
    if (out.matrices[i].asymmetry() > 1e-12 * scale) throw InputError(std::string(names[i]) + " is not Hermitian");
  }
  if (out.matrices[1].dim() != out.matrices[0].dim() || out.matrices[2].dim() != out.matrices[0].dim()) {
    throw InputError("A1, A2, A3 must have the same size");
  }
  const json& g = field(doc, "g");
  out.params = {get_finite(field(g, "alpha1"), "alpha1"), get_finite(field(g, "beta1"), "beta1"),
                get_finite(field(g, "alpha2"), "alpha2"), get_finite(field(g, "beta2"), "beta2")};
  return out;
}

ResultDocument make_result_document(const BackwardErrorResult& r) {
  ResultDocument d;
  d.pattern = r.pattern.str();
  d.lambda = r.lambda;
  d.eta = r.eta;
  d.method = to_string(r.method);
  d.x = r.x;
  d.transposed = r.transposed;
  d.witness = r.witness;
  d.certificates = r.certificate;
  d.solver = {r.iterations, r.solverResidual, r.shiftsUsed, r.converged};
  return d;
}

BackwardErrorResult to_result(const ResultDocument& d) {
  BackwardErrorResult r;
  try {
    r.pattern = PerturbationPattern::parse(d.pattern);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  r.lambda = d.lambda;
  r.eta = d.eta;
  r.method = method_from(d.method);
  r.transposed = d.transposed;
  r.x = d.x;
  r.witness = d.witness;
  r.certificate = d.certificates;
  r.iterations = d.solver.iterations;
  r.solverResidual = d.solver.residual;
  r.shiftsUsed = d.solver.shiftsUsed;
  r.converged = d.solver.converged;
  return r;
}

std::string serialize_result(const ResultDocument& d) {
  json doc;
  doc["schemaVersion"] = kSchemaVersion;
  doc["pattern"] = d.pattern;
  doc["lambda"] = complex_json(d.lambda);
  doc["eta"] = number(d.eta);
  doc["method"] = d.method;
  if (d.x) {
    json x = json::array();
    for (cplx v : *d.x) x.push_back(complex_json(v));
    doc["x"] = std::move(x);
  } else {
    doc["x"] = nullptr;
  }
  doc["transposed"] = d.transposed;
  doc["witness"] = d.witness;
  const Certificate& c = d.certificates;
  doc["certificates"] = {{"normMatch", number(c.normMatch)},
                         {"sigmaMinPerturbed", number(c.sigmaMinPerturbed)},
                         {"nepvResidual", optional_number(c.nepvResidual)},
                         {"pencilResidual", optional_number(c.pencilResidual)},
                         {"normOk", c.normOk},
                         {"sigmaOk", c.sigmaOk},
                         {"nepvOk", c.nepvOk},
                         {"pencilOk", c.pencilOk},
                         {"pass", c.pass},
                         {"note", c.note}};
  json shifts = json::array();
  for (double s : d.solver.shiftsUsed) shifts.push_back(number(s));
  doc["solver"] = {{"iterations", d.solver.iterations},
                   {"residual", optional_number(d.solver.residual)},
                   {"shiftsUsed", std::move(shifts)},
                   {"converged", d.solver.converged}};
  return doc.dump(1) + "\n";
}

ResultDocument parse_result(std::string_view text) {
  const json doc = parse_json(text);
  check_schema(doc);
  ResultDocument d;
  d.pattern = get_string(doc, "pattern");
  d.lambda = complex_from(field(doc, "lambda"), "lambda");
  d.eta = get_number(field(doc, "eta"), "eta");
  d.method = get_string(doc, "method");
  method_from(d.method);
  const json& x = field(doc, "x");
  if (!x.is_null()) {
    if (!x.is_array()) throw InputError("x must be an array of [re, im] pairs or null");
    Vector v;
    for (const json& e : x) v.push_back(complex_from(e, "x"));
    d.x = std::move(v);
  }
  d.transposed = get_bool(doc, "transposed");
  d.witness = get_string(doc, "witness");
  const json& c = field(doc, "certificates");
  d.certificates.normMatch = get_number(field(c, "normMatch"), "normMatch");
  d.certificates.sigmaMinPerturbed = get_number(field(c, "sigmaMinPerturbed"), "sigmaMinPerturbed");
  d.certificates.nepvResidual = get_optional(field(c, "nepvResidual"), "nepvResidual");
  d.certificates.pencilResidual = get_optional(field(c, "pencilResidual"), "pencilResidual");
  d.certificates.normOk = get_bool(c, "normOk");
  d.certificates.sigmaOk = get_bool(c, "sigmaOk");
  d.certificates.nepvOk = get_bool(c, "nepvOk");
  d.certificates.pencilOk = get_bool(c, "pencilOk");
  d.certificates.pass = get_bool(c, "pass");
  d.certificates.note = get_string(c, "note");
  const json& s = field(doc, "solver");
  d.solver.iterations = count_from(field(s, "iterations"), "iterations");
  d.solver.residual = get_optional(field(s, "residual"), "residual");
  const json& shifts = field(s, "shiftsUsed");
  if (!shifts.is_array()) throw InputError("shiftsUsed must be an array");
  for (const json& e : shifts) d.solver.shiftsUsed.push_back(get_number(e, "shiftsUsed"));
  d.solver.converged = get_bool(s, "converged");
  return d;
}

std::string jnr_csv(const std::vector<JnrPoint>& points) {
  std::string out = "vx,vy,vz,y1,y2,y3,support\n";
  for (const JnrPoint& p : points) {
    const std::array<double, 7> row{p.direction[0], p.direction[1], p.direction[2], p.point[0],
                                    p.point[1],     p.point[2],     p.supportValue};
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace rbe::io
