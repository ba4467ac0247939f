#include "rbe/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbe/backward_error.hpp"
#include "rbe/io.hpp"
#include "rbe/jnr.hpp"
#include "rbe/random_problems.hpp"

namespace rbe::cli {

namespace {

struct ComputeArgs {
  std::string system, lambda, pattern, out;
  std::size_t restarts = 5;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

struct JnrArgs {
  std::string system, lambda, pattern = "ABCP", out, result;
  std::size_t samples = 800;
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
  bool solve = false;
};

struct CertifyArgs {
  std::string system, result;
};

struct OracleArgs {
  std::size_t n = 3, trials = 100, budget = 5000, restarts = 5;
  std::uint64_t seed = 7;
};

BackwardErrorOptions be_options(std::size_t restarts, double tol, std::uint64_t seed) {
  BackwardErrorOptions o;
  o.srq2.restarts = restarts;
  o.srq2.seed = seed;
  o.srq2.scf.tol = tol;
  return o;
}

std::string fmt(double v) { return io::format_double(v); }

int cmd_compute(const ComputeArgs& a, std::ostream& out) {
  const RosenbrockSystem sys = io::parse_system(io::read_text_file(a.system));
  const cplx lambda = io::parse_complex_literal(a.lambda);
  const PerturbationPattern pattern = PerturbationPattern::parse(a.pattern);
  const BackwardErrorResult r = backward_error(sys, lambda, pattern, be_options(a.restarts, a.tol, a.seed));
  const std::string doc = io::serialize_result(io::make_result_document(r));
  if (a.out.empty()) {
    out << doc;
  } else {
    io::write_text_file(a.out, doc);
    out << "pattern " << pattern.str() << "  eta " << fmt(r.eta) << "  method " << to_string(r.method)
        << "  converged " << (r.converged ? "yes" : "no") << "\n";
  }
  if (!std::isfinite(r.eta)) return r.witness.empty() ? kNotConverged : kOk;
  return r.converged ? kOk : kNotConverged;
}

struct JnrInput {
  MatrixTriple matrices;
  GParams params;
};

JnrInput jnr_input_from_system(const JnrArgs& a, RosenbrockSystem& work, PerturbationPattern& core, cplx& lambda) {
  const RosenbrockSystem sys = io::parse_system(io::read_text_file(a.system));
  if (a.lambda.empty()) throw io::InputError("--lambda is required when the input is a system");
  lambda = io::parse_complex_literal(a.lambda);
  const PerturbationPattern pattern = PerturbationPattern::parse(a.pattern);
  const auto img = transposed_image(pattern);
  work = img ? transpose_system(sys) : sys;
  core = img ? *img : pattern;
  const auto prob = srq2_formulation(assemble_error_matrices(work, lambda), core);
  if (!prob) {
    throw io::InputError("pattern " + pattern.str() +
                         " reduces to a Hermitian pencil; JNR sampling needs one of AP, BC, ABC, ABP, ACP, BCP, ABCP");
  }
  return {prob->matrices(), prob->params()};
}

int cmd_jnr(const JnrArgs& a, std::ostream& out) {
  if (a.samples == 0) throw io::InputError("--samples must be at least 1");
  if (a.out.empty()) throw io::InputError("--out is required");
  const std::string text = io::read_text_file(a.system);

  JnrInput in;
  std::optional<Vector> xstar;
  if (io::is_srq2_document(text)) {
    if (!a.result.empty()) throw io::InputError("--result applies to system input only; use --solve");
    const auto doc = io::parse_srq2_problem(text);
    in = {doc.matrices, doc.params};
  } else {
    RosenbrockSystem work;
    PerturbationPattern core(true, true, true, true);
    cplx lambda;
    in = jnr_input_from_system(a, work, core, lambda);
    if (!a.result.empty()) {
      const io::ResultDocument rd = io::parse_result(io::read_text_file(a.result));
      if (PerturbationPattern::parse(rd.pattern) != PerturbationPattern::parse(a.pattern)) {
        throw io::InputError("result pattern " + rd.pattern + " differs from --pattern " + a.pattern);
      }
      if (rd.method != to_string(Method::SRQ2) && rd.method != to_string(Method::TRANSPOSED_SRQ2)) {
        throw io::InputError("result was not computed by SRQ2 (method " + rd.method + ")");
      }
      if (!rd.x || rd.x->size() != in.matrices[0].dim()) throw io::InputError("result carries no usable minimizer");
      xstar = normalized(*rd.x);
    }
  }

  Srq2Problem prob(in.matrices, in.params);
  if (a.solve && !xstar) {
    SolveOptions so;
    so.restarts = a.restarts;
    so.seed = a.seed;
    xstar = solve(prob, so).x;
  }

  const auto points = boundary_sample(in.matrices, direction_grid(a.samples));
  io::write_text_file(a.out, io::jnr_csv(points));
  out << "wrote " << points.size() << " boundary points to " << a.out << "\n";

  if (xstar) {
    const Vec3 ystar = rho(in.matrices, *xstar);
    const JnrDiagnostic diag = sample_diagnostic(in.params, ystar, points);
    nlohmann::json side;
    side["label"] = "DIAGNOSTIC";
    side["note"] = "min over sampled boundary points of g(y) - g(y_star); evidence only, not a proof of global optimality";
    side["yStar"] = {ystar[0], ystar[1], ystar[2]};
    side["gStar"] = diag.gStar;
    side["samples"] = points.size();
    side["minGap"] = std::isfinite(diag.minGap) ? nlohmann::json(diag.minGap) : nlohmann::json(nullptr);
    side["argmin"] = diag.argmin;
    if (is_differentiable(prob, *xstar)) {
      const OptimalityCertificate c = optimality_certificate(in.matrices, in.params, *xstar);
      side["gradDirection"] = {c.gradDirection[0], c.gradDirection[1], c.gradDirection[2]};
      side["supportGap"] = c.supportGap;
    } else {
      side["gradDirection"] = nullptr;
      side["supportGap"] = nullptr;
    }
    const std::string path = a.out + ".diag.json";
    io::write_text_file(path, side.dump(1) + "\n");
    out << "g(y*) " << fmt(diag.gStar) << "  min sampled g(y) - g(y*) " << fmt(diag.minGap) << "  (DIAGNOSTIC, "
        << path << ")\n";
  }
  return kOk;
}

int cmd_certify(const CertifyArgs& a, std::ostream& out, std::ostream& err) {
  const RosenbrockSystem sys = io::parse_system(io::read_text_file(a.system));
  const io::ResultDocument doc = io::parse_result(io::read_text_file(a.result));
  if (!std::isfinite(doc.eta)) {
    err << "certify: eta is infinite, there is no perturbation to certify\n";
    return kInputError;
  }
  if (!doc.x) {
    err << "certify: result has no minimizer x\n";
    return kInputError;
  }
  const BackwardErrorResult r = io::to_result(doc);
  const Certificate c = certify(sys, r.lambda, r.pattern, r);

  auto row = [&out](const std::string& name, const std::string& value, bool ok) {
    out << std::left << std::setw(22) << name << std::setw(26) << value << (ok ? "ok" : "FAIL") << "\n";
  };
  out << "pattern " << doc.pattern << "  lambda " << io::format_complex_literal(doc.lambda) << "  eta " << fmt(doc.eta)
      << "\n";
  row("|norm(dS) - eta|", fmt(c.normMatch), c.normOk);
  row("sigma_min(S - dS)", fmt(c.sigmaMinPerturbed), c.sigmaOk);
  if (c.nepvResidual) row("NEPv residual", fmt(*c.nepvResidual), c.nepvOk);
  if (c.pencilResidual) row("pencil residual", fmt(*c.pencilResidual), c.pencilOk);
  if (!c.note.empty()) out << "note: " << c.note << "\n";
  out << (c.pass ? "PASS" : "FAIL") << "\n";
  return c.pass ? kOk : kCheckFailed;
}

int cmd_oracle_check(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  if (a.n < 1 || a.n > 6) throw io::InputError("--n must be between 1 and 6");
  if (a.trials == 0) {
    err << "warning: trials = 0, nothing to check\n";
    out << "trials 0  within 0  undercuts 0  max discrepancy 0\nPASS\n";
    return kOk;
  }
  std::mt19937_64 rng(a.seed);
  std::size_t within = 0, undercuts = 0;
  double maxdiff = 0.0;
  for (std::size_t t = 0; t < a.trials; ++t) {
    const Srq2Template tp = kAllTemplates[t % std::size(kAllTemplates)];
    const Srq2Problem prob = random_srq2(rng, tp, {a.n, 0});
    SolveOptions so;
    so.restarts = a.restarts;
    so.seed = a.seed + t;
    const double f = solve(prob, so).value;
    const double o = brute_force_oracle(prob, a.budget, a.seed + t);
    const double diff = f - o;
    maxdiff = std::max(maxdiff, std::abs(diff));
    if (std::abs(diff) <= 1e-4) ++within;
    if (diff < -1e-8) ++undercuts;
  }
  const bool pass = 100 * within >= 95 * a.trials && undercuts == 0;
  out << "trials " << a.trials << "  within " << within << "  undercuts " << undercuts << "  max discrepancy "
      << fmt(maxdiff) << "\n"
      << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured eigenvalue backward errors of Rosenbrock system matrices", "rosen_bkerr"};
  app.require_subcommand(1);

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "backward error for one shift and pattern");
  compute->add_option("--system", ca.system, "SystemDocument JSON")->required()->check(CLI::ExistingFile);
  compute->add_option("--lambda", ca.lambda, "complex literal such as 1.0+2.0i")->required();
  compute->add_option("--pattern", ca.pattern, "perturbed blocks, a subset of ABCP")->required();
  compute->add_option("--restarts", ca.restarts, "random SCF starts")->capture_default_str();
  compute->add_option("--tol", ca.tol, "SCF relative tolerance")->capture_default_str();
  compute->add_option("--seed", ca.seed, "seed for the random starts")->capture_default_str();
  compute->add_option("--out", ca.out, "ResultDocument path (stdout if omitted)");

  JnrArgs ja;
  auto* jnr = app.add_subcommand("jnr", "sample the joint numerical range boundary");
  jnr->add_option("--system", ja.system, "SystemDocument or SRQ2 problem JSON")->required()->check(CLI::ExistingFile);
  jnr->add_option("--lambda", ja.lambda, "shift (system input only)");
  jnr->add_option("--pattern", ja.pattern, "SRQ2 pattern (system input only)")->capture_default_str();
  jnr->add_option("--samples", ja.samples, "number of directions")->capture_default_str();
  jnr->add_option("--out", ja.out, "CSV path")->required();
  jnr->add_option("--result", ja.result, "ResultDocument whose minimizer feeds the diagnostic")
      ->check(CLI::ExistingFile);
  jnr->add_flag("--solve", ja.solve, "solve the SRQ2 problem and write the diagnostic");
  jnr->add_option("--restarts", ja.restarts, "random SCF starts for --solve")->capture_default_str();
  jnr->add_option("--seed", ja.seed, "seed for --solve")->capture_default_str();

  CertifyArgs ta;
  auto* cert = app.add_subcommand("certify", "check a ResultDocument against its system");
  cert->add_option("--system", ta.system, "SystemDocument JSON")->required()->check(CLI::ExistingFile);
  cert->add_option("--result", ta.result, "ResultDocument JSON")->required()->check(CLI::ExistingFile);

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle-check", "compare the SRQ2 solver with random-start descent");
  oracle->add_option("--n", oa.n, "problem dimension, at most 6")->capture_default_str();
  oracle->add_option("--trials", oa.trials, "number of random problems")->capture_default_str();
  oracle->add_option("--seed", oa.seed, "problem and solver seed")->capture_default_str();
  oracle->add_option("--budget", oa.budget, "oracle starting points per problem")->capture_default_str();
  oracle->add_option("--restarts", oa.restarts, "random SCF starts")->capture_default_str();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*compute) return cmd_compute(ca, out);
    if (*jnr) return cmd_jnr(ja, out);
    if (*cert) return cmd_certify(ta, out, err);
    return cmd_oracle_check(oa, out, err);
  } catch (const io::InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace rbe::cli
