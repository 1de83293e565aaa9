#include "opnorm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "opnorm/csv.hpp"
#include "opnorm/errors.hpp"
#include "opnorm/experiments.hpp"
#include "opnorm/kernels.hpp"
#include "opnorm/matrix_io.hpp"
#include "opnorm/projector.hpp"
#include "opnorm/rotation.hpp"
#include "opnorm/solver.hpp"

namespace opnorm::cli {
namespace {

struct SourceOptions {
  std::string matrix;
  std::string op;
  std::size_t n = 25;
  double angle = 0.0;
  std::string interp = "nearest";
  std::size_t angles = 24;
  std::string domain;  // empty: command default
};

struct SolverOptions {
  std::uint64_t seed = 0;
  std::size_t max_iters = 0;
  double eps = 1e-6;
  int resamples = 10;
  std::string init = "uniform";
  std::string mode = "max";
  std::string trace;
};

void add_source_flags(CLI::App& cmd, SourceOptions& s) {
  auto* matrix = cmd.add_option("--matrix", s.matrix, "Dense matrix CSV (one row per line)");
  auto* op = cmd.add_option("--op", s.op, "Built-in operator")
                 ->check(CLI::IsMember({"rotation", "projector", "identity"}));
  matrix->excludes(op);
  cmd.add_option("--n", s.n, "Grid size (rotation, projector) or dimension (identity)")->capture_default_str();
  cmd.add_option("--angle", s.angle, "Rotation angle in degrees")->capture_default_str();
  cmd.add_option("--interp", s.interp, "nearest | bilinear | bicubic")->capture_default_str();
  cmd.add_option("--angles", s.angles, "Projection angles")->capture_default_str();
  cmd.add_option("--domain", s.domain, "Rotation domain: grid | disk")->check(CLI::IsMember({"grid", "disk"}));
}

void add_solver_flags(CLI::App& cmd, SolverOptions& s) {
  cmd.add_option("--seed", s.seed)->capture_default_str();
  cmd.add_option("--max-iters", s.max_iters, "Direction budget (0: 50 * d)")->capture_default_str();
  cmd.add_option("--eps", s.eps, "Stopping tolerance on the eigen-residual")->capture_default_str();
  cmd.add_option("--resamples", s.resamples, "Directions per stop check")->capture_default_str();
  cmd.add_option("--init", s.init)->check(CLI::IsMember({"uniform", "ones"}))->capture_default_str();
  cmd.add_option("--mode", s.mode)->check(CLI::IsMember({"max", "min"}))->capture_default_str();
  cmd.add_option("--trace", s.trace, "Write the per-step trace CSV here");
}

OperatorPtr build_source(const SourceOptions& s, RotationDomain default_domain) {
  if (s.matrix.empty() == s.op.empty()) throw InvalidInput("give exactly one of --matrix or --op");
  if (!s.matrix.empty()) return make_dense(load_matrix_csv(s.matrix));
  if (s.op == "identity") return make_identity(s.n);
  if (s.op == "projector") return make_projector({s.n, s.angles});
  RotationOperatorSpec rs;
  rs.n = s.n;
  rs.angle_deg = s.angle;
  rs.interp = parse_interpolation(s.interp);
  rs.domain = s.domain.empty() ? default_domain : (s.domain == "disk" ? RotationDomain::Disk : RotationDomain::Grid);
  return make_rotation(rs);
}

RunConfig make_config(const SolverOptions& s) {
  RunConfig cfg;
  cfg.seed = s.seed;
  cfg.max_iters = s.max_iters;
  cfg.eps = s.eps;
  cfg.resamples = s.resamples;
  cfg.init = s.init == "ones" ? Init::Ones : Init::Uniform;
  cfg.mode = s.mode == "min" ? Mode::Min : Mode::Max;
  cfg.record_trace = !s.trace.empty();
  cfg.validate();
  return cfg;
}

int exit_for(Termination t) { return t == Termination::BudgetExhausted ? kExitBudget : kExitOk; }

int cmd_estimate(const SourceOptions& src, const SolverOptions& so, std::ostream& out) {
  const auto op = build_source(src, RotationDomain::Grid);
  const RunConfig cfg = make_config(so);
  RngStream rng(cfg.seed);
  const auto rep = cfg.mode == Mode::Min ? run_min_mode(*op, cfg, rng) : run(*op, cfg, rng);
  out << "operator: " << op->name() << " (" << op->output_dim() << " x " << op->input_dim() << ")\n"
      << "estimate: " << format_double(rep.norm_estimate) << '\n'
      << "termination: " << termination_name(rep.termination) << '\n';
  if (rep.orthogonal_c) out << "c: " << format_double(*rep.orthogonal_c) << '\n';
  out << "iterations: " << rep.iterations << '\n' << "oracle calls: " << rep.oracle_calls << '\n';
  if (!so.trace.empty()) {
    std::ofstream f(so.trace);
    if (!f) throw InvalidInput("cannot write " + so.trace);
    write_trace_csv(f, rep.trace);
  }
  return exit_for(rep.termination);
}

int cmd_experiment(const ExperimentSpec& spec, std::ostream& out) {
  const auto outcome = run_experiment(spec, out);
  if (!outcome.checks_passed) out << "warning: experiment checks did not all pass\n";
  return kExitOk;
}

int cmd_detect(const SourceOptions& src, std::uint64_t seed, int probes, double tol, std::ostream& out) {
  // the disk domain makes exact rotations of the disk orthogonal
  const auto op = build_source(src, RotationDomain::Disk);
  if (probes < 2) throw InvalidInput("--probes must be >= 2");
  if (!(tol > 0.0)) throw InvalidInput("--tol must be positive");
  RngStream rng(seed);
  const auto verdict = detect_orthogonal(*op, rng, probes, tol);
  if (verdict.detected) {
    out << "detected, c=" << format_double(verdict.c_estimate) << '\n';
  } else {
    out << "not detected\n";
  }
  out << "probes: " << verdict.probes_used << '\n';
  return kExitOk;
}

int cmd_topk(const SourceOptions& src, const SolverOptions& so, std::size_t k, const std::string& csv,
             std::ostream& out) {
  if (k < 1) throw InvalidInput("--k must be >= 1");
  const auto op = build_source(src, RotationDomain::Grid);
  RunConfig cfg = make_config(so);
  cfg.record_trace = false;
  RngStream rng(cfg.seed);
  const auto pairs = run_deflated(*op, cfg, rng, k);

  double worst = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      worst = std::max(worst, std::abs(kernels::dot(pairs[i].v, pairs[j].v)));

  int code = kExitOk;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out << "sigma_" << i + 1 << ": " << format_double(pairs[i].sigma) << " (" << termination_name(pairs[i].termination)
        << ")\n";
    if (pairs[i].termination == Termination::BudgetExhausted) code = kExitBudget;
  }
  out << "max |<v_i, v_j>|: " << format_double(worst) << '\n';

  if (!csv.empty()) {
    std::ofstream f(csv);
    if (!f) throw InvalidInput("cannot write " + csv);
    f << "index,sigma,termination";
    for (std::size_t j = 0; j < op->input_dim(); ++j) f << ",v" << j;
    f << '\n';
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      f << i + 1 << ',' << format_double(pairs[i].sigma) << ',' << termination_name(pairs[i].termination);
      for (double x : pairs[i].v) f << ',' << format_double(x);
      f << '\n';
    }
  }
  return code;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adjoint-free operator norm estimation"};
  app.name("opnorm");
  app.require_subcommand(1);

  SourceOptions est_src;
  SolverOptions est_solver;
  auto* estimate = app.add_subcommand("estimate", "Estimate the largest (or smallest) singular value");
  add_source_flags(*estimate, est_src);
  add_solver_flags(*estimate, est_solver);

  ExperimentSpec exp;
  std::string out_dir = ".";
  std::optional<std::size_t> exp_iters;
  std::optional<double> exp_eps;
  std::optional<std::size_t> exp_n;
  std::optional<std::size_t> exp_angles;
  auto* experiment = app.add_subcommand("experiment", "Run a reproducible experiment and write CSVs");
  experiment->add_option("name", exp.name, "Experiment name")->required();
  experiment->add_option("--runs", exp.runs, "Runs (0: experiment default)")->capture_default_str();
  experiment->add_option("--seed", exp.seed)->capture_default_str();
  experiment->add_option("--out", out_dir, "Output directory")->capture_default_str();
  experiment->add_option("--max-iters", exp_iters, "Override the iteration budget");
  experiment->add_option("--eps", exp_eps, "Override the tolerance");
  experiment->add_option("--n", exp_n, "Grid size");
  experiment->add_option("--angles", exp_angles, "Projection angles");

  SourceOptions det_src;
  std::uint64_t det_seed = 0;
  int det_probes = 10;
  double det_tol = 1e-10;
  auto* detect = app.add_subcommand("detect-orthogonal", "Test whether A*A = cI");
  add_source_flags(*detect, det_src);
  detect->add_option("--seed", det_seed)->capture_default_str();
  detect->add_option("--probes", det_probes)->capture_default_str();
  detect->add_option("--tol", det_tol)->capture_default_str();

  SourceOptions top_src;
  SolverOptions top_solver;
  std::size_t top_k = 1;
  std::string top_out;
  auto* topk = app.add_subcommand("topk", "Leading singular values by deflation");
  add_source_flags(*topk, top_src);
  add_solver_flags(*topk, top_solver);
  topk->add_option("--k", top_k, "Number of singular values")->capture_default_str();
  topk->add_option("--out", top_out, "CSV with sigma and vector per row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*estimate) return cmd_estimate(est_src, est_solver, out);
    if (*experiment) {
      exp.out_dir = out_dir;
      exp.max_iters = exp_iters;
      exp.eps = exp_eps;
      exp.n = exp_n;
      exp.angles = exp_angles;
      return cmd_experiment(exp, out);
    }
    if (*detect) return cmd_detect(det_src, det_seed, det_probes, det_tol, out);
    return cmd_topk(top_src, top_solver, top_k, top_out, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
  }
  return kExitInvalid;
}

}  // namespace opnorm::cli
