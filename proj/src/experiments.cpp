#include "opnorm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "opnorm/csv.hpp"
#include "opnorm/errors.hpp"
#include "opnorm/projector.hpp"
#include "opnorm/reference.hpp"
#include "opnorm/rotation.hpp"
#include "opnorm/solver.hpp"

namespace opnorm {

void ExperimentSpec::validate() const {
  if (std::find(std::begin(kExperimentNames), std::end(kExperimentNames), name) == std::end(kExperimentNames)) {
    throw InvalidInput("unknown experiment '" + name + "'");
  }
  if (runs < 0) throw InvalidInput("runs must be >= 1");
  if (max_iters && *max_iters == 0) throw InvalidInput("max-iters must be >= 1");
  if (eps && !(*eps > 0.0)) throw InvalidInput("eps must be positive");
}

namespace {

// Above this input dimension the Jacobi oracle is replaced by power iteration
// with the exact transpose.
constexpr std::size_t kJacobiCap = 1024;

struct Context {
  const ExperimentSpec& spec;
  std::ostream& console;
  ExperimentOutcome outcome{};

  int runs(int fallback) const { return spec.runs > 0 ? spec.runs : fallback; }
  std::size_t iters(std::size_t fallback) const { return spec.max_iters.value_or(fallback); }
  double eps(double fallback) const { return spec.eps.value_or(fallback); }
  RngStream stream(std::uint64_t label) const { return RngStream(spec.seed).derive(label); }

  std::filesystem::path file(const std::string& stem) {
    auto p = spec.out_dir / (stem + ".csv");
    outcome.files.push_back(p);
    return p;
  }

  void write_trace(const std::string& stem, const EstimateReport& rep) {
    const auto p = file(stem);
    std::ofstream out(p);
    if (!out) throw InvalidInput("cannot write " + p.string());
    write_trace_csv(out, rep.trace);
  }

  CsvWriter summary(std::initializer_list<std::string_view> header) {
    outcome.summary = spec.out_dir / (spec.name + "_summary.csv");
    return CsvWriter(outcome.summary, header);
  }
};

std::string fmt(double x) { return format_double(x); }

DenseMatrix gaussian_matrix(RngStream& rng, std::size_t m, std::size_t d) {
  DenseMatrix a(m, d);
  rng.fill_normal(a.data());
  return a;
}

// -- rotation-table -------------------------------------------------------------

struct Oracle {
  double sigma;
  std::string_view method;
};

Oracle rotation_oracle(const RotationOperatorSpec& rs, RngStream& rng) {
  if (rs.n * rs.n <= kJacobiCap || rs.interp == Interpolation::Nearest) {
    // nearest-neighbour rows hold one entry, so the Gram matrix is diagonal
    // and Jacobi needs no sweeps at any size
    return {dense_spectrum(materialize(*make_rotation(rs), rs.n * rs.n)).singular_values.front(), "jacobi"};
  }
  PowerIterationOptions opts;
  opts.max_iters = 50000;
  opts.tol = 1e-14;
  return {power_iteration(make_rotation_exact_pair(rs), opts, rng).estimate_via_av, "power-exact-transpose"};
}

void rotation_table(Context& ctx) {
  std::vector<std::size_t> sizes{25, 50};
  if (ctx.spec.n) sizes = {*ctx.spec.n};
  const double angles[] = {10.0, 30.0, 45.0};
  const Interpolation kinds[] = {Interpolation::Nearest, Interpolation::Bilinear, Interpolation::Bicubic};

  auto summary = ctx.summary(
      {"n", "angle", "interp", "estimate", "oracle_sigma_max", "oracle_method", "termination", "iterations"});
  std::uint64_t label = 0;
  for (std::size_t n : sizes) {
    for (double angle : angles) {
      for (Interpolation interp : kinds) {
        const RotationOperatorSpec rs{n, angle, interp, RotationDomain::Grid};
        const auto op = make_rotation(rs);
        RunConfig cfg;
        cfg.eps = ctx.eps(1e-6);
        cfg.max_iters = ctx.iters(100 * op->input_dim());
        RngStream rng = ctx.stream(label++);
        RngStream oracle_rng = rng.derive(1);
        const auto rep = run(*op, cfg, rng);
        const Oracle oracle = rotation_oracle(rs, oracle_rng);
        ctx.write_trace("rotation-table_n" + std::to_string(n) + "_a" + fmt(angle) + "_" +
                            std::string(interpolation_name(interp)),
                        rep);
        summary.row({n, angle, interpolation_name(interp), rep.norm_estimate, oracle.sigma, oracle.method,
                     termination_name(rep.termination), rep.iterations});
        ctx.console << "n=" << n << " angle=" << fmt(angle) << " " << interpolation_name(interp)
                    << ": estimate=" << fmt(rep.norm_estimate) << " oracle=" << fmt(oracle.sigma) << '\n';
      }
    }
  }
  ctx.console << "note: bicubic is cubic convolution (a = -0.5). Rotations with spline-prefiltered bicubic\n"
                 "      interpolation have larger norms, so published bicubic tables differ from these values.\n";
}

// -- shear2x2 -------------------------------------------------------------------

double shear_sigma(double e) { return std::sqrt(1.0 + (e * e + e * std::sqrt(e * e + 4.0)) / 2.0); }

void shear2x2(Context& ctx) {
  constexpr double kTarget = 1e-5;
  const int runs = ctx.runs(10);
  auto summary = ctx.summary(
      {"epsilon", "run", "sigma", "solver_iterations", "power_iterations", "solver_estimate", "power_estimate"});
  std::uint64_t label = 0;
  for (double e : {1e-2, 1e-4}) {
    const DenseMatrix a = DenseMatrix::from_rows({{1.0, e}, {0.0, 1.0}});
    const double sigma = shear_sigma(e);
    const auto op = make_dense(a);
    const auto pair = make_dense_pair(a);
    std::size_t max_solver = 0;
    std::size_t min_power = SIZE_MAX;
    for (int r = 0; r < runs; ++r) {
      RngStream rng = ctx.stream(label++);
      RngStream power_rng = rng.derive(1);
      RunConfig cfg;
      cfg.max_iters = ctx.iters(10);
      cfg.use_stopping_rule = false;
      const auto rep = run(*op, cfg, rng);
      std::size_t solver_iters = rep.trace.size() + 1;
      for (std::size_t k = 0; k < rep.trace.size(); ++k) {
        if (std::abs(sigma - std::sqrt(rep.trace[k].objective)) <= kTarget * sigma) {
          solver_iters = k + 1;
          break;
        }
      }
      PowerIterationOptions opts;
      opts.max_iters = 1000000;
      opts.tol = 0.0;
      opts.target = sigma;
      opts.target_rel_tol = kTarget;
      const auto prep = power_iteration(pair, opts, power_rng);

      ctx.write_trace("shear2x2_eps" + fmt(e) + "_run" + std::to_string(r), rep);
      summary.row({e, r, sigma, solver_iters, prep.iterations, rep.norm_estimate, prep.estimate_via_av});
      max_solver = std::max(max_solver, solver_iters);
      min_power = std::min(min_power, prep.iterations);
    }
    if (max_solver != 1) ctx.outcome.checks_passed = false;
    ctx.console << "epsilon=" << fmt(e) << " sigma=" << fmt(sigma) << ": solver steps to 1e-5 <= " << max_solver
                << ", power iterations to 1e-5 >= " << min_power << '\n';
  }
}

// -- disk-diag ------------------------------------------------------------------

void disk_diag(Context& ctx) {
  const int runs = ctx.runs(5);
  const double tol = ctx.eps(1e-6);
  const auto op = make_diagonal({1.0, 1.0, 0.0});
  auto summary = ctx.summary({"run", "points", "max_circle_deviation", "final_objective"});
  double worst = 0.0;
  for (int r = 0; r < runs; ++r) {
    RngStream rng = ctx.stream(static_cast<std::uint64_t>(r));
    RunConfig cfg;
    cfg.max_iters = ctx.iters(5000);
    cfg.use_stopping_rule = false;
    cfg.a_zero_rel_tol = 0.0;  // keep stepping on the optimal circle
    cfg.degenerate_probes = 1 << 30;
    cfg.record_trace = false;

    CsvWriter points(ctx.file("disk-diag_run" + std::to_string(r)), {"k", "v1", "v2"});
    std::size_t count = 0;
    double dev = 0.0;
    const auto rep = run(*op, cfg, rng, [&](const StepDiagnostics& s, std::span<const double> v) {
      if (std::abs(v[2]) >= tol) return;
      points.row({s.k, v[0], v[1]});
      dev = std::max(dev, std::abs(v[0] * v[0] + v[1] * v[1] - 1.0));
      ++count;
    });
    summary.row({r, count, dev, rep.norm_estimate * rep.norm_estimate});
    worst = std::max(worst, dev);
  }
  if (worst > 1e-6) ctx.outcome.checks_passed = false;
  ctx.console << "disk-diag: max |v1^2 + v2^2 - 1| over emitted iterates = " << fmt(worst) << '\n';
}

// -- row-vector -----------------------------------------------------------------

void row_vector(Context& ctx) {
  const int runs = ctx.runs(5);
  auto summary = ctx.summary({"d", "run", "iterations", "final_rel_error"});
  std::uint64_t label = 0;
  for (std::size_t d : {std::size_t{100}, std::size_t{1000}}) {
    DenseMatrix a(1, d);
    a(0, 0) = 1.0;
    const auto op = make_dense(a);
    std::vector<double> finals;
    for (int r = 0; r < runs; ++r) {
      RngStream rng = ctx.stream(label++);
      RunConfig cfg;
      cfg.max_iters = ctx.iters(10 * d);
      cfg.use_stopping_rule = false;
      const auto rep = run(*op, cfg, rng);
      CsvWriter curve(ctx.file("row-vector_d" + std::to_string(d) + "_run" + std::to_string(r)),
                      {"k", "rel_error", "tail_mse"});
      for (const auto& s : rep.trace) {
        const double obj = std::min(s.objective, 1.0);
        curve.row({s.k, 1.0 - std::sqrt(obj), (1.0 - obj) / static_cast<double>(d - 1)});
      }
      const double err = 1.0 - rep.norm_estimate;
      summary.row({d, r, rep.iterations, err});
      finals.push_back(err);
    }
    std::nth_element(finals.begin(), finals.begin() + finals.size() / 2, finals.end());
    ctx.console << "d=" << d << ": median relative error after " << ctx.iters(10 * d)
                << " iterations = " << fmt(finals[finals.size() / 2]) << '\n';
  }
}

// -- gaussian-grid --------------------------------------------------------------

void gaussian_grid(Context& ctx) {
  const int runs = ctx.runs(10);
  const std::pair<std::size_t, std::size_t> shapes[] = {{10, 50}, {50, 50}, {100, 50}};
  auto summary = ctx.summary({"m", "d", "run", "sigma_max", "estimate", "final_rel_error", "bound_ok"});
  std::uint64_t label = 0;
  bool all_ok = true;
  for (const auto& [m, d] : shapes) {
    for (int r = 0; r < runs; ++r) {
      RngStream rng = ctx.stream(label++);
      RngStream solver_rng = rng.derive(1);
      const DenseMatrix a = gaussian_matrix(rng, m, d);
      const double sigma = dense_spectrum(a).singular_values.front();
      RunConfig cfg;
      cfg.max_iters = ctx.iters(20 * d);
      cfg.use_stopping_rule = false;
      const auto rep = run(*make_dense(a), cfg, solver_rng);

      CsvWriter rows(ctx.file("gaussian-grid_" + std::to_string(m) + "x" + std::to_string(d) + "_run" +
                              std::to_string(r)),
                     {"k", "rel_error", "min_a_sq", "bound"});
      const double s4 = sigma * sigma * sigma * sigma;
      bool ok = true;
      for (const auto& s : rep.trace) {
        const double bound = 2.0 * s4 / static_cast<double>(s.k + 1);
        ok = ok && s.min_a_sq <= bound;
        rows.row({s.k, (sigma - std::sqrt(s.objective)) / sigma, s.min_a_sq, bound});
      }
      all_ok = all_ok && ok;
      summary.row({m, d, r, sigma, rep.norm_estimate, (sigma - rep.norm_estimate) / sigma, ok ? 1 : 0});
    }
  }
  ctx.outcome.checks_passed = all_ok;
  ctx.console << "gaussian-grid: running min a_k^2 <= 2 sigma^4 / (k + 1) on every row: " << (all_ok ? "yes" : "NO")
              << '\n';
}

// -- projector-demo -------------------------------------------------------------

void projector_demo(Context& ctx) {
  const ProjectorSpec ps{ctx.spec.n.value_or(16), ctx.spec.angles.value_or(24)};
  const auto exact = make_projector_exact_pair(ps);
  const auto mismatched = make_projector_mismatched_pair(ps);
  const LinearOperator& op = *exact.forward;
  RngStream rng = ctx.stream(0);
  RngStream power_rng = rng.derive(1);
  RngStream gap_rng = rng.derive(2);

  const double oracle = oracle_sigma_max(op);
  RunConfig cfg;
  cfg.init = Init::Ones;
  cfg.eps = ctx.eps(1e-6);
  cfg.max_iters = ctx.iters(100 * op.input_dim());
  const auto rep = run(op, cfg, rng);
  ctx.write_trace("projector-demo_solver", rep);

  PowerIterationOptions opts;
  opts.max_iters = 5000;
  RngStream power_rng2 = power_rng.derive(1);
  const auto p_exact = power_iteration(exact, opts, power_rng);
  const auto p_mis = power_iteration(mismatched, opts, power_rng2);
  RngStream gap_rng2 = gap_rng.derive(1);
  const double gap_exact = adjointness_gap(exact, 10, gap_rng);
  const double gap_mis = adjointness_gap(mismatched, 10, gap_rng2);

  auto summary = ctx.summary({"method", "estimate", "oracle_sigma_max", "rel_error", "adjointness_gap", "iterations",
                              "estimators_disagree"});
  summary.row({"solver", rep.norm_estimate, oracle, std::abs(rep.norm_estimate - oracle) / oracle, 0.0,
               rep.iterations, 0});
  summary.row({"power-exact", p_exact.estimate_via_av, oracle, std::abs(p_exact.estimate_via_av - oracle) / oracle,
               gap_exact, p_exact.iterations, p_exact.estimators_disagree ? 1 : 0});
  summary.row({"power-mismatched", p_mis.estimate_via_gram, oracle,
               std::abs(p_mis.estimate_via_gram - oracle) / oracle, gap_mis, p_mis.iterations,
               p_mis.estimators_disagree ? 1 : 0});

  ctx.outcome.checks_passed = std::abs(rep.norm_estimate - oracle) <= 1e-3 * oracle && gap_exact < 1e-12;
  ctx.console << "projector " << ps.n_pixels << "x" << ps.n_pixels << ", " << ps.n_angles
              << " angles: oracle=" << fmt(oracle) << " solver=" << fmt(rep.norm_estimate) << " ("
              << termination_name(rep.termination) << ")\n"
              << "  power iteration, exact adjoint:      " << fmt(p_exact.estimate_via_av)
              << "  gap=" << fmt(gap_exact) << '\n'
              << "  power iteration, mismatched adjoint: |Av|=" << fmt(p_mis.estimate_via_av)
              << " sqrt|BAv|=" << fmt(p_mis.estimate_via_gram) << "  gap=" << fmt(gap_mis) << '\n';
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentSpec& spec, std::ostream& console) {
  spec.validate();
  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir, ec);
  if (ec || !std::filesystem::is_directory(spec.out_dir)) {
    throw InvalidInput("cannot create output directory " + spec.out_dir.string());
  }
  Context ctx{spec, console};
  if (spec.name == "rotation-table") rotation_table(ctx);
  else if (spec.name == "shear2x2") shear2x2(ctx);
  else if (spec.name == "disk-diag") disk_diag(ctx);
  else if (spec.name == "row-vector") row_vector(ctx);
  else if (spec.name == "gaussian-grid") gaussian_grid(ctx);
  else projector_demo(ctx);
  console << "summary: " << ctx.outcome.summary.string() << '\n';
  return ctx.outcome;
}

}  // namespace opnorm
