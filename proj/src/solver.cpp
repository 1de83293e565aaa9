#include "opnorm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "opnorm/csv.hpp"
#include "opnorm/errors.hpp"
#include "opnorm/kernels.hpp"

namespace opnorm {

std::string_view termination_name(Termination t) noexcept {
  switch (t) {
    case Termination::ToleranceMet: return "tolerance-met";
    case Termination::BudgetExhausted: return "budget-exhausted";
    case Termination::OrthogonalDetected: return "orthogonal-detected";
  }
  return "unknown";
}

std::string_view mode_name(Mode m) noexcept { return m == Mode::Max ? "max" : "min"; }

void RunConfig::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("eps must be positive");
  if (resamples < 1) throw InvalidInput("resamples must be >= 1");
  if (refresh_period < 1) throw InvalidInput("refresh period must be >= 1");
  if (degenerate_probes < 1) throw InvalidInput("degenerate probes must be >= 1");
  if (!(a_zero_rel_tol >= 0.0)) throw InvalidInput("a_zero_rel_tol must be >= 0");
  if (!(orthogonality_tol > 0.0)) throw InvalidInput("orthogonality_tol must be positive");
}

Coefficients coefficients(std::span<const double> av, std::span<const double> ax) {
  if (av.size() != ax.size()) throw InvalidInput("coefficients: length mismatch");
  return {kernels::dot(av, ax), kernels::squared_norm(ax) - kernels::squared_norm(av)};
}

std::optional<double> optimal_stepsize(double a, double b, Mode mode, double a_zero_tol) {
  if (a == 0.0 || !(std::abs(a) > a_zero_tol)) return std::nullopt;
  const double t = b / (2.0 * std::abs(a));
  // s = t + sqrt(t^2 + 1) > 0 and inv = 1 / s = sqrt(t^2 + 1) - t; each is
  // formed without subtracting nearly equal numbers.
  double s = 0.0;
  double inv = 0.0;
  if (t > 1e8) {
    s = 2.0 * t;
    inv = 1.0 / s;
  } else if (t < -1e8) {
    inv = -2.0 * t;
    s = 1.0 / inv;
  } else if (t >= 0.0) {
    s = t + std::hypot(t, 1.0);
    inv = 1.0 / s;
  } else {
    inv = std::hypot(t, 1.0) - t;
    s = 1.0 / inv;
  }
  const double sgn = a > 0.0 ? 1.0 : -1.0;
  return mode == Mode::Max ? sgn * s : -sgn * inv;
}

namespace {

// v <- (v + tau x) / sqrt(1 + tau^2), dividing through by |tau| when it is large.
std::pair<double, double> update_weights(double tau) {
  if (std::abs(tau) <= 1.0) {
    const double c = 1.0 / std::sqrt(1.0 + tau * tau);
    return {c, tau * c};
  }
  const double r = 1.0 / tau;
  const double c = 1.0 / std::sqrt(1.0 + r * r);
  return {std::abs(r) * c, (tau > 0.0 ? 1.0 : -1.0) * c};
}

void normalize_pair(std::span<double> v, std::span<double> av) {
  const double nrm = std::sqrt(kernels::squared_norm(v));
  if (nrm == 1.0) return;
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw InternalError("iterate lost its norm");
  kernels::scale(1.0 / nrm, v);
  kernels::scale(1.0 / nrm, av);
}

void refresh(const LinearOperator& op, SearchState& state, DirectionBuffers& dir,
             std::span<const std::vector<double>> basis, double& max_drift) {
  if (!basis.empty()) {
    project_out(basis, state.v);
    const double nrm = std::sqrt(kernels::squared_norm(state.v));
    kernels::scale(1.0 / nrm, state.v);
  }
  op.apply(state.v, dir.ax);
  ++state.oracle_calls;
  const double fresh = std::sqrt(kernels::squared_norm(dir.ax));
  kernels::axpy(-1.0, dir.ax, state.av);  // av <- cached - fresh
  const double gap = std::sqrt(kernels::squared_norm(state.av));
  if (fresh > 0.0) max_drift = std::max(max_drift, gap / fresh);
  std::copy(dir.ax.begin(), dir.ax.end(), state.av.begin());
}

std::size_t effective_dim(const LinearOperator& op, std::span<const std::vector<double>> basis) {
  return op.input_dim() - basis.size();
}

void initialize(const LinearOperator& op, const RunConfig& cfg, RngStream& rng,
                std::span<const std::vector<double>> basis, SearchState& state) {
  const std::size_t d = op.input_dim();
  state.v.assign(d, 0.0);
  state.av.assign(op.output_dim(), 0.0);
  switch (cfg.init) {
    case Init::Uniform:
      for (int attempt = 0; attempt < kDefaultRetries; ++attempt) {
        uniform_unit_vector(rng, state.v);
        project_out(basis, state.v);
        const double nrm = std::sqrt(kernels::squared_norm(state.v));
        if (nrm > kUnderflowRatio) {
          kernels::scale(1.0 / nrm, state.v);
          return;
        }
      }
      throw InternalError("initial draw: retry budget exhausted");
    case Init::Ones:
      std::fill(state.v.begin(), state.v.end(), 1.0);
      break;
    case Init::Given:
      if (cfg.initial_vector.size() != d) throw InvalidInput("initial vector has the wrong length");
      if (!std::all_of(cfg.initial_vector.begin(), cfg.initial_vector.end(),
                       [](double x) { return std::isfinite(x); })) {
        throw InvalidInput("initial vector contains non-finite entries");
      }
      std::copy(cfg.initial_vector.begin(), cfg.initial_vector.end(), state.v.begin());
      break;
  }
  project_out(basis, state.v);
  const double nrm = std::sqrt(kernels::squared_norm(state.v));
  if (!(nrm > 0.0)) throw InvalidInput("initial vector vanishes on the search space");
  kernels::scale(1.0 / nrm, state.v);
}

}  // namespace

StepOutcome step(const LinearOperator& op, SearchState& state, DirectionBuffers& dir, const StepParams& params) {
  op.apply(dir.x, dir.ax);
  ++state.oracle_calls;
  StepOutcome out;
  const auto [a, b] = coefficients(state.av, dir.ax);
  out.diag.k = state.k;
  out.diag.a = a;
  out.diag.b = b;
  const double scale = std::sqrt(kernels::squared_norm(state.av) * kernels::squared_norm(dir.ax));
  const auto tau = optimal_stepsize(a, b, params.mode, params.a_zero_rel_tol * scale);
  if (!tau) {
    out.degenerate = true;
    return out;
  }
  const auto [cv, cx] = update_weights(*tau);
  kernels::axpby(cv, dir.x, cx, state.v);
  kernels::axpby(cv, dir.ax, cx, state.av);
  normalize_pair(state.v, state.av);
  ++state.k;
  out.diag.tau = *tau;
  out.diag.objective = kernels::squared_norm(state.av);
  return out;
}

double estimate_residual_sq(const LinearOperator& op, SearchState& state, const RunConfig& cfg, RngStream& rng,
                            DirectionBuffers& dir, std::span<const std::vector<double>> basis) {
  const std::size_t d_eff = effective_dim(op, basis);
  if (d_eff < 2) return 0.0;
  double sum = 0.0;
  for (int i = 0; i < cfg.resamples; ++i) {
    sample_orthogonal(rng, state.v, basis, dir.x);
    op.apply(dir.x, dir.ax);
    ++state.oracle_calls;
    const double a = kernels::dot(state.av, dir.ax);
    sum += a * a;
  }
  return static_cast<double>(d_eff - 1) * sum / static_cast<double>(cfg.resamples);
}

bool stop_check(const LinearOperator& op, SearchState& state, const RunConfig& cfg, RngStream& rng,
                DirectionBuffers& dir, std::span<const std::vector<double>> basis) {
  return estimate_residual_sq(op, state, cfg, rng, dir, basis) <= cfg.eps * cfg.eps;
}

OrthogonalityVerdict detect_orthogonal(const LinearOperator& op, RngStream& rng, int probes, double tol) {
  if (probes < 2) throw InvalidInput("detect_orthogonal needs probes >= 2");
  const std::size_t d = op.input_dim();
  OrthogonalityVerdict verdict;
  std::vector<double> v = uniform_unit_vector(rng, d);
  std::vector<double> av = op.apply(v);
  const double c = kernels::squared_norm(av);
  verdict.c_estimate = c;
  if (d == 1) {
    verdict.detected = true;
    return verdict;
  }
  std::vector<double> x(d);
  std::vector<double> ax(op.output_dim());
  const double norm_av = std::sqrt(c);
  for (int i = 0; i < probes; ++i) {
    sample_orthogonal(rng, v, {}, x);
    op.apply(x, ax);
    ++verdict.probes_used;
    const double ax_sq = kernels::squared_norm(ax);
    const double a = kernels::dot(av, ax);
    if (std::abs(a) > tol * norm_av * std::sqrt(ax_sq) || std::abs(ax_sq - c) > tol * std::max(c, ax_sq)) {
      return verdict;
    }
  }
  verdict.detected = c > 0.0;
  return verdict;
}

EstimateReport run_restricted(const LinearOperator& op, const RunConfig& cfg, RngStream& rng,
                              std::span<const std::vector<double>> basis, const StepObserver& observer) {
  cfg.validate();
  const std::size_t d = op.input_dim();
  if (basis.size() >= d) throw InvalidInput("deflation set already spans the input space");
  const std::size_t d_eff = effective_dim(op, basis);
  const std::size_t budget = cfg.max_iters ? cfg.max_iters : 50 * d;

  EstimateReport report;
  SearchState state;
  initialize(op, cfg, rng, basis, state);
  op.apply(state.v, state.av);
  state.oracle_calls = 1;
  report.initial_objective = kernels::squared_norm(state.av);
  report.running_min_a_sq = std::numeric_limits<double>::infinity();

  auto finish = [&](Termination why) {
    report.termination = why;
    report.norm_estimate = std::sqrt(kernels::squared_norm(state.av));
    report.oracle_calls = state.oracle_calls;
    report.iterations = state.k;
    report.singular_vector = std::move(state.v);
    return std::move(report);
  };

  // A one-dimensional search space leaves nothing to optimise; A*A restricted
  // to it is trivially a multiple of the identity.
  if (d_eff == 1) {
    report.orthogonal_c = report.initial_objective;
    return finish(Termination::OrthogonalDetected);
  }

  DirectionBuffers dir{std::vector<double>(d), std::vector<double>(op.output_dim())};
  const StepParams params{cfg.mode, cfg.a_zero_rel_tol, cfg.refresh_period, basis};
  const double eps_sq = cfg.eps * cfg.eps;
  const double tangent_dim = static_cast<double>(d_eff - 1);
  if (cfg.record_trace) report.trace.reserve(std::min<std::size_t>(budget, 1u << 16));

  // consecutive degenerate directions that also showed |Ax| = |Av|
  int degenerate_run = 0;

  for (std::size_t draw = 0; draw < budget; ++draw) {
    ++report.directions_drawn;
    sample_orthogonal(rng, state.v, basis, dir.x);
    const std::size_t k_before = state.k;
    StepOutcome out = step(op, state, dir, params);

    if (out.degenerate) {
      ++report.degenerate_directions;
      const double av_sq = kernels::squared_norm(state.av);
      const double ax_sq = kernels::squared_norm(dir.ax);
      const bool b_small = std::abs(out.diag.b) <= cfg.orthogonality_tol * std::max(av_sq, ax_sq);
      if (b_small) {
        ++degenerate_run;
        if (degenerate_run >= cfg.degenerate_probes && av_sq > 0.0) {
          report.orthogonal_c = av_sq;
          return finish(Termination::OrthogonalDetected);
        }
        continue;
      }
      // Degenerate but anisotropic: v is (numerically) a singular vector.
      degenerate_run = 0;
      if (cfg.use_stopping_rule && tangent_dim * out.diag.a * out.diag.a <= eps_sq) {
        ++report.stop_checks;
        if (stop_check(op, state, cfg, rng, dir, basis)) return finish(Termination::ToleranceMet);
      }
      continue;
    }
    degenerate_run = 0;

    if (cfg.refresh_period && state.k % cfg.refresh_period == 0) {
      refresh(op, state, dir, basis, report.max_refresh_drift);
      out.diag.objective = kernels::squared_norm(state.av);
    }

    const double a_sq = out.diag.a * out.diag.a;
    report.running_min_a_sq = std::min(report.running_min_a_sq, a_sq);
    out.diag.k = k_before;
    out.diag.min_a_sq = report.running_min_a_sq;
    if (cfg.record_trace) report.trace.push_back(out.diag);
    if (observer) observer(out.diag, state.v);

    // The stopping rule looks at a_k from the step just taken and, if it is
    // small, resamples at the new iterate.
    if (cfg.use_stopping_rule && tangent_dim * a_sq <= eps_sq) {
      ++report.stop_checks;
      if (stop_check(op, state, cfg, rng, dir, basis)) return finish(Termination::ToleranceMet);
    }
  }
  return finish(Termination::BudgetExhausted);
}

EstimateReport run(const LinearOperator& op, const RunConfig& cfg, RngStream& rng, const StepObserver& observer) {
  return run_restricted(op, cfg, rng, {}, observer);
}

EstimateReport run(const LinearOperator& op, const RunConfig& cfg) {
  RngStream rng(cfg.seed);
  return run(op, cfg, rng);
}

EstimateReport run_min_mode(const LinearOperator& op, RunConfig cfg, RngStream& rng, const StepObserver& observer) {
  cfg.mode = Mode::Min;
  return run(op, cfg, rng, observer);
}

std::vector<SingularPair> run_deflated(const LinearOperator& op, const RunConfig& cfg, RngStream& rng,
                                       std::size_t count) {
  if (count < 1) throw InvalidInput("run_deflated needs at least one value");
  if (count > op.input_dim()) throw InvalidInput("cannot extract more singular values than the input dimension");
  std::vector<std::vector<double>> basis;
  std::vector<SingularPair> out;
  basis.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    EstimateReport rep = run_restricted(op, cfg, rng, basis);
    std::vector<double> v = std::move(rep.singular_vector);
    project_out(basis, v);
    const double nrm = std::sqrt(kernels::squared_norm(v));
    kernels::scale(1.0 / nrm, v);
    out.push_back({rep.norm_estimate, v, rep.termination});
    basis.push_back(std::move(v));
  }
  if (cfg.mode == Mode::Max) {
    std::stable_sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.sigma > r.sigma; });
  } else {
    std::stable_sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.sigma < r.sigma; });
  }
  return out;
}

void write_trace_csv(std::ostream& out, std::span<const StepDiagnostics> trace) {
  out << "k,a,b,tau,objective,min_a_sq\n";
  for (const auto& s : trace) {
    out << s.k << ',' << format_double(s.a) << ',' << format_double(s.b) << ',' << format_double(s.tau) << ','
        << format_double(s.objective) << ',' << format_double(s.min_a_sq) << '\n';
  }
}

}  // namespace opnorm
