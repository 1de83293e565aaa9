#pragma once

// Adjoint-free operator norm estimation by random search with exact line
// search on the unit sphere.
//
// Each iteration draws a direction x uniformly from the unit sphere of the
// tangent space at the current iterate v, evaluates Ax (the only oracle call),
// and moves to the best point of the great circle through v and x:
//
//   a   = <Av, Ax>,  b = |Ax|^2 - |Av|^2
//   tau = sign(a) (b / 2|a| + sqrt(b^2 / 4a^2 + 1))        (max mode)
//   v  <- (v + tau x) / sqrt(1 + tau^2)
//
// so that |Av|^2 grows by exactly tau * a per step. The image Av is updated
// with the same linear combination instead of being recomputed.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "opnorm/linop.hpp"
#include "opnorm/sampling.hpp"

namespace opnorm {

enum class Mode { Max, Min };
enum class Init { Uniform, Ones, Given };
enum class Termination { ToleranceMet, BudgetExhausted, OrthogonalDetected };

std::string_view termination_name(Termination t) noexcept;
std::string_view mode_name(Mode m) noexcept;

struct RunConfig {
  std::uint64_t seed = 0;
  /// Number of sampled directions (accepted or degenerate). 0 selects 50 * d.
  std::size_t max_iters = 0;
  double eps = 1e-6;
  bool use_stopping_rule = true;
  /// Directions drawn by the stopping check.
  int resamples = 10;
  Init init = Init::Uniform;
  std::vector<double> initial_vector;  // used when init == Given
  /// Recompute the cached image every this many accepted steps.
  std::size_t refresh_period = 100;
  Mode mode = Mode::Max;
  /// A direction is degenerate when |a| <= a_zero_rel_tol * |Av| * |Ax|.
  double a_zero_rel_tol = 1e-14;
  /// Consecutive degenerate directions before testing for A*A = cI.
  int degenerate_probes = 10;
  double orthogonality_tol = 1e-10;
  bool record_trace = true;

  /// Throws InvalidInput on out-of-range fields.
  void validate() const;
};

/// One accepted step. a, b and tau are computed at the iterate v^k;
/// objective is |Av^{k+1}|^2, the value after the update.
struct StepDiagnostics {
  std::size_t k = 0;
  double a = 0.0;
  double b = 0.0;
  double tau = 0.0;
  double objective = 0.0;
  double min_a_sq = 0.0;  // running minimum of a^2 over steps 0..k
};

struct SearchState {
  std::vector<double> v;   // unit iterate
  std::vector<double> av;  // cached A v
  std::size_t k = 0;       // accepted steps
  std::size_t oracle_calls = 0;
};

/// Scratch for one direction and its image. Together with SearchState this
/// is all the vector storage a run uses.
struct DirectionBuffers {
  std::vector<double> x;
  std::vector<double> ax;
};

struct EstimateReport {
  double norm_estimate = 0.0;
  std::vector<double> singular_vector;
  std::vector<StepDiagnostics> trace;
  Termination termination = Termination::BudgetExhausted;
  double running_min_a_sq = 0.0;
  std::size_t oracle_calls = 0;
  std::size_t iterations = 0;         // accepted steps
  std::size_t directions_drawn = 0;   // budget consumed
  std::size_t degenerate_directions = 0;
  std::size_t stop_checks = 0;
  double initial_objective = 0.0;
  /// c in A*A = cI when termination == OrthogonalDetected.
  std::optional<double> orthogonal_c;
  /// Largest relative gap between the incrementally updated image and a
  /// fresh evaluation seen at a cache refresh.
  double max_refresh_drift = 0.0;
};

struct OrthogonalityVerdict {
  bool detected = false;
  double c_estimate = 0.0;
  int probes_used = 0;
};

struct Coefficients {
  double a;
  double b;
};

/// a = <Av, Ax>, b = |Ax|^2 - |Av|^2.
Coefficients coefficients(std::span<const double> av, std::span<const double> ax);

/// Exact line-search step along the great circle. Max mode returns the
/// maximiser of |A(v + tau x)|^2 / (1 + tau^2); min mode returns the other
/// root of a + b tau - a tau^2 = 0, i.e. -1 / tau_max. Returns nullopt when
/// |a| <= a_zero_tol (no unique extremum).
std::optional<double> optimal_stepsize(double a, double b, Mode mode, double a_zero_tol = 0.0);

struct StepParams {
  Mode mode = Mode::Max;
  double a_zero_rel_tol = 1e-14;
  std::size_t refresh_period = 100;
  std::span<const std::vector<double>> basis = {};  // deflation set
};

struct StepOutcome {
  bool degenerate = false;
  StepDiagnostics diag;  // k, a, b always set; tau and objective only if accepted
};

/// Evaluates Ax for the direction in dir.x (one oracle call) and, unless the
/// direction is degenerate, moves state to the line-search optimum.
StepOutcome step(const LinearOperator& op, SearchState& state, DirectionBuffers& dir, const StepParams& params);

/// (d_eff - 1) * mean(a^2) over `cfg.resamples` fresh directions at the
/// current iterate, where d_eff = d - basis.size(). This estimates the
/// squared eigen-residual |(I - vv*)A*Av|^2. Leaves the last sampled
/// direction and its image in `dir`.
double estimate_residual_sq(const LinearOperator& op, SearchState& state, const RunConfig& cfg, RngStream& rng,
                            DirectionBuffers& dir, std::span<const std::vector<double>> basis = {});

/// True iff estimate_residual_sq(...) <= eps^2.
bool stop_check(const LinearOperator& op, SearchState& state, const RunConfig& cfg, RngStream& rng,
                DirectionBuffers& dir, std::span<const std::vector<double>> basis = {});

/// Tests A*A = cI from a uniform random start and `probes` tangent
/// directions. Requires probes >= 2.
OrthogonalityVerdict detect_orthogonal(const LinearOperator& op, RngStream& rng, int probes = 10,
                                       double tol = 1e-10);

/// Receives each accepted step and the iterate after it.
using StepObserver = std::function<void(const StepDiagnostics&, std::span<const double> v)>;

EstimateReport run(const LinearOperator& op, const RunConfig& cfg, RngStream& rng,
                   const StepObserver& observer = {});

/// Convenience: seeds a fresh stream from cfg.seed.
EstimateReport run(const LinearOperator& op, const RunConfig& cfg);

/// Smallest singular value: same loop with the min-mode step.
EstimateReport run_min_mode(const LinearOperator& op, RunConfig cfg, RngStream& rng,
                            const StepObserver& observer = {});

/// Run restricted to the orthogonal complement of `basis` (orthonormal).
EstimateReport run_restricted(const LinearOperator& op, const RunConfig& cfg, RngStream& rng,
                              std::span<const std::vector<double>> basis, const StepObserver& observer = {});

struct SingularPair {
  double sigma = 0.0;
  std::vector<double> v;
  Termination termination = Termination::BudgetExhausted;
};

/// Leading `count` singular values by repeated runs, each restricted to the
/// orthogonal complement of the vectors already found. Sorted by sigma,
/// largest first (smallest first in min mode).
std::vector<SingularPair> run_deflated(const LinearOperator& op, const RunConfig& cfg, RngStream& rng,
                                       std::size_t count);

/// Header `k,a,b,tau,objective,min_a_sq`, shortest round-trip decimals.
void write_trace_csv(std::ostream& out, std::span<const StepDiagnostics> trace);

}  // namespace opnorm
