#pragma once

// Baselines and ground truth. Everything here may use the backward map or
// materialise the operator; the adjoint-free solver never calls into it.

#include <cstddef>
#include <optional>
#include <vector>

#include "opnorm/dense_matrix.hpp"
#include "opnorm/linop.hpp"
#include "opnorm/sampling.hpp"

namespace opnorm {

struct PowerIterationReport {
  double estimate_via_av = 0.0;    // |A v|
  double estimate_via_gram = 0.0;  // sqrt(|B A v|)
  std::size_t iterations = 0;
  bool converged = false;
  /// The two estimators differ by more than the disagreement tolerance;
  /// with an exact adjoint they share a limit, so this points at B != A*.
  bool estimators_disagree = false;
  std::vector<double> trace_via_av;
  std::vector<double> trace_via_gram;
  std::vector<double> vector;
};

struct PowerIterationOptions {
  std::size_t max_iters = 1000;
  /// Stop once both estimates change by at most tol (relative) in one step.
  double tol = 1e-12;
  double disagreement_tol = 1e-3;
  /// When set, also stop once |Av| is within target_rel_tol of this value.
  std::optional<double> target;
  double target_rel_tol = 1e-5;
};

/// v <- normalize(B (A v)) from a uniform random start.
PowerIterationReport power_iteration(const AdjointPair& pair, const PowerIterationOptions& opts, RngStream& rng);

/// Default cap on the input dimension accepted by materialize().
inline constexpr std::size_t kMaterializeCap = 4096;

/// Column i = A e_i. Throws InvalidInput above the cap.
DenseMatrix materialize(const LinearOperator& op, std::size_t cap = kMaterializeCap);

struct DenseSpectrum {
  std::vector<double> singular_values;  // descending
  DenseMatrix right_vectors;            // row i is the right singular vector of singular_values[i]
  int sweeps = 0;
};

/// Cyclic Jacobi on the Gram matrix A^T A, sweeping until the off-diagonal
/// Frobenius norm is at most off_tol times the Frobenius norm.
DenseSpectrum dense_spectrum(const DenseMatrix& a, double off_tol = 1e-12, int max_sweeps = 60);

/// Largest singular value via dense_spectrum(materialize(op)).
double oracle_sigma_max(const LinearOperator& op);

/// Orthonormal d x d matrix from Gram-Schmidt on a Gaussian matrix.
DenseMatrix random_orthogonal(RngStream& rng, std::size_t d);

/// max over probes of |<Av,w> - <v,Bw>| / (|Av||w| + |v||Bw|), Gaussian v, w.
double adjointness_gap(const AdjointPair& pair, int probes, RngStream& rng);

/// |A^T A v - |Av|^2 v| for a dense A; test-side eigen-residual.
double eigen_residual(const DenseMatrix& a, std::span<const double> v);

}  // namespace opnorm
