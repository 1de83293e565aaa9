#pragma once

// Black-box linear operators. The solver only ever calls `apply`; anything
// that can evaluate v -> Av can be wrapped as a LinearOperator.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "opnorm/dense_matrix.hpp"

namespace opnorm {

class LinearOperator {
 public:
  LinearOperator(std::size_t input_dim, std::size_t output_dim, std::string name);
  virtual ~LinearOperator() = default;

  LinearOperator(const LinearOperator&) = delete;
  LinearOperator& operator=(const LinearOperator&) = delete;

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t output_dim() const noexcept { return output_dim_; }
  const std::string& name() const noexcept { return name_; }

  /// out = A v. Throws InvalidInput on a length mismatch or non-finite input.
  /// Never allocates.
  void apply(std::span<const double> v, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> v) const;

 protected:
  /// Sizes are already validated. Must overwrite every entry of `out`.
  virtual void apply_unchecked(std::span<const double> v, std::span<double> out) const = 0;

 private:
  std::size_t input_dim_;
  std::size_t output_dim_;
  std::string name_;
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

/// Signature for operators given as plain callables.
using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

OperatorPtr make_dense(DenseMatrix m);
OperatorPtr make_identity(std::size_t n);
OperatorPtr make_diagonal(std::vector<double> diag);
OperatorPtr make_function(std::size_t input_dim, std::size_t output_dim, ApplyFn fn,
                          std::string name = "function");

/// Whether a backward operator claims to be the exact adjoint of its forward.
enum class Exactness { ClaimedExact, Mismatched };

/// A forward operator together with some "backward" map w -> Bw that may or
/// may not be its adjoint. Only baselines and test oracles use the backward
/// map; the adjoint-free solver never sees it.
struct AdjointPair {
  OperatorPtr forward;
  OperatorPtr backward;
  Exactness exactness = Exactness::Mismatched;
};

/// Validates that backward maps R^m -> R^d for forward R^d -> R^m.
AdjointPair make_pair(OperatorPtr forward, OperatorPtr backward, Exactness exactness);

/// Forward A, backward A^T (exact).
AdjointPair make_dense_pair(const DenseMatrix& a);

/// Forward A, backward B (B is d x m and not assumed to equal A^T).
AdjointPair make_mismatched_pair(const DenseMatrix& a, const DenseMatrix& b);

std::vector<double> adjoint_apply(const AdjointPair& pair, std::span<const double> w);

}  // namespace opnorm
