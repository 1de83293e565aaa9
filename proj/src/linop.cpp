#include "opnorm/linop.hpp"

#include <algorithm>
#include <cmath>

#include "opnorm/errors.hpp"
#include "opnorm/kernels.hpp"

namespace opnorm {

LinearOperator::LinearOperator(std::size_t input_dim, std::size_t output_dim, std::string name)
    : input_dim_(input_dim), output_dim_(output_dim), name_(std::move(name)) {
  if (input_dim == 0 || output_dim == 0) throw InvalidInput("operator dimensions must be positive");
}

void LinearOperator::apply(std::span<const double> v, std::span<double> out) const {
  if (v.size() != input_dim_) {
    throw InvalidInput(name_ + ": input has length " + std::to_string(v.size()) + ", expected " +
                       std::to_string(input_dim_));
  }
  if (out.size() != output_dim_) {
    throw InvalidInput(name_ + ": output has length " + std::to_string(out.size()) + ", expected " +
                       std::to_string(output_dim_));
  }
  if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) {
    throw InvalidInput(name_ + ": input contains non-finite entries");
  }
  apply_unchecked(v, out);
}

std::vector<double> LinearOperator::apply(std::span<const double> v) const {
  std::vector<double> out(output_dim_);
  apply(v, out);
  return out;
}

namespace {

class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(DenseMatrix m) : LinearOperator(m.cols(), m.rows(), "dense"), m_(std::move(m)) {}

 protected:
  void apply_unchecked(std::span<const double> v, std::span<double> out) const override {
    kernels::gemv(m_.data(), m_.rows(), m_.cols(), v, out);
  }

 private:
  DenseMatrix m_;
};

// Applies M^T without forming it.
class DenseTransposeOperator final : public LinearOperator {
 public:
  explicit DenseTransposeOperator(DenseMatrix m)
      : LinearOperator(m.rows(), m.cols(), "dense-transpose"), m_(std::move(m)) {}

 protected:
  void apply_unchecked(std::span<const double> w, std::span<double> out) const override {
    kernels::gemv_t(m_.data(), m_.rows(), m_.cols(), w, out);
  }

 private:
  DenseMatrix m_;
};

class DiagonalOperator final : public LinearOperator {
 public:
  explicit DiagonalOperator(std::vector<double> diag)
      : LinearOperator(diag.size(), diag.size(), "diagonal"), diag_(std::move(diag)) {}

 protected:
  void apply_unchecked(std::span<const double> v, std::span<double> out) const override {
    for (std::size_t i = 0; i < diag_.size(); ++i) out[i] = diag_[i] * v[i];
  }

 private:
  std::vector<double> diag_;
};

class IdentityOperator final : public LinearOperator {
 public:
  explicit IdentityOperator(std::size_t n) : LinearOperator(n, n, "identity") {}

 protected:
  void apply_unchecked(std::span<const double> v, std::span<double> out) const override {
    std::copy(v.begin(), v.end(), out.begin());
  }
};

class FunctionOperator final : public LinearOperator {
 public:
  FunctionOperator(std::size_t d, std::size_t m, ApplyFn fn, std::string name)
      : LinearOperator(d, m, std::move(name)), fn_(std::move(fn)) {}

 protected:
  void apply_unchecked(std::span<const double> v, std::span<double> out) const override { fn_(v, out); }

 private:
  ApplyFn fn_;
};

void require_finite(const DenseMatrix& m) {
  if (!std::all_of(m.data().begin(), m.data().end(), [](double x) { return std::isfinite(x); })) {
    throw InvalidInput("matrix contains non-finite entries");
  }
}

}  // namespace

OperatorPtr make_dense(DenseMatrix m) {
  if (m.rows() == 0 || m.cols() == 0) throw InvalidInput("dense operator needs m, d >= 1");
  require_finite(m);
  return std::make_shared<DenseOperator>(std::move(m));
}

OperatorPtr make_identity(std::size_t n) { return std::make_shared<IdentityOperator>(n); }

OperatorPtr make_diagonal(std::vector<double> diag) {
  if (!std::all_of(diag.begin(), diag.end(), [](double x) { return std::isfinite(x); })) {
    throw InvalidInput("diagonal contains non-finite entries");
  }
  return std::make_shared<DiagonalOperator>(std::move(diag));
}

OperatorPtr make_function(std::size_t input_dim, std::size_t output_dim, ApplyFn fn, std::string name) {
  if (!fn) throw InvalidInput("function operator needs a callable");
  return std::make_shared<FunctionOperator>(input_dim, output_dim, std::move(fn), std::move(name));
}

AdjointPair make_pair(OperatorPtr forward, OperatorPtr backward, Exactness exactness) {
  if (!forward || !backward) throw InvalidInput("adjoint pair needs both operators");
  if (backward->input_dim() != forward->output_dim() || backward->output_dim() != forward->input_dim()) {
    throw InvalidInput("backward operator dimensions do not match forward operator");
  }
  return AdjointPair{std::move(forward), std::move(backward), exactness};
}

AdjointPair make_dense_pair(const DenseMatrix& a) {
  require_finite(a);
  return make_pair(make_dense(a), std::make_shared<DenseTransposeOperator>(a), Exactness::ClaimedExact);
}

AdjointPair make_mismatched_pair(const DenseMatrix& a, const DenseMatrix& b) {
  return make_pair(make_dense(a), make_dense(b), Exactness::Mismatched);
}

std::vector<double> adjoint_apply(const AdjointPair& pair, std::span<const double> w) {
  return pair.backward->apply(w);
}

}  // namespace opnorm
