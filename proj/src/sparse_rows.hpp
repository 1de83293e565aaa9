#pragma once

// Compressed-row weights shared by the rotation and projector operators.
// Built once at construction; apply is a gather, transpose is a scatter.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "opnorm/linop.hpp"

namespace opnorm::detail {

struct SparseRows {
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> col;
  std::vector<double> weight;

  std::size_t rows() const noexcept { return row_ptr.size() - 1; }

  void add(std::size_t c, double w) {
    if (w == 0.0) return;
    col.push_back(static_cast<std::uint32_t>(c));
    weight.push_back(w);
  }
  void end_row() { row_ptr.push_back(col.size()); }

  void multiply(std::span<const double> v, std::span<double> out) const noexcept {
    for (std::size_t i = 0; i + 1 < row_ptr.size(); ++i) {
      double s = 0.0;
      for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += weight[k] * v[col[k]];
      out[i] = s;
    }
  }

  void multiply_transpose(std::span<const double> w, std::span<double> out) const noexcept {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i + 1 < row_ptr.size(); ++i) {
      const double wi = w[i];
      if (wi == 0.0) continue;
      for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) out[col[k]] += weight[k] * wi;
    }
  }
};

class SparseRowsOperator final : public LinearOperator {
 public:
  SparseRowsOperator(SparseRows rows, std::string name)
      : LinearOperator(rows.cols, rows.rows(), std::move(name)), rows_(std::move(rows)) {}

 protected:
  void apply_unchecked(std::span<const double> v, std::span<double> out) const override {
    rows_.multiply(v, out);
  }

 private:
  SparseRows rows_;
};

class SparseRowsTransposeOperator final : public LinearOperator {
 public:
  SparseRowsTransposeOperator(SparseRows rows, std::string name)
      : LinearOperator(rows.rows(), rows.cols, std::move(name)), rows_(std::move(rows)) {}

 protected:
  void apply_unchecked(std::span<const double> w, std::span<double> out) const override {
    rows_.multiply_transpose(w, out);
  }

 private:
  SparseRows rows_;
};

}  // namespace opnorm::detail
