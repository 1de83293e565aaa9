#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace opnorm {

/// Row-major real matrix. Plain value type; used to define dense operators
/// and as the output of the test oracles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Builds from nested rows. Throws InvalidInput on ragged or empty input.
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  DenseMatrix transposed() const;

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace opnorm
