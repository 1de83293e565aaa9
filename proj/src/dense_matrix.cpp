#include "opnorm/dense_matrix.hpp"

#include "opnorm/errors.hpp"
#include "opnorm/kernels.hpp"

namespace opnorm {

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw InvalidInput("matrix must have at least one row and column");
  const std::size_t cols = rows.front().size();
  DenseMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw InvalidInput("ragged matrix: row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                         " entries, expected " + std::to_string(cols));
    }
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidInput("matrix product: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) kernels::axpy(aik, b.row(k), c.row(i));
    }
  }
  return c;
}

}  // namespace opnorm
