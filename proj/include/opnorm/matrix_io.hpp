#pragma once

// Plain-text CSV matrices: one row per line, comma-separated decimals,
// no header. Blank lines are skipped.

#include <filesystem>
#include <iosfwd>

#include "opnorm/dense_matrix.hpp"

namespace opnorm {

DenseMatrix parse_matrix_csv(std::istream& in);
DenseMatrix load_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(std::ostream& out, const DenseMatrix& m);

}  // namespace opnorm
