#include "opnorm/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "opnorm/errors.hpp"

namespace opnorm {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view field, std::size_t line_no) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    throw InvalidInput("line " + std::to_string(line_no) + ": cannot parse '" + std::string(field) + "' as a number");
  }
  return value;
}

}  // namespace

DenseMatrix parse_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      row.push_back(parse_number(body.substr(start, comma - start), line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInput("matrix CSV is empty");
  return DenseMatrix::from_rows(rows);
}

DenseMatrix load_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open matrix file " + path.string());
  return parse_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
  char buf[32];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      const auto res = std::to_chars(buf, buf + sizeof buf, m(i, j));
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

}  // namespace opnorm
