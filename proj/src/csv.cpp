#include "opnorm/csv.hpp"

#include <charconv>

#include "opnorm/errors.hpp"

namespace opnorm {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header)
    : path_(path), out_(path), columns_(header.size()) {
  if (!out_) throw InvalidInput("cannot write " + path.string());
  bool first = true;
  for (auto h : header) {
    if (!first) out_ << ',';
    out_ << h;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<Cell> cells) {
  if (cells.size() != columns_) throw InvalidInput("CSV row width does not match header of " + path_.string());
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out_ << ',';
    first = false;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out_ << format_double(v);
          } else {
            out_ << v;
          }
        },
        c);
  }
  out_ << '\n';
}

}  // namespace opnorm
