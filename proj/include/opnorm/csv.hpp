#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>

namespace opnorm {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

/// Writes a header row on construction, then comma-separated rows.
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::size_t, int, std::string_view>;

  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

  void row(std::initializer_list<Cell> cells);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace opnorm
