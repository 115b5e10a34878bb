#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace landau::harness {

/// %.17g, so every double round-trips exactly.
std::string format_double(double x);

/// Fixed-column CSV writer; every row must match the header width.
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::string>;

  CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns);
  void row(const std::vector<Cell>& cells);
  void close();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::size_t width_;
  std::ofstream out_;
};

}  // namespace landau::harness
