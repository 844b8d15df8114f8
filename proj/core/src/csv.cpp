#include "cosparse/csv.hpp"

#include <charconv>
#include <fstream>

#include "cosparse/error.hpp"

namespace cosparse {

std::string format_double(double value) {
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::string format_int(long long value) {
  char buf[32];
  auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::IoFailure, "cannot open for writing: " + path);
  out << csv_line(header);
  for (const auto& row : rows) out << csv_line(row);
  out.flush();
  require(out.good(), Errc::IoFailure, "write failed: " + path);
}

}  // namespace cosparse
