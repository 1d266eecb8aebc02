#pragma once

// Deterministic text output: shortest round-trip decimal for doubles, comma
// separated, LF line endings.

#include <array>
#include <charconv>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

namespace pwell::io {

inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf.data(), res.ptr);
}

/// A CSV cell: either a number or a bare token (no quoting needed here).
class Cell {
 public:
  Cell(double v) : text_(format_double(v)) {}
  Cell(int v) : text_(std::to_string(v)) {}
  Cell(const std::string& s) : text_(s) {}
  Cell(const char* s) : text_(s) {}
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

inline void write_csv_row(std::ostream& os, const std::vector<Cell>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i].text();
  }
  os << '\n';
}

inline void write_csv_header(std::ostream& os, const std::vector<std::string>& names) {
  std::vector<Cell> cells(names.begin(), names.end());
  write_csv_row(os, cells);
}

}  // namespace pwell::io
