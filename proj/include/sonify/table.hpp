#ifndef SONIFY_TABLE_HPP
#define SONIFY_TABLE_HPP

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sonify/error.hpp"

namespace sonify {

/// Column-oriented table of 64-bit reals with named columns.
class Table {
public:
  Table() = default;

  void add_column(std::string name, std::vector<double> values) {
    if (has_column(name))
      throw DataError("duplicate column '" + name + "'");
    if (!columns_.empty() && values.size() != rows())
      throw DataError("column '" + name + "' has " +
                      std::to_string(values.size()) + " rows, expected " +
                      std::to_string(rows()));
    names_.push_back(std::move(name));
    columns_.push_back(std::move(values));
  }

  std::size_t rows() const { return columns_.empty() ? 0 : columns_.front().size(); }
  std::size_t column_count() const { return columns_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  bool has_column(std::string_view name) const {
    for (const auto& n : names_)
      if (n == name) return true;
    return false;
  }

  std::span<const double> column(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return columns_[i];
    throw DataError("no column named '" + std::string(name) + "' in data table");
  }

private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace detail

/// Parses CSV text: one header row, then numeric rows. Blank lines and
/// lines starting with '#' are skipped. No quoting inside numeric cells.
inline Table parse_table(std::string_view text, std::string_view origin = "<memory>") {
  std::vector<std::string> header;
  std::vector<std::vector<double>> cols;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  const std::string where(origin);

  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    const auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') {
      if (end == text.size()) break;
      continue;
    }

    auto cells = detail::split_csv_line(trimmed);
    if (header.empty()) {
      for (auto c : cells) {
        auto name = detail::unquote(c);
        if (name.empty())
          throw DataError(where + ": empty column name in header");
        for (const auto& h : header)
          if (h == name) throw DataError(where + ": duplicate column '" + name + "'");
        header.push_back(std::move(name));
      }
      cols.resize(header.size());
    } else {
      if (cells.size() != header.size())
        throw DataError(where + ": line " + std::to_string(line_no) + ": ragged row with " +
                        std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(header.size()));
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto cell = cells[c];
        if (cell.empty())
          throw DataError(where + ": line " + std::to_string(line_no) + ", column '" +
                          header[c] + "': missing value");
        const char* first = cell.data();
        const char* last = first + cell.size();
        if (*first == '+') ++first;
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last || !std::isfinite(value))
          throw DataError(where + ": line " + std::to_string(line_no) + ", column '" +
                          header[c] + "': non-numeric value '" + std::string(cell) + "'");
        cols[c].push_back(value);
      }
    }
    if (end == text.size()) break;
  }

  if (header.empty()) throw DataError(where + ": empty table (no header)");
  if (cols.front().empty()) throw DataError(where + ": empty table");

  Table table;
  for (std::size_t c = 0; c < header.size(); ++c)
    table.add_column(std::move(header[c]), std::move(cols[c]));
  return table;
}

inline Table load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open data file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read data file " + path.string());
  return parse_table(buf.str(), path.string());
}

}  // namespace sonify

#endif  // SONIFY_TABLE_HPP
