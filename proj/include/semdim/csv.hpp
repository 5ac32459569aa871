#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semdim {

/// One parsed data row with its 1-based line number in the source file.
struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Header-addressed CSV table (RFC 4180 quoting, no embedded newlines).
class CsvTable {
 public:
  static CsvTable read(const std::filesystem::path& path);
  static CsvTable parse(std::string_view text, std::string source);

  const std::string& source() const { return source_; }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<CsvRow>& rows() const { return rows_; }

  std::optional<std::size_t> column(std::string_view name) const;
  /// Throws ParseError on the header line if the column is missing.
  std::size_t require_column(std::string_view name) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::unordered_map<std::string, std::size_t> columns_;
  std::vector<CsvRow> rows_;
};

std::vector<std::string> split_csv_line(std::string_view line);

/// Quotes a field when it contains a comma, quote, or leading/trailing space.
std::string csv_escape(std::string_view field);
std::string csv_join(const std::vector<std::string>& fields);

/// printf-style "%.*g" rendering; 17 significant digits round-trips a double.
std::string format_double(double value, int precision = 17);

/// Strict double parse of the whole token (surrounding spaces allowed).
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_integer(std::string_view token);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace semdim
