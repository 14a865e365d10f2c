#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace fairrep::data {

/// Splits one record. Double-quoted fields may contain the delimiter and
/// doubled quotes; records never span lines in the formats read here.
std::vector<std::string> split_csv_line(std::string_view line, char delimiter = ',');

/// Quotes a field when it contains a delimiter, quote or line break.
std::string csv_escape(std::string_view field);

std::string_view trim(std::string_view s);

/// Line-oriented reader that tracks 1-based line numbers for error messages.
class LineReader {
 public:
  explicit LineReader(const std::string& path);

  /// Next line without its terminator (handles CRLF); false at end of file.
  bool next(std::string& line);
  std::size_t line_number() const { return line_number_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_number_ = 0;
};

double parse_double(std::string_view field, const std::string& source, std::size_t line);
long long parse_int(std::string_view field, const std::string& source, std::size_t line);

}  // namespace fairrep::data
