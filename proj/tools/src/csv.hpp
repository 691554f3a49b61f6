#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace becflow::cli {

/// 12 significant digits, '.' decimal point, independent of the locale.
std::string format_number(double v);

/// Quotes a field when it holds a comma, quote or line break.
std::string escape_field(std::string_view field);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  /// "# text" line. Only valid before the header row.
  void comment(std::string_view text);
  void header(std::initializer_list<std::string_view> columns);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
  std::size_t columns_ = 0;
};

}  // namespace becflow::cli
