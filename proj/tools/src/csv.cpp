#include "csv.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace becflow::cli {

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

std::string escape_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvWriter::comment(std::string_view text) {
  if (columns_ != 0) throw std::logic_error("CsvWriter: comment after header");
  out_ << "# " << text << '\n';
}

void CsvWriter::header(std::initializer_list<std::string_view> columns) {
  if (columns_ != 0) throw std::logic_error("CsvWriter: header written twice");
  bool first = true;
  for (auto c : columns) {
    if (!first) out_ << ',';
    out_ << escape_field(c);
    first = false;
  }
  out_ << '\n';
  columns_ = columns.size();
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw std::logic_error("CsvWriter: row width mismatch");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << escape_field(fields[i]);
  }
  out_ << '\n';
}

}  // namespace becflow::cli
