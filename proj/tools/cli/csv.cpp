#include "csv.hpp"

#include <charconv>
#include <stdexcept>

namespace levycouple::cli {

std::string cell(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string cell(const std::optional<double>& v) { return v ? cell(*v) : std::string(); }

std::string cell(std::size_t v) { return std::to_string(v); }

std::string cell(bool v) { return v ? "1" : "0"; }

CsvWriter::CsvWriter(std::ostream& out, const std::string& provenance,
                     const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  out_ << "# " << provenance << '\n';
  write(header);
}

void CsvWriter::write(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw std::logic_error("CSV row has the wrong column count");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
}

}  // namespace levycouple::cli
