#ifndef LEVYCOUPLE_CLI_CSV_HPP_
#define LEVYCOUPLE_CLI_CSV_HPP_

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace levycouple::cli {

// Cell formatting. Doubles use 17 significant digits so values round-trip;
// an empty optional is an empty cell.
std::string cell(double v);
std::string cell(const std::optional<double>& v);
std::string cell(std::size_t v);
std::string cell(bool v);
inline std::string cell(const std::string& v) { return v; }
inline std::string cell(const char* v) { return v; }

class CsvWriter {
 public:
  /// Writes "# <provenance>" and the header row.
  CsvWriter(std::ostream& out, const std::string& provenance,
            const std::vector<std::string>& header);

  template <typename... Cells>
  void row(const Cells&... cells) {
    std::vector<std::string> fields{cell(cells)...};
    write(fields);
  }

  void write(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace levycouple::cli

#endif  // LEVYCOUPLE_CLI_CSV_HPP_
