#include "roughmild/csv.hpp"

#include <chrono>
#include <cstdint>
#include <ctime>
#include <stdexcept>

#include "roughmild/serialization.hpp"

namespace roughmild {

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> columns,
                     bool reproducible)
    : out_(out), n_columns_(columns.size()) {
  out_ << "# schema=v1\n";
  if (!reproducible) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    out_ << "# generated=" << buf << '\n';
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_columns_) {
    throw std::invalid_argument("CsvWriter: row arity mismatch");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

std::string CsvWriter::cell(double x) { return format_double(x); }
std::string CsvWriter::cell(int x) { return std::to_string(x); }
std::string CsvWriter::cell(std::uint64_t x) { return std::to_string(x); }
std::string CsvWriter::cell(bool x) { return x ? "true" : "false"; }

}  // namespace roughmild
