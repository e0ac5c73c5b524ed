#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace roughmild {

/// CSV emitter with the versioned schema comment line.  Cell formatting of
/// doubles uses shortest round-trip printing, so identical runs produce
/// byte-identical files.  The timestamp comment is suppressed in
/// reproducible mode.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> columns,
            bool reproducible);

  void row(const std::vector<std::string>& cells);

  static std::string cell(double x);
  static std::string cell(int x);
  static std::string cell(std::uint64_t x);
  static std::string cell(bool x);

 private:
  std::ostream& out_;
  std::size_t n_columns_;
};

}  // namespace roughmild
