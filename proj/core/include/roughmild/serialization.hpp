#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "roughmild/controlled.hpp"
#include "roughmild/drivers.hpp"

namespace roughmild {

/// Line-oriented rough-path text format:
///   roughpath v1 dim=<d> steps=<N> T=<float> alpha=<float>
///   meta kind=<kind> hurst=<float> seed=<u64> fine_factor=<int>   (optional)
///   total <d*d floats>                                            (optional)
///   <N+1 lines of d floats>              first level
///   <N lines of d*d floats, row-major>   step tensors
/// Floats use shortest round-trip formatting, so write/read round-trips are
/// bit exact.  The optional `total` line records the Chen-composed tensor
/// over [0,T] at write time; loaders can check it to detect corrupted data
/// (the per-step representation alone is Chen-consistent by construction).
///
/// Controlled paths append:
///   controlled v1 rows=<m> cols=<c>
///   <N+1 lines of m*c floats, row-major>       y
///   <N+1 lines of m*c*d floats>                y' (slices a = 0..d-1, each row-major)

struct DriverFileInfo {
  std::optional<DriverKind> kind;
  double hurst = 0.5;
  std::uint64_t seed = 0;
  int fine_factor = 1;
  /// Chen defect of the recorded [0,T] tensor against the loaded steps;
  /// absent when the file carries no `total` line.
  std::optional<double> total_defect;
};

std::string format_double(double x);
double parse_double(const std::string& token);

void write_rough_path(std::ostream& out, const RoughPath& rough,
                      const DriverFileInfo* info = nullptr, bool write_total = true);
RoughPath read_rough_path(std::istream& in, DriverFileInfo* info = nullptr);

void write_driver(std::ostream& out, const DriverSample& sample);
DriverSample read_driver(std::istream& in, DriverFileInfo* info = nullptr);

void write_controlled(std::ostream& out, const ControlledPath& cp);
ControlledPath read_controlled(std::istream& in, DriverFileInfo* info = nullptr);

void write_driver_file(const std::string& path, const DriverSample& sample);
DriverSample read_driver_file(const std::string& path, DriverFileInfo* info = nullptr);

}  // namespace roughmild
