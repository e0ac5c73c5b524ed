#pragma once

#include <string>
#include <vector>

#include "roughmild/config.hpp"
#include "roughmild/controlled.hpp"
#include "roughmild/drivers.hpp"

namespace roughmild {

/// One structural check outcome: lhs is the measured quantity, rhs the
/// bound it must respect, slack = rhs - lhs.
struct CheckRow {
  std::string suite;
  std::string check_id;
  std::string instance_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
};

/// Suites understood by the verify runner, in execution order:
/// chen, geometric, scaling, norms, semigroup, sewing, conv_split.
std::vector<std::string> default_verify_suites();

/// Runs one suite with sizes drawn from the [verify] config section.
std::vector<CheckRow> run_verify_suite(const std::string& suite, const Config& config);

/// Randomized controlled path over a driver: a blend of a smooth trend, a
/// linear image of the driver and a smooth-function composition, which
/// exercises all terms of the remainder calculus.  Deterministic in seed.
ControlledPath make_random_controlled_path(std::shared_ptr<const RoughPath> reference,
                                           int state_dim, std::uint64_t seed);

/// Driver sampled according to [verify] config defaults; kind is one of
/// "pwl" (deterministic piecewise-linear), "ito_wiener", "fbm<H>" tags.
DriverSample make_verify_driver(const std::string& kind, const Grid& grid,
                                int driver_dim, std::uint64_t seed);

/// Generator from a config section:
///   generator = laplacian1d | diagonal | zero | custom
/// with parameters size, spacing (laplacian1d), diagonal (comma list), or
/// matrix_file (whitespace-separated floats, row-major, size x size).
Eigen::MatrixXd generator_from_config(const Config& config, const std::string& section);

}  // namespace roughmild
