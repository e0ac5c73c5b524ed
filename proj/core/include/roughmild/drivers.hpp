#pragma once

#include <cstdint>
#include <string>

#include "roughmild/controlled.hpp"
#include "roughmild/rough_path.hpp"

namespace roughmild {

/// Finite covariance spectrum: the leading eigenvalues of Q, stored in
/// descending order.  The driver space is the span of the first d modes;
/// there is no hidden tail.
struct QSpectrum {
  Eigen::VectorXd eigenvalues;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  double trace() const { return eigenvalues.sum(); }
  Eigen::MatrixXd as_matrix() const { return eigenvalues.asDiagonal(); }

  /// lambda_k proportional to k^(-decay), normalized to trace one.
  static QSpectrum polynomial(double decay, int d);
  static QSpectrum from_list(Eigen::VectorXd values);
  /// Config syntax: "polynomial(decay=<x>, d=<n>)" or an explicit
  /// comma-separated list of descending positive eigenvalues.
  static QSpectrum parse(const std::string& text);
};

enum class DriverKind { ItoWiener, GeometricWiener, GeometricFbm };

std::string to_string(DriverKind kind);
DriverKind driver_kind_from_string(const std::string& name);

/// A sampled rough-path driver plus its provenance.  Geometric kinds pass
/// the geometric-defect check to rounding; the Ito kind does not (its
/// symmetric part is centered instead of chain-rule compatible).
struct DriverSample {
  RoughPath rough;
  DriverKind kind;
  double hurst = 0.5;
  int fine_factor = 1;
  std::uint64_t seed = 0;
};

/// Ito-enhanced Q-Wiener sample.  Brownian components are simulated on a
/// grid refined by fine_factor (a power of two >= 8); the first level is
/// subsampled and the per-step second level is the left-point double
/// integral accumulated over the fine steps.
DriverSample sample_q_wiener(const QSpectrum& spectrum, const Grid& grid,
                             int fine_factor, std::uint64_t seed,
                             double alpha = 0.45);

/// Geometric (Stratonovich-like) Q-Wiener sample: exact Brownian increments
/// on the grid, enhanced piecewise linearly.
DriverSample sample_q_wiener_geometric(const QSpectrum& spectrum, const Grid& grid,
                                       std::uint64_t seed, double alpha = 0.45);

/// Q-fractional Brownian sample with Hurst index in (1/3, 1/2].  Each
/// scalar component is drawn exactly through a Cholesky factor of the fBm
/// covariance; enhancement is piecewise linear, so the sample is weakly
/// geometric.  A non-positive-definite covariance from rounding is retried
/// once with 1e-12 diagonal jitter.
DriverSample sample_q_fbm(const QSpectrum& spectrum, double hurst, const Grid& grid,
                          std::uint64_t seed, double alpha = -1.0);

/// Restriction of a sample to every `factor`-th grid point; second-level
/// tensors are Chen-aggregated, so the coarse sample represents the same
/// underlying rough path.
DriverSample coarsen(const DriverSample& sample, int factor);

/// Exact fBm covariance value lambda * (s^{2H} + t^{2H} - |t-s|^{2H}) / 2.
double fbm_covariance(double s, double t, double hurst);

/// Monte Carlo estimate of moment scaling across dyadic gaps:
/// E |X_{0,g}|^p ~ g^(p/2) and E |XX_{0,g}|^p ~ g^p for the Ito-enhanced
/// Q-Wiener process.  Returns fitted log-log slopes.
struct MomentSlopes {
  std::vector<double> gaps;
  std::vector<double> first_level_moment;
  std::vector<double> second_level_moment;
  double first_level_slope = 0.0;
  double second_level_slope = 0.0;
};
MomentSlopes moment_scaling_probe(const QSpectrum& spectrum, const Grid& grid,
                                  int p, int n_seeds, std::uint64_t base_seed,
                                  int fine_factor = 8);

/// Left-point Ito sum  sum_{k<j} Y_{t_k} X_{t_k,t_{k+1}}  for an adapted
/// operator-valued integrand (adaptedness is the caller's contract).
Eigen::VectorXd ito_integral_leftpoint(const std::vector<Eigen::MatrixXd>& y,
                                       const RoughPath& driver, int j);

/// Gap between the rough integral and the left-point Ito sum over the full
/// range; for an Ito-enhanced driver this is the compensator
/// sum_k Y'_k : XX_k, which vanishes with refinement.
double coincidence_gap(const ControlledPath& cp);

}  // namespace roughmild
