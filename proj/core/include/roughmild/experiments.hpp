#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "roughmild/drivers.hpp"

namespace roughmild {

/// Scalar function together with its derivative, for f(X)-type integrands.
struct ScalarField {
  std::function<double(double)> f;
  std::function<double(double)> df;
};

/// Multi-resolution comparison of the rough integral of Y = f(X) against
/// the left-point Ito sum, sharing one fine Brownian sample per seed.  For
/// the Ito enhancement the gap is the vanishing compensator; with the
/// geometric (piecewise-linear) control enhancement it converges to the
/// nonzero Ito-Stratonovich correction instead.
struct CoincidenceResult {
  std::vector<int> resolutions;
  std::vector<std::vector<double>> gaps;            // [resolution][seed]
  std::vector<std::vector<double>> gaps_geometric;  // control run
  std::vector<double> median_gap;
  std::vector<double> median_gap_geometric;
  /// Deterministic integral scale sqrt(tr(Q) T) sup|f|; medians divided by
  /// it give the relative gap.
  double integral_scale = 1.0;
  std::vector<double> median_gap_rel;
};
CoincidenceResult coincidence_check(const QSpectrum& spectrum, double horizon,
                                    const std::vector<int>& resolutions,
                                    int fine_factor, int n_seeds,
                                    std::uint64_t base_seed, const ScalarField& field,
                                    double f_sup);

/// Empirical covariance of a Q-fBm sample against the analytic kernel on a
/// small grid; errors are standardized by the per-entry Monte Carlo
/// standard error.
struct CovarianceCheck {
  struct Entry {
    int component;
    int i;
    int j;
    double empirical;
    double analytic;
    double standard_error;
    double z;
  };
  std::vector<Entry> entries;
  double max_abs_z = 0.0;
};
CovarianceCheck fbm_covariance_check(const QSpectrum& spectrum, double hurst,
                                     const Grid& grid, int n_seeds,
                                     std::uint64_t base_seed);

/// Monte Carlo mean of the geometric defect tensor of Ito-enhanced samples
/// over [t_i, t_j]; the expected value is -(t_j - t_i) Q / 2 entrywise.
struct ItoDefectCheck {
  struct Entry {
    int row;
    int col;
    double mean;
    double expected;
    double standard_error;
    double z;
  };
  std::vector<Entry> entries;
  double max_abs_z = 0.0;
};
ItoDefectCheck ito_mean_defect_check(const QSpectrum& spectrum, const Grid& grid,
                                     int i, int j, int fine_factor, int n_seeds,
                                     std::uint64_t base_seed);

double median(std::vector<double> values);

}  // namespace roughmild
