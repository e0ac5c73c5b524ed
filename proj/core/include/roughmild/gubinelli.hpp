#pragma once

#include "roughmild/controlled.hpp"

namespace roughmild {

/// Rough integral of an operator-valued controlled path over [t_i, t_j] as
/// the finest-grid compensated sum
///   sum_k  Y_{t_k} X_{t_k,t_{k+1}} + Y'_{t_k} : XX_{t_k,t_{k+1}},
/// where the contraction pairs both driver slots of Y'.  The finest-grid
/// sum is the definition of the integral at working resolution; convergence
/// is assessed across resolutions by the harness, never inside this call.
Eigen::VectorXd rough_integral(const ControlledPath& cp, int i, int j);

/// Single compensated increment Y_{t_i} X_{t_i,t_j} + Y'_{t_i} : XX_{t_i,t_j}.
Eigen::VectorXd compensated_term(const ControlledPath& cp, int i, int j);

/// Local sewing diagnostics: for each dyadic level l the range [t_i, t_j]
/// is split into 2^l subintervals and the deviation between the single
/// compensated increment of a subinterval and the finest-grid sum over it
/// is recorded, as the worst case and as the per-level mean.  The log-log
/// slope of defect against subinterval length estimates the local error
/// order, which should approach 3 alpha.
///
/// The max statistic inherits an extreme-value bias: deeper levels take
/// the max over more subintervals, which flattens the fitted slope by
/// roughly log(#windows) across the fit range.  Rate assertions therefore
/// use the mean curve; the max stays available as the uniform-bound
/// diagnostic.
struct SewingProbe {
  std::vector<double> scales;        // subinterval lengths, coarse to fine
  std::vector<double> defects;       // max defect at each level
  std::vector<double> mean_defects;  // mean defect at each level
  /// Least-squares slope of the max curve over the last `points` levels;
  /// +inf when the defects there are all below `floor` (exact case).
  double slope(int points, double floor = 1e-14) const;
  /// Same fit on the mean curve.
  double mean_slope(int points, double floor = 1e-14) const;
};
SewingProbe sewing_rate_probe(const ControlledPath& cp, int i, int j, int levels);

/// Indefinite rough integral as a controlled path: Z_t = integral over
/// [0, t], with Gubinelli derivative Z' = Y.
ControlledPath integral_as_controlled(const ControlledPath& cp);

}  // namespace roughmild
