#pragma once

#include <vector>

#include "roughmild/grid.hpp"

namespace roughmild {

/// Rough path over R^d at Hoelder scale alpha in (1/3, 1/2]: a first-level
/// path together with one second-level tensor per grid step.  The tensor
/// over an arbitrary index pair is obtained by Chen composition of the
/// per-step tensors (see chen_area), which makes the representation
/// Chen-consistent by construction and keeps storage linear in the grid.
class RoughPath {
 public:
  RoughPath(Path first_level, std::vector<Eigen::MatrixXd> step_areas, double alpha);

  const Path& first_level() const { return first_level_; }
  const Grid& grid() const { return first_level_.grid(); }
  int dim() const { return first_level_.dim(); }
  double alpha() const { return alpha_; }
  const std::vector<Eigen::MatrixXd>& step_areas() const { return step_areas_; }

  Eigen::VectorXd increment(int i, int j) const { return first_level_.increment(i, j); }

  /// Second-level tensor over [t_i, t_j] by left-fold Chen composition:
  /// acc <- acc + area_k + X_{t_i,t_k} (x) X_{t_k,t_{k+1}}.  i == j gives
  /// the zero tensor, j == i+1 returns the stored step tensor.
  Eigen::MatrixXd chen_area(int i, int j) const;

  /// Same composition by balanced bisection; the difference to chen_area is
  /// a monitored rounding diagnostic, not a correctness condition.
  Eigen::MatrixXd chen_area_bisect(int i, int j) const;

  /// Restriction to [t_{i0}, t_{i1}], re-based to start at time zero.
  RoughPath subrange(int i0, int i1) const;

 private:
  Path first_level_;
  std::vector<Eigen::MatrixXd> step_areas_;
  double alpha_;
};

/// Dense second-level tensor table over all ordered grid pairs i < j.
/// Used to validate externally supplied rough-path data against Chen's
/// relation, and as a scratch object for exhaustive pair sweeps.
class SecondLevelTable {
 public:
  SecondLevelTable(int n_steps, int dim);

  int n_steps() const { return n_steps_; }
  int dim() const { return dim_; }

  const Eigen::MatrixXd& at(int i, int j) const { return entries_[index(i, j)]; }
  Eigen::MatrixXd& at(int i, int j) { return entries_[index(i, j)]; }

 private:
  std::size_t index(int i, int j) const;

  int n_steps_;
  int dim_;
  std::vector<Eigen::MatrixXd> entries_;
};

/// Expands the per-step representation into the full pair table in
/// O(n^2 d^2) by running the Chen fold incrementally along each row.
SecondLevelTable full_table(const RoughPath& rough);

/// Hoelder diagnostics of a rough path: first- and second-level seminorms
/// and their sum, plus windowed variants over subintervals of length <= h.
struct HoelderReport {
  double alpha = 0.0;
  double x_norm = 0.0;
  double xx_norm = 0.0;
  double combined = 0.0;
  double window = 0.0;
  double x_norm_windowed = 0.0;
  double xx_norm_windowed = 0.0;
  double combined_windowed = 0.0;
};

/// Discrete sup of |XX_{s,t}|_F / |t-s|^{2 alpha} over grid pairs, with the
/// second level reconstructed by Chen composition.
double second_level_norm(const RoughPath& rough, double alpha, double window = -1.0);

HoelderReport hoelder_report(const RoughPath& rough, double alpha, double window = -1.0);

/// Chen defect |XX_{s,t} - XX_{s,u} - XX_{u,t} - X_{s,u} (x) X_{u,t}|_F of an
/// externally supplied full table at indices s <= u <= t.
double chen_defect(const Path& first_level, const SecondLevelTable& table,
                   int s, int u, int t);

/// Deviation from weak geometricity over [t_i, t_j]:
/// Sym(XX_{s,t}) - X_{s,t} (x) X_{s,t} / 2, returned as a tensor and as its
/// Frobenius norm.
Eigen::MatrixXd geometric_defect_tensor(const RoughPath& rough, int i, int j);
double geometric_defect(const RoughPath& rough, int i, int j);

/// Maximum geometric defect over all grid pairs.
double max_geometric_defect(const RoughPath& rough);

/// Maximum Chen defect of full_table(rough) over all index triples.
double max_chen_defect(const RoughPath& rough);

/// Exact second-level enhancement of the piecewise-linear interpolant of the
/// samples: per-step tensor X_{s,t} (x) X_{s,t} / 2.  The result is weakly
/// geometric.
RoughPath enhance_piecewise_linear(const Path& path, double alpha);

/// Checks the cross-scale seminorm bound
///   |||X|||_alpha <= ||X||_beta T^(beta-alpha) + ||XX||_{2 beta} T^(2(beta-alpha))
/// for 1/3 < alpha < beta <= 1/2.  Returns slack = rhs - lhs.
struct ScalingBound {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
};
ScalingBound scaling_bound_check(const RoughPath& rough, double alpha, double beta);

}  // namespace roughmild
