#pragma once

#include <Eigen/Dense>

namespace roughmild {

/// Uniform time grid t_i = i*T/n on [0,T].
class Grid {
 public:
  Grid(double horizon, int n_steps);

  double horizon() const { return horizon_; }
  int n_steps() const { return n_steps_; }
  int n_points() const { return n_steps_ + 1; }
  double step() const { return step_; }
  double time(int i) const { return step_ * i; }

  bool operator==(const Grid& other) const {
    return horizon_ == other.horizon_ && n_steps_ == other.n_steps_;
  }

 private:
  double horizon_;
  int n_steps_;
  double step_;
};

/// Grid-sampled path with values in R^dim, one column per grid point.
class Path {
 public:
  Path(Grid grid, Eigen::MatrixXd values);

  /// Zero path of the given dimension.
  static Path zero(const Grid& grid, int dim);

  const Grid& grid() const { return grid_; }
  int dim() const { return static_cast<int>(values_.rows()); }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::MatrixXd& values() { return values_; }

  Eigen::VectorXd value(int i) const { return values_.col(i); }

  /// Increment X_t - X_s between grid indices.
  Eigen::VectorXd increment(int i, int j) const {
    return values_.col(j) - values_.col(i);
  }

  /// Restriction to [t_{i0}, t_{i1}], re-based to start at time zero.
  Path subrange(int i0, int i1) const;

 private:
  Grid grid_;
  Eigen::MatrixXd values_;  // dim x (n_steps+1)
};

/// Discrete alpha-Hoelder seminorm: exact supremum of |X_{s,t}|/|t-s|^alpha
/// over all grid pairs, optionally restricted to |t-s| <= window.
double holder_norm(const Path& path, double alpha, double window = -1.0);

}  // namespace roughmild
