#include "roughmild/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace roughmild {

Grid::Grid(double horizon, int n_steps) : horizon_(horizon), n_steps_(n_steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("Grid: horizon must be positive and finite");
  }
  if (n_steps < 1) {
    throw std::invalid_argument("Grid: need at least one step");
  }
  step_ = horizon_ / n_steps_;
}

Path::Path(Grid grid, Eigen::MatrixXd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.cols() != grid_.n_points()) {
    throw std::invalid_argument("Path: values must have one column per grid point");
  }
  if (values_.rows() < 1) {
    throw std::invalid_argument("Path: dimension must be positive");
  }
  if (!values_.allFinite()) {
    throw std::invalid_argument("Path: values must be finite");
  }
}

Path Path::zero(const Grid& grid, int dim) {
  return Path(grid, Eigen::MatrixXd::Zero(dim, grid.n_points()));
}

Path Path::subrange(int i0, int i1) const {
  if (i0 < 0 || i1 > grid_.n_steps() || i0 >= i1) {
    throw std::invalid_argument("Path::subrange: bad index range");
  }
  Grid sub(grid_.step() * (i1 - i0), i1 - i0);
  return Path(sub, values_.middleCols(i0, i1 - i0 + 1));
}

double holder_norm(const Path& path, double alpha, double window) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::invalid_argument("holder_norm: alpha must lie in (0,1]");
  }
  const int n = path.grid().n_steps();
  if (n < 1) {
    throw std::invalid_argument("holder_norm: degenerate path (fewer than 2 points)");
  }
  const double h = path.grid().step();
  const auto& v = path.values();
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const double gap = h * (j - i);
      if (window > 0.0 && gap > window) break;
      const double num = (v.col(j) - v.col(i)).norm();
      best = std::max(best, num / std::pow(gap, alpha));
    }
  }
  return best;
}

}  // namespace roughmild
