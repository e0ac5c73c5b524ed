#include "roughmild/rough_path.hpp"

#include <cmath>
#include <stdexcept>

namespace roughmild {

RoughPath::RoughPath(Path first_level, std::vector<Eigen::MatrixXd> step_areas,
                     double alpha)
    : first_level_(std::move(first_level)),
      step_areas_(std::move(step_areas)),
      alpha_(alpha) {
  if (!(alpha_ > 1.0 / 3.0) || alpha_ > 0.5) {
    throw std::invalid_argument("RoughPath: alpha must lie in (1/3, 1/2]");
  }
  const int n = first_level_.grid().n_steps();
  const int d = first_level_.dim();
  if (static_cast<int>(step_areas_.size()) != n) {
    throw std::invalid_argument("RoughPath: need one step tensor per grid step");
  }
  for (const auto& a : step_areas_) {
    if (a.rows() != d || a.cols() != d) {
      throw std::invalid_argument("RoughPath: step tensors must be d x d");
    }
    if (!a.allFinite()) {
      throw std::invalid_argument("RoughPath: step tensors must be finite");
    }
  }
}

Eigen::MatrixXd RoughPath::chen_area(int i, int j) const {
  const int n = grid().n_steps();
  if (i < 0 || j > n || i > j) {
    throw std::out_of_range("RoughPath::chen_area: bad index pair");
  }
  const int d = dim();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  const auto& v = first_level_.values();
  for (int k = i; k < j; ++k) {
    acc += step_areas_[k];
    if (k > i) {
      acc.noalias() += (v.col(k) - v.col(i)) * (v.col(k + 1) - v.col(k)).transpose();
    }
  }
  return acc;
}

Eigen::MatrixXd RoughPath::chen_area_bisect(int i, int j) const {
  if (j - i <= 4) return chen_area(i, j);
  const int m = i + (j - i) / 2;
  Eigen::MatrixXd acc = chen_area_bisect(i, m) + chen_area_bisect(m, j);
  acc.noalias() += increment(i, m) * increment(m, j).transpose();
  return acc;
}

RoughPath RoughPath::subrange(int i0, int i1) const {
  std::vector<Eigen::MatrixXd> areas(step_areas_.begin() + i0,
                                     step_areas_.begin() + i1);
  return RoughPath(first_level_.subrange(i0, i1), std::move(areas), alpha_);
}

SecondLevelTable::SecondLevelTable(int n_steps, int dim)
    : n_steps_(n_steps), dim_(dim) {
  entries_.assign(static_cast<std::size_t>(n_steps) * (n_steps + 1) / 2,
                  Eigen::MatrixXd::Zero(dim, dim));
}

std::size_t SecondLevelTable::index(int i, int j) const {
  if (i < 0 || j > n_steps_ || i >= j) {
    throw std::out_of_range("SecondLevelTable: need 0 <= i < j <= n");
  }
  // Entries with left index i occupy a block of length (n - i).
  const std::size_t base =
      static_cast<std::size_t>(i) * (2 * n_steps_ - i + 1) / 2;
  return base + static_cast<std::size_t>(j - i - 1);
}

SecondLevelTable full_table(const RoughPath& rough) {
  const int n = rough.grid().n_steps();
  const int d = rough.dim();
  SecondLevelTable table(n, d);
  const auto& v = rough.first_level().values();
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    for (int k = i; k < n; ++k) {
      acc += rough.step_areas()[k];
      if (k > i) {
        acc.noalias() +=
            (v.col(k) - v.col(i)) * (v.col(k + 1) - v.col(k)).transpose();
      }
      table.at(i, k + 1) = acc;
    }
  }
  return table;
}

double second_level_norm(const RoughPath& rough, double alpha, double window) {
  if (!(alpha > 1.0 / 3.0) || alpha > 0.5) {
    throw std::invalid_argument("second_level_norm: alpha must lie in (1/3, 1/2]");
  }
  const int n = rough.grid().n_steps();
  const double h = rough.grid().step();
  const auto& v = rough.first_level().values();
  const int d = rough.dim();
  double best = 0.0;
  // Incremental Chen fold per left endpoint keeps the sweep at O(n^2 d^2).
  Eigen::MatrixXd acc(d, d);
  for (int i = 0; i < n; ++i) {
    acc.setZero();
    for (int k = i; k < n; ++k) {
      acc += rough.step_areas()[k];
      if (k > i) {
        acc.noalias() +=
            (v.col(k) - v.col(i)) * (v.col(k + 1) - v.col(k)).transpose();
      }
      const double gap = h * (k + 1 - i);
      if (window > 0.0 && gap > window) break;
      best = std::max(best, acc.norm() / std::pow(gap, 2.0 * alpha));
    }
  }
  return best;
}

HoelderReport hoelder_report(const RoughPath& rough, double alpha, double window) {
  HoelderReport rep;
  rep.alpha = alpha;
  rep.x_norm = holder_norm(rough.first_level(), alpha);
  rep.xx_norm = second_level_norm(rough, alpha);
  rep.combined = rep.x_norm + rep.xx_norm;
  if (window > 0.0) {
    rep.window = window;
    rep.x_norm_windowed = holder_norm(rough.first_level(), alpha, window);
    rep.xx_norm_windowed = second_level_norm(rough, alpha, window);
    rep.combined_windowed = rep.x_norm_windowed + rep.xx_norm_windowed;
  } else {
    rep.window = rough.grid().horizon();
    rep.x_norm_windowed = rep.x_norm;
    rep.xx_norm_windowed = rep.xx_norm;
    rep.combined_windowed = rep.combined;
  }
  return rep;
}

double chen_defect(const Path& first_level, const SecondLevelTable& table,
                   int s, int u, int t) {
  if (s > u || u > t) {
    throw std::invalid_argument("chen_defect: need s <= u <= t");
  }
  const int d = first_level.dim();
  Eigen::MatrixXd defect = Eigen::MatrixXd::Zero(d, d);
  if (s < t) defect = table.at(s, t);
  if (s < u) defect -= table.at(s, u);
  if (u < t) defect -= table.at(u, t);
  defect.noalias() -= first_level.increment(s, u) * first_level.increment(u, t).transpose();
  return defect.norm();
}

Eigen::MatrixXd geometric_defect_tensor(const RoughPath& rough, int i, int j) {
  Eigen::MatrixXd xx = rough.chen_area(i, j);
  Eigen::VectorXd inc = rough.increment(i, j);
  return 0.5 * (xx + xx.transpose()) - 0.5 * inc * inc.transpose();
}

double geometric_defect(const RoughPath& rough, int i, int j) {
  return geometric_defect_tensor(rough, i, j).norm();
}

double max_geometric_defect(const RoughPath& rough) {
  const int n = rough.grid().n_steps();
  const auto& v = rough.first_level().values();
  const int d = rough.dim();
  double worst = 0.0;
  Eigen::MatrixXd acc(d, d);
  for (int i = 0; i < n; ++i) {
    acc.setZero();
    for (int k = i; k < n; ++k) {
      acc += rough.step_areas()[k];
      if (k > i) {
        acc.noalias() +=
            (v.col(k) - v.col(i)) * (v.col(k + 1) - v.col(k)).transpose();
      }
      Eigen::VectorXd inc = v.col(k + 1) - v.col(i);
      double defect =
          (0.5 * (acc + acc.transpose()) - 0.5 * inc * inc.transpose()).norm();
      worst = std::max(worst, defect);
    }
  }
  return worst;
}

double max_chen_defect(const RoughPath& rough) {
  const int n = rough.grid().n_steps();
  const int d = rough.dim();
  SecondLevelTable table = full_table(rough);
  const auto& v = rough.first_level().values();
  double worst = 0.0;
  Eigen::MatrixXd defect(d, d);
  for (int s = 0; s < n; ++s) {
    for (int u = s + 1; u < n; ++u) {
      const Eigen::VectorXd left = v.col(u) - v.col(s);
      for (int t = u + 1; t <= n; ++t) {
        defect = table.at(s, t) - table.at(s, u) - table.at(u, t);
        defect.noalias() -= left * (v.col(t) - v.col(u)).transpose();
        worst = std::max(worst, defect.norm());
      }
    }
  }
  return worst;
}

RoughPath enhance_piecewise_linear(const Path& path, double alpha) {
  const int n = path.grid().n_steps();
  std::vector<Eigen::MatrixXd> areas;
  areas.reserve(n);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd inc = path.increment(k, k + 1);
    areas.push_back(0.5 * inc * inc.transpose());
  }
  return RoughPath(path, std::move(areas), alpha);
}

ScalingBound scaling_bound_check(const RoughPath& rough, double alpha, double beta) {
  if (!(alpha > 1.0 / 3.0) || !(alpha < beta) || beta > 0.5) {
    throw std::invalid_argument(
        "scaling_bound_check: need 1/3 < alpha < beta <= 1/2");
  }
  const double horizon = rough.grid().horizon();
  ScalingBound out;
  out.lhs = holder_norm(rough.first_level(), alpha) + second_level_norm(rough, alpha);
  out.rhs = holder_norm(rough.first_level(), beta) * std::pow(horizon, beta - alpha) +
            second_level_norm(rough, beta) * std::pow(horizon, 2.0 * (beta - alpha));
  out.slack = out.rhs - out.lhs;
  out.holds = out.slack >= -1e-12;
  return out;
}

}  // namespace roughmild
