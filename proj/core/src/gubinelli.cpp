#include "roughmild/gubinelli.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace roughmild {

namespace {

void require_operator_valued(const ControlledPath& cp, const char* who) {
  if (cp.role() != PathRole::Operator) {
    throw std::invalid_argument(std::string(who) +
                                ": integrand must be operator-valued");
  }
}

}  // namespace

Eigen::VectorXd rough_integral(const ControlledPath& cp, int i, int j) {
  require_operator_valued(cp, "rough_integral");
  if (i > j || i < 0 || j > cp.grid().n_steps()) {
    throw std::invalid_argument("rough_integral: bad index range");
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(cp.block_rows());
  const auto& areas = cp.reference().step_areas();
  const auto& x = cp.reference().first_level().values();
  // Per-step term assembled before accumulation; the rough convolution with
  // A == 0 follows the same order, which keeps the reduction bit-exact.
  Eigen::VectorXd term(cp.block_rows());
  for (int k = i; k < j; ++k) {
    term.noalias() = cp.value(k) * (x.col(k + 1) - x.col(k));
    cp.derivative(k).add_contract_pair(areas[k], term);
    acc += term;
  }
  return acc;
}

Eigen::VectorXd compensated_term(const ControlledPath& cp, int i, int j) {
  require_operator_valued(cp, "compensated_term");
  Eigen::VectorXd out = cp.value(i) * cp.reference().increment(i, j);
  out += cp.derivative(i).contract_pair(cp.reference().chen_area(i, j));
  return out;
}

SewingProbe sewing_rate_probe(const ControlledPath& cp, int i, int j, int levels) {
  require_operator_valued(cp, "sewing_rate_probe");
  const int len = j - i;
  if (len < 2 || (len & (len - 1)) != 0) {
    throw std::invalid_argument("sewing_rate_probe: range length must be a power of two");
  }
  if (levels < 1 || (1 << levels) > len) {
    throw std::invalid_argument("sewing_rate_probe: too many levels for the range");
  }
  const double h = cp.grid().step();
  SewingProbe probe;
  for (int level = 0; level <= levels; ++level) {
    const int pieces = 1 << level;
    const int stride = len / pieces;
    double worst = 0.0;
    double total = 0.0;
    for (int p = 0; p < pieces; ++p) {
      const int a = i + p * stride;
      const int b = a + stride;
      const double defect =
          (compensated_term(cp, a, b) - rough_integral(cp, a, b)).norm();
      worst = std::max(worst, defect);
      total += defect;
    }
    probe.scales.push_back(h * stride);
    probe.defects.push_back(worst);
    probe.mean_defects.push_back(total / pieces);
  }
  return probe;
}

namespace {

double tail_slope(const std::vector<double>& scales, const std::vector<double>& values,
                  int points, double floor) {
  const int total = static_cast<int>(scales.size());
  points = std::min(points, total);
  if (points < 2) return std::numeric_limits<double>::quiet_NaN();
  bool all_tiny = true;
  for (int k = total - points; k < total; ++k) {
    if (values[k] > floor) all_tiny = false;
  }
  if (all_tiny) return std::numeric_limits<double>::infinity();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = total - points; k < total; ++k) {
    const double x = std::log(scales[k]);
    const double y = std::log(std::max(values[k], floor));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = points;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

double SewingProbe::slope(int points, double floor) const {
  return tail_slope(scales, defects, points, floor);
}

double SewingProbe::mean_slope(int points, double floor) const {
  return tail_slope(scales, mean_defects, points, floor);
}

ControlledPath integral_as_controlled(const ControlledPath& cp) {
  require_operator_valued(cp, "integral_as_controlled");
  const int points = cp.grid().n_points();
  const int m = cp.block_rows();
  std::vector<Eigen::MatrixXd> values(points);
  std::vector<Tensor3> derivs(points);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
  const auto& areas = cp.reference().step_areas();
  const auto& x = cp.reference().first_level().values();
  Eigen::VectorXd term(m);
  for (int k = 0; k < points; ++k) {
    values[k] = acc;
    // New derivative is the integrand value, reshaped to column blocks.
    derivs[k] = Tensor3::from_flat(m, 1, cp.value(k));
    if (k < cp.grid().n_steps()) {
      term.noalias() = cp.value(k) * (x.col(k + 1) - x.col(k));
      cp.derivative(k).add_contract_pair(areas[k], term);
      acc += term;
    }
  }
  return ControlledPath(cp.reference_ptr(), std::move(values), std::move(derivs),
                        PathRole::State);
}

}  // namespace roughmild
