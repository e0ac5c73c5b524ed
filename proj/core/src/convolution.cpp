#include "roughmild/convolution.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace roughmild {

namespace {

// Windows of a global solve run against a table cached for the full grid;
// a path is acceptable when it lives on a same-step prefix of that grid.
void check_prefix(const SemigroupTable& table, int cols, const char* who) {
  if (cols > table.grid().n_points()) {
    throw std::invalid_argument(std::string(who) + ": path not on the table grid");
  }
}

void check_prefix(const SemigroupTable& table, const Grid& grid, int cols,
                  const char* who) {
  const double step = table.grid().step();
  check_prefix(table, cols, who);
  if (std::abs(grid.step() - step) > 1e-12 * step) {
    throw std::invalid_argument(std::string(who) + ": path step differs from the table");
  }
}

// h * phi1(hA) = integral of exp(sA) over one step, via the block trick
// exp([[hA, hI], [0, 0]]) whose upper-right block is h phi1(hA).
Eigen::MatrixXd step_integral_weight(const SemigroupTable& table) {
  const int m = table.state_dim();
  const double h = table.grid().step();
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  block.topLeftCorner(m, m) = table.generator() * h;
  block.topRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m) * h;
  return block.exp().topRightCorner(m, m);
}

}  // namespace

Eigen::VectorXd regular_convolution(const SemigroupTable& table,
                                    const Eigen::MatrixXd& g, int j,
                                    QuadratureRule rule) {
  check_prefix(table, static_cast<int>(g.cols()), "regular_convolution");
  const double h = table.grid().step();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(g.rows());
  switch (rule) {
    case QuadratureRule::LeftPoint:
      for (int k = 0; k < j; ++k) {
        acc.noalias() += table.exp_at(j - k) * (g.col(k) * h);
      }
      break;
    case QuadratureRule::Trapezoid:
      for (int k = 0; k < j; ++k) {
        acc.noalias() +=
            table.exp_at(j - k) * (g.col(k) * (k == 0 ? 0.5 * h : h));
      }
      if (j > 0) acc.noalias() += g.col(j) * (0.5 * h);
      break;
    case QuadratureRule::SemigroupExact: {
      // Exact semigroup factor, integrand frozen at the left endpoint:
      // int_{t_k}^{t_{k+1}} S_{t_j - s} ds = S_{(j-k-1)h} * h phi1(hA).
      const Eigen::MatrixXd w = step_integral_weight(table);
      for (int k = 0; k < j; ++k) {
        acc.noalias() += table.exp_at(j - k - 1) * (w * g.col(k));
      }
      break;
    }
  }
  return acc;
}

Eigen::MatrixXd regular_convolution_path(const SemigroupTable& table,
                                         const Eigen::MatrixXd& g,
                                         QuadratureRule rule) {
  check_prefix(table, static_cast<int>(g.cols()), "regular_convolution_path");
  Eigen::MatrixXd out(g.rows(), g.cols());
  for (int j = 0; j < g.cols(); ++j) {
    out.col(j) = regular_convolution(table, g, j, rule);
  }
  return out;
}

Eigen::VectorXd rough_convolution(const SemigroupTable& table,
                                  const ControlledPath& cp, int j) {
  if (cp.role() != PathRole::Operator) {
    throw std::invalid_argument("rough_convolution: integrand must be operator-valued");
  }
  check_prefix(table, cp.grid(), cp.grid().n_points(), "rough_convolution");
  if (cp.block_rows() != table.state_dim()) {
    throw std::invalid_argument("rough_convolution: state dimension mismatch");
  }
  const auto& areas = cp.reference().step_areas();
  const auto& x = cp.reference().first_level().values();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(cp.block_rows());
  const bool flat = table.is_identity();
  Eigen::VectorXd term(cp.block_rows());
  for (int k = 0; k < j; ++k) {
    term.noalias() = cp.value(k) * (x.col(k + 1) - x.col(k));
    cp.derivative(k).add_contract_pair(areas[k], term);
    if (flat) {
      acc += term;
    } else {
      acc.noalias() += table.exp_at(j - k) * term;
    }
  }
  return acc;
}

ControlledPath rough_convolution_controlled(const SemigroupTable& table,
                                            const ControlledPath& cp) {
  const int points = cp.grid().n_points();
  const int m = cp.block_rows();
  std::vector<Eigen::MatrixXd> values(points);
  std::vector<Tensor3> derivs(points);
  for (int j = 0; j < points; ++j) {
    values[j] = rough_convolution(table, cp, j);
    derivs[j] = Tensor3::from_flat(m, 1, cp.value(j));
  }
  return ControlledPath(cp.reference_ptr(), std::move(values), std::move(derivs),
                        PathRole::State);
}

ConvolutionSplit convolution_decomposition_probe(const SemigroupTable& table,
                                                 const ControlledPath& cp, int i,
                                                 int j) {
  if (cp.role() != PathRole::Operator) {
    throw std::invalid_argument(
        "convolution_decomposition_probe: integrand must be operator-valued");
  }
  if (i > j) {
    throw std::invalid_argument("convolution_decomposition_probe: need i <= j");
  }
  const auto& areas = cp.reference().step_areas();
  const int m = cp.block_rows();
  ConvolutionSplit split;
  split.term1 = Eigen::VectorXd::Zero(m);
  split.term2 = Eigen::VectorXd::Zero(m);
  for (int k = i; k < j; ++k) {
    Eigen::VectorXd term = cp.value(k) * cp.reference().increment(k, k + 1);
    term += cp.derivative(k).contract_pair(areas[k]);
    split.term1.noalias() += table.exp_at(j - k) * term;
    split.term1 -= term;
  }
  for (int k = 0; k < i; ++k) {
    Eigen::VectorXd term = cp.value(k) * cp.reference().increment(k, k + 1);
    term += cp.derivative(k).contract_pair(areas[k]);
    split.term2.noalias() += table.exp_at(j - k) * term;
    split.term2.noalias() -= table.exp_at(i - k) * term;
  }
  return split;
}

}  // namespace roughmild
