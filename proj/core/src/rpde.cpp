#include "roughmild/rpde.hpp"

#include <cmath>
#include <stdexcept>

#include "roughmild/gubinelli.hpp"

namespace roughmild {

namespace {

/// Controlled-path norm of the difference of two iterates over a window:
/// |D_0| + |D'_0| + ||D'||_alpha + ||R^D||_{2 alpha}.
double iterate_distance(const ControlledPath& a, const ControlledPath& b) {
  ControlledPath diff = a.difference(b);
  ControlledNorms norms = controlled_norms(diff);
  return norms.full;
}

}  // namespace

ControlledPath phi_map(const SemigroupTable& table, const CoefficientField& field,
                       const Eigen::VectorXd& xi, const ControlledPath& cp,
                       double t_offset, QuadratureRule rule) {
  if (cp.role() != PathRole::State) {
    throw std::invalid_argument("phi_map: iterate must be state-valued");
  }
  const Grid& grid = cp.grid();
  const int points = grid.n_points();
  const int m = field.state_dim;

  // Drift values f0(t, Y_t) along the window, absolute time.
  Eigen::MatrixXd drift(m, points);
  for (int i = 0; i < points; ++i) {
    drift.col(i) = field.eval_f0(t_offset + grid.time(i), cp.value(i).col(0));
  }

  // Diffusion composition with absolute-time evaluation.
  ControlledPath f_of_y = [&] {
    std::vector<Eigen::MatrixXd> values(points);
    std::vector<Tensor3> derivs(points);
    for (int i = 0; i < points; ++i) {
      const double t = t_offset + grid.time(i);
      const Eigen::VectorXd state = cp.value(i).col(0);
      values[i] = field.eval_f(t, state);
      const Tensor3 df = field.eval_df(t, state);
      Tensor3 deriv(field.state_dim, field.driver_dim, cp.driver_dim());
      for (int a = 0; a < cp.driver_dim(); ++a) {
        deriv.set_slice(a, df.apply(cp.derivative(i).slice(a).col(0)));
      }
      derivs[i] = std::move(deriv);
    }
    return ControlledPath(cp.reference_ptr(), std::move(values), std::move(derivs),
                          PathRole::Operator);
  }();

  std::vector<Eigen::MatrixXd> values(points);
  std::vector<Tensor3> derivs(points);
  for (int j = 0; j < points; ++j) {
    Eigen::VectorXd v = table.apply(j, xi);
    v += regular_convolution(table, drift, j, rule);
    v += rough_convolution(table, f_of_y, j);
    values[j] = v;
    derivs[j] = Tensor3::from_flat(m, 1, f_of_y.value(j));
  }
  return ControlledPath(cp.reference_ptr(), std::move(values), std::move(derivs),
                        PathRole::State);
}

WindowResult solve_window(const SemigroupTable& table, const CoefficientField& field,
                          const Eigen::VectorXd& xi,
                          const std::shared_ptr<const RoughPath>& window_rough,
                          double t_offset, const SolveConfig& config) {
  WindowResult result;
  ControlledPath iterate = [&] {
    // Constant initial iterate xi with derivative f(t, xi); this is the
    // simplest admissible point of the fixed-point ball.
    const Grid& grid = window_rough->grid();
    const int points = grid.n_points();
    std::vector<Eigen::MatrixXd> values(points, xi);
    std::vector<Tensor3> derivs(points);
    for (int i = 0; i < points; ++i) {
      derivs[i] = Tensor3::from_flat(
          static_cast<int>(xi.size()), 1,
          field.eval_f(t_offset + grid.time(i), xi));
    }
    return ControlledPath(window_rough, std::move(values), std::move(derivs),
                          PathRole::State);
  }();

  int bad_ratio_streak = 0;
  double prev_residual = -1.0;
  for (int iter = 0; iter < config.max_picard_iters; ++iter) {
    ControlledPath next =
        phi_map(table, field, xi, iterate, t_offset, config.drift_quadrature);
    const double residual = iterate_distance(next, iterate);
    result.info.residuals.push_back(residual);
    ControlledNorms norms = controlled_norms(next);
    if (norms.seminorm > 1.0) ++result.ball_violations;
    iterate = std::move(next);
    if (!std::isfinite(residual)) break;
    if (residual < config.picard_tol) {
      result.info.accepted = true;
      ControlledPath once_more =
          phi_map(table, field, xi, iterate, t_offset, config.drift_quadrature);
      result.info.fixed_point_residual = iterate_distance(once_more, iterate);
      result.path = std::move(iterate);
      return result;
    }
    if (prev_residual >= 0.0) {
      const double ratio = residual / prev_residual;
      bad_ratio_streak = ratio > config.contraction_target ? bad_ratio_streak + 1 : 0;
      if (bad_ratio_streak >= 3) break;  // window too long to contract
    }
    prev_residual = residual;
  }
  result.info.accepted = false;
  return result;
}

SolveReport solve_global(const SemigroupTable& table, const CoefficientField& field,
                         const std::shared_ptr<const RoughPath>& driver,
                         const Eigen::VectorXd& xi, const SolveConfig& config) {
  const Grid& grid = driver->grid();
  const int n = grid.n_steps();
  SolveReport report;
  report.xi_graph2 = table.graph_norm(xi, 2);

  int window = std::max(config.min_window_steps,
                        std::min(n, static_cast<int>(std::lround(
                                        config.initial_window * n))));
  int cursor = 0;
  Eigen::VectorXd eta = xi;

  std::vector<ControlledPath> pieces;
  while (cursor < n) {
    const int len = std::min(window, n - cursor);
    auto piece_rough = std::make_shared<RoughPath>(driver->subrange(cursor, cursor + len));
    WindowResult attempt = solve_window(table, field, eta, piece_rough,
                                        grid.time(cursor), config);
    attempt.info.begin = cursor;
    attempt.info.end = cursor + len;
    report.ball_violations += attempt.ball_violations;
    report.windows.push_back(attempt.info);
    if (attempt.info.accepted) {
      eta = attempt.path->value(attempt.path->grid().n_steps()).col(0);
      pieces.push_back(std::move(*attempt.path));
      cursor += len;
      window = std::min(n, len * config.window_growth_cap);
    } else {
      if (len <= config.min_window_steps) {
        report.converged = false;
        report.failure = "window shrunk to " + std::to_string(len) +
                         " step(s) without contraction";
        return report;
      }
      window = std::max(config.min_window_steps, len / 2);
    }
  }

  // Concatenate the accepted pieces over the full grid.
  std::vector<Eigen::MatrixXd> values(n + 1);
  std::vector<Tensor3> derivs(n + 1);
  {
    int at = 0;
    for (const auto& piece : pieces) {
      const int len = piece.grid().n_steps();
      for (int i = (at == 0 ? 0 : 1); i <= len; ++i) {
        values[at + i] = piece.value(i);
        derivs[at + i] = piece.derivative(i);
      }
      at += len;
    }
  }
  report.solution =
      ControlledPath(driver, std::move(values), std::move(derivs), PathRole::State);
  report.converged = true;

  // Global fixed-point diagnostics on the concatenated path.
  ControlledPath phi_all = phi_map(table, field, xi, *report.solution, 0.0,
                                   config.drift_quadrature);
  double mild = 0.0;
  for (int i = 0; i <= n; ++i) {
    mild = std::max(mild, (phi_all.value(i) - report.solution->value(i)).norm());
  }
  report.mild_residual = mild;
  if (config.compute_strong_residual) {
    report.strong_residual = strong_residual(table, field, *report.solution);
  }
  double sup = 0.0;
  for (int i = 0; i <= n; ++i) {
    sup = std::max(sup, report.solution->value(i).norm());
  }
  report.apriori_sup = sup;
  report.norms = controlled_norms(*report.solution);
  return report;
}

double strong_residual(const SemigroupTable& table, const CoefficientField& field,
                       const ControlledPath& solution) {
  const Grid& grid = solution.grid();
  const int n = grid.n_steps();
  const double h = grid.step();
  const Eigen::VectorXd xi = solution.value(0).col(0);

  // Flat rough integrand (f(Y), Df(Y) Y') over the solution.
  ControlledPath f_of_y = compose_smooth(field, solution);

  double worst = 0.0;
  Eigen::VectorXd drift_acc = Eigen::VectorXd::Zero(xi.size());
  Eigen::VectorXd rough_acc = Eigen::VectorXd::Zero(xi.size());
  const auto& areas = solution.reference().step_areas();
  for (int j = 1; j <= n; ++j) {
    const int k = j - 1;
    const double t = grid.time(k);
    drift_acc += (table.generator() * solution.value(k).col(0) +
                  field.eval_f0(t, solution.value(k).col(0))) *
                 h;
    rough_acc.noalias() += f_of_y.value(k) * solution.reference().increment(k, k + 1);
    rough_acc += f_of_y.derivative(k).contract_pair(areas[k]);
    const Eigen::VectorXd strong_side = xi + drift_acc + rough_acc;
    worst = std::max(worst, (solution.value(j).col(0) - strong_side).norm());
  }
  return worst;
}

bool apriori_check(const SolveReport& report, std::optional<double> bound_k) {
  if (!std::isfinite(report.apriori_sup)) return false;
  if (bound_k) return report.apriori_sup <= *bound_k;
  return true;
}

}  // namespace roughmild
