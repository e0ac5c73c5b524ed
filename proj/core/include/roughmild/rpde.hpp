#pragma once

#include <optional>
#include <string>

#include "roughmild/convolution.hpp"
#include "roughmild/drivers.hpp"

namespace roughmild {

/// Tuning knobs of the fixed-point solver.  The working exponent alpha is
/// taken from the driver; tolerances are on the controlled-path norm of
/// successive Picard differences over the active window.
struct SolveConfig {
  double picard_tol = 1e-10;
  int max_picard_iters = 50;
  double initial_window = 1.0;     // fraction of the horizon
  int min_window_steps = 1;
  double contraction_target = 0.9; // reject after 3 consecutive ratios above
  int window_growth_cap = 2;       // doubling factor after an accepted window
  QuadratureRule drift_quadrature = QuadratureRule::LeftPoint;
  bool compute_strong_residual = true;
};

struct WindowInfo {
  int begin = 0;
  int end = 0;
  bool accepted = false;
  std::vector<double> residuals;     // per-iteration Picard residuals
  double fixed_point_residual = 0.0; // |||Phi(Y*) - Y*||| after acceptance
};

struct SolveReport {
  std::optional<ControlledPath> solution;  // Y with Y' = f(Y)
  std::vector<WindowInfo> windows;
  bool converged = false;
  std::string failure;
  double mild_residual = 0.0;
  double strong_residual = 0.0;
  double apriori_sup = 0.0;
  double xi_graph2 = 0.0;        // |xi|_{D(A^2)}, logged
  int ball_violations = 0;       // iterates leaving ||Y,Y'|| <= 1 (monitored)
  ControlledNorms norms;
};

/// One application of the mild fixed-point map on a window starting at
/// absolute time t_offset:
///   Phi(Y)_t = S_{t} xi + int S drift + rough convolution of f(Y),
/// with output derivative f(Y).  The input must be state-valued over the
/// window's rough path.
ControlledPath phi_map(const SemigroupTable& table, const CoefficientField& field,
                       const Eigen::VectorXd& xi, const ControlledPath& cp,
                       double t_offset,
                       QuadratureRule rule = QuadratureRule::LeftPoint);

struct WindowResult {
  std::optional<ControlledPath> path;
  WindowInfo info;
  int ball_violations = 0;
};

/// Picard iteration on one window.  The initial iterate is the constant
/// path xi with derivative f(t, xi); iteration stops at picard_tol or is
/// rejected when the residual ratio stays above contraction_target for
/// three consecutive steps (or on iteration budget).
WindowResult solve_window(const SemigroupTable& table, const CoefficientField& field,
                          const Eigen::VectorXd& xi,
                          const std::shared_ptr<const RoughPath>& window_rough,
                          double t_offset, const SolveConfig& config);

/// Greedy windowed solve over the whole grid: attempt the current window,
/// halve on rejection, re-double (capped) after success, restart each
/// window from the previous terminal value.  The report carries the
/// concatenated solution and the mild/strong residual diagnostics.
SolveReport solve_global(const SemigroupTable& table, const CoefficientField& field,
                         const std::shared_ptr<const RoughPath>& driver,
                         const Eigen::VectorXd& xi, const SolveConfig& config);

/// Deviation of the solution from the integrated strong form
///   xi + int (A Y + f0(s, Y_s)) ds + int f(Y) dX
/// with left-point drift quadrature and the flat rough integral.  Expected
/// to shrink with grid refinement; never asserted against a fixed constant.
double strong_residual(const SemigroupTable& table, const CoefficientField& field,
                       const ControlledPath& solution);

/// The a priori statement: the solution stays bounded.  When bound_k is
/// given, checks apriori_sup <= bound_k; otherwise just reports the sup.
bool apriori_check(const SolveReport& report,
                   std::optional<double> bound_k = std::nullopt);

}  // namespace roughmild
