#pragma once

#include <string>

#include "roughmild/rpde.hpp"

namespace roughmild {

/// A fully specified solve scenario: generator, coefficients, initial
/// value, default driver and grid.  Presets are the CLI entry points into
/// the solver; every field can still be overridden through the config.
struct SolverPreset {
  std::string name;
  Eigen::MatrixXd a_matrix;
  CoefficientField field;
  Eigen::VectorXd xi;
  DriverKind driver_kind = DriverKind::GeometricFbm;
  double hurst = 0.4;
  QSpectrum spectrum;
  double horizon = 1.0;
  int n_steps = 512;
  int fine_factor = 8;
  /// Closed-form terminal value, when the scenario has one (scalar linear
  /// geometric equation): xi * exp(X_T).
  bool has_closed_form = false;
};

/// Known presets: linear_scalar_geometric, heat_additive,
/// heat_multiplicative, rode_flat.  noise_scale multiplies the diffusion
/// coefficient (0 turns the noise term off).
SolverPreset make_preset(const std::string& name, double noise_scale = -1.0);

/// Terminal value of the scalar linear geometric equation dY = Y dX.
double linear_geometric_closed_form(double xi, const RoughPath& driver);

}  // namespace roughmild
