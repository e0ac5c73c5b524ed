#include "roughmild/presets.hpp"

#include <cmath>
#include <stdexcept>

#include "roughmild/semigroup.hpp"

namespace roughmild {

namespace {

/// Dirichlet eigenvector shapes of the discrete Laplacian, used as the
/// spatial footprint of the noise modes.
Eigen::MatrixXd sine_mode_matrix(int m, int d) {
  Eigen::MatrixXd b(m, d);
  const double norm = std::sqrt(2.0 / (m + 1));
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < d; ++k) {
      b(i, k) = norm * std::sin((k + 1) * M_PI * (i + 1) / (m + 1));
    }
  }
  return b;
}

CoefficientField linear_scalar_field(double noise_scale) {
  CoefficientField field;
  field.state_dim = 1;
  field.driver_dim = 1;
  field.f0 = [](double, const Eigen::VectorXd& y) {
    return Eigen::VectorXd::Zero(y.size()).eval();
  };
  field.f = [noise_scale](double, const Eigen::VectorXd& y) {
    Eigen::MatrixXd out(1, 1);
    out(0, 0) = noise_scale * y(0);
    return out;
  };
  field.df = [noise_scale](double, const Eigen::VectorXd&) {
    Tensor3 df(1, 1, 1);
    Eigen::MatrixXd slice(1, 1);
    slice(0, 0) = noise_scale;
    df.set_slice(0, slice);
    return df;
  };
  field.lip_f0 = 0.0;
  field.cb_f = std::abs(noise_scale);
  field.bounded = false;  // f(y) = y is outside C_b; permitted for the oracle
  return field;
}

CoefficientField heat_field(int m, int d, double noise_scale, bool multiplicative) {
  CoefficientField field;
  field.state_dim = m;
  field.driver_dim = d;
  field.f0 = [](double, const Eigen::VectorXd& y) {
    return y.array().tanh().matrix().eval();
  };
  const Eigen::MatrixXd modes = noise_scale * sine_mode_matrix(m, d);
  if (multiplicative) {
    field.f = [modes](double, const Eigen::VectorXd& y) {
      return (y.array().sin().matrix().asDiagonal() * modes).eval();
    };
    field.df = [modes, m, d](double, const Eigen::VectorXd& y) {
      Tensor3 df(m, d, m);
      for (int j = 0; j < m; ++j) {
        Eigen::MatrixXd slice = Eigen::MatrixXd::Zero(m, d);
        slice.row(j) = std::cos(y(j)) * modes.row(j);
        df.set_slice(j, slice);
      }
      return df;
    };
  } else {
    field.f = [modes](double, const Eigen::VectorXd&) { return modes; };
    field.df = [m, d](double, const Eigen::VectorXd&) { return Tensor3(m, d, m); };
  }
  field.lip_f0 = 1.0;
  field.cb_f = noise_scale;
  return field;
}

CoefficientField rode_field(double noise_scale) {
  CoefficientField field;
  field.state_dim = 2;
  field.driver_dim = 2;
  field.f0 = [](double, const Eigen::VectorXd& y) {
    return (0.5 * y.array().tanh()).matrix().eval();
  };
  field.f = [noise_scale](double, const Eigen::VectorXd& y) {
    Eigen::MatrixXd out(2, 2);
    out << std::sin(y(0)), std::cos(y(1)),
           std::cos(y(0)), std::sin(y(1));
    return (noise_scale * out).eval();
  };
  field.df = [noise_scale](double, const Eigen::VectorXd& y) {
    Tensor3 df(2, 2, 2);
    Eigen::MatrixXd s0 = Eigen::MatrixXd::Zero(2, 2);
    s0(0, 0) = std::cos(y(0));
    s0(1, 0) = -std::sin(y(0));
    Eigen::MatrixXd s1 = Eigen::MatrixXd::Zero(2, 2);
    s1(0, 1) = -std::sin(y(1));
    s1(1, 1) = std::cos(y(1));
    df.set_slice(0, (noise_scale * s0).eval());
    df.set_slice(1, (noise_scale * s1).eval());
    return df;
  };
  field.lip_f0 = 0.5;
  field.cb_f = noise_scale;
  return field;
}

}  // namespace

SolverPreset make_preset(const std::string& name, double noise_scale) {
  SolverPreset preset;
  preset.name = name;
  if (name == "linear_scalar_geometric") {
    if (noise_scale < 0.0) noise_scale = 1.0;
    preset.a_matrix = zero_generator(1);
    preset.field = linear_scalar_field(noise_scale);
    preset.xi = Eigen::VectorXd::Ones(1);
    preset.driver_kind = DriverKind::GeometricFbm;
    preset.hurst = 0.4;
    preset.spectrum = QSpectrum::polynomial(2.0, 1);
    preset.horizon = 0.25;
    preset.n_steps = 1024;
    preset.has_closed_form = noise_scale == 1.0;
  } else if (name == "heat_additive" || name == "heat_multiplicative") {
    if (noise_scale < 0.0) noise_scale = 0.25;
    const int m = 32;
    const int d = 4;
    preset.a_matrix = laplacian_1d(m, 1.0);
    preset.field = heat_field(m, d, noise_scale, name == "heat_multiplicative");
    preset.xi = sine_mode_matrix(m, 1).col(0);
    preset.driver_kind =
        name == "heat_additive" ? DriverKind::ItoWiener : DriverKind::GeometricFbm;
    preset.hurst = name == "heat_additive" ? 0.5 : 0.45;
    preset.spectrum = QSpectrum::polynomial(2.0, d);
    preset.horizon = 1.0;
    preset.n_steps = 512;
  } else if (name == "rode_flat") {
    if (noise_scale < 0.0) noise_scale = 0.5;
    preset.a_matrix = zero_generator(2);
    preset.field = rode_field(noise_scale);
    preset.xi = (Eigen::VectorXd(2) << 0.5, -0.3).finished();
    preset.driver_kind = DriverKind::GeometricFbm;
    preset.hurst = 0.4;
    preset.spectrum = QSpectrum::polynomial(2.0, 2);
    preset.horizon = 1.0;
    preset.n_steps = 256;
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return preset;
}

double linear_geometric_closed_form(double xi, const RoughPath& driver) {
  const int n = driver.grid().n_steps();
  return xi * std::exp(driver.increment(0, n)(0));
}

}  // namespace roughmild
