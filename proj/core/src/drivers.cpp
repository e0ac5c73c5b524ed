#include "roughmild/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "roughmild/gubinelli.hpp"
#include "roughmild/parallel.hpp"
#include "roughmild/rng.hpp"

namespace roughmild {

QSpectrum QSpectrum::polynomial(double decay, int d) {
  if (d < 1) throw std::invalid_argument("QSpectrum: need at least one mode");
  Eigen::VectorXd lambda(d);
  for (int k = 0; k < d; ++k) {
    lambda(k) = std::pow(static_cast<double>(k + 1), -decay);
  }
  lambda /= lambda.sum();
  return QSpectrum{lambda};
}

QSpectrum QSpectrum::parse(const std::string& text) {
  const std::string prefix = "polynomial(";
  if (text.rfind(prefix, 0) == 0) {
    if (text.back() != ')') {
      throw std::invalid_argument("spectrum: unterminated polynomial(...)");
    }
    const std::string body = text.substr(prefix.size(), text.size() - prefix.size() - 1);
    double decay = 2.0;
    int d = -1;
    std::istringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("spectrum: expected key=value in polynomial(...)");
      }
      std::string key = item.substr(0, eq);
      key.erase(remove_if(key.begin(), key.end(), ::isspace), key.end());
      const std::string value = item.substr(eq + 1);
      if (key == "decay") {
        decay = std::stod(value);
      } else if (key == "d") {
        d = std::stoi(value);
      } else {
        throw std::invalid_argument("spectrum: unknown parameter '" + key + "'");
      }
    }
    if (d < 1) throw std::invalid_argument("spectrum: polynomial needs d >= 1");
    return polynomial(decay, d);
  }
  // explicit list
  std::vector<double> entries;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    entries.push_back(std::stod(item));
  }
  if (entries.empty()) throw std::invalid_argument("spectrum: empty specification");
  Eigen::VectorXd values(static_cast<int>(entries.size()));
  for (std::size_t k = 0; k < entries.size(); ++k) {
    values(static_cast<int>(k)) = entries[k];
  }
  return from_list(std::move(values));
}

QSpectrum QSpectrum::from_list(Eigen::VectorXd values) {
  if (values.size() < 1) throw std::invalid_argument("QSpectrum: empty list");
  for (int k = 0; k < values.size(); ++k) {
    if (!(values(k) > 0.0)) {
      throw std::invalid_argument("QSpectrum: eigenvalues must be positive");
    }
    if (k > 0 && values(k) > values(k - 1)) {
      throw std::invalid_argument("QSpectrum: eigenvalues must be descending");
    }
  }
  return QSpectrum{std::move(values)};
}

std::string to_string(DriverKind kind) {
  switch (kind) {
    case DriverKind::ItoWiener: return "ito_wiener";
    case DriverKind::GeometricWiener: return "geometric_wiener";
    case DriverKind::GeometricFbm: return "geometric_fbm";
  }
  return "unknown";
}

DriverKind driver_kind_from_string(const std::string& name) {
  if (name == "ito_wiener") return DriverKind::ItoWiener;
  if (name == "geometric_wiener") return DriverKind::GeometricWiener;
  if (name == "geometric_fbm") return DriverKind::GeometricFbm;
  throw std::invalid_argument("unknown driver kind: " + name);
}

DriverSample sample_q_wiener(const QSpectrum& spectrum, const Grid& grid,
                             int fine_factor, std::uint64_t seed, double alpha) {
  if (fine_factor < 8 || (fine_factor & (fine_factor - 1)) != 0) {
    throw std::invalid_argument("sample_q_wiener: fine_factor must be a power of two >= 8");
  }
  const int d = spectrum.dim();
  const int n = grid.n_steps();
  const double h_fine = grid.step() / fine_factor;
  const double sigma_fine = std::sqrt(h_fine);
  const Eigen::VectorXd sqrt_lambda = spectrum.eigenvalues.cwiseSqrt();

  std::vector<CounterRng> component_rng;
  component_rng.reserve(d);
  for (int c = 0; c < d; ++c) {
    component_rng.emplace_back(CounterRng::derive_key(seed, static_cast<std::uint64_t>(c)));
  }

  Eigen::MatrixXd first = Eigen::MatrixXd::Zero(d, n + 1);
  std::vector<Eigen::MatrixXd> areas(n, Eigen::MatrixXd::Zero(d, d));
  Eigen::VectorXd running = Eigen::VectorXd::Zero(d);  // scaled path since t_i
  Eigen::VectorXd delta(d);
  for (int i = 0; i < n; ++i) {
    running.setZero();
    for (int u = 0; u < fine_factor; ++u) {
      for (int c = 0; c < d; ++c) {
        delta(c) = sqrt_lambda(c) * sigma_fine * component_rng[c].next_gaussian();
      }
      // Left-point double integral: the area picks up the path since t_i
      // *before* the current fine increment.
      areas[i].noalias() += running * delta.transpose();
      running += delta;
    }
    first.col(i + 1) = first.col(i) + running;
  }
  return DriverSample{RoughPath(Path(grid, std::move(first)), std::move(areas), alpha),
                      DriverKind::ItoWiener, 0.5, fine_factor, seed};
}

DriverSample sample_q_wiener_geometric(const QSpectrum& spectrum, const Grid& grid,
                                       std::uint64_t seed, double alpha) {
  const int d = spectrum.dim();
  const int n = grid.n_steps();
  const double sigma = std::sqrt(grid.step());
  const Eigen::VectorXd sqrt_lambda = spectrum.eigenvalues.cwiseSqrt();
  std::vector<CounterRng> component_rng;
  component_rng.reserve(d);
  for (int c = 0; c < d; ++c) {
    component_rng.emplace_back(CounterRng::derive_key(seed, static_cast<std::uint64_t>(c)));
  }
  Eigen::MatrixXd first = Eigen::MatrixXd::Zero(d, n + 1);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) {
      first(c, i + 1) = first(c, i) +
                        sqrt_lambda(c) * sigma * component_rng[c].next_gaussian();
    }
  }
  RoughPath rough = enhance_piecewise_linear(Path(grid, std::move(first)), alpha);
  return DriverSample{std::move(rough), DriverKind::GeometricWiener, 0.5, 1, seed};
}

double fbm_covariance(double s, double t, double hurst) {
  return 0.5 * (std::pow(s, 2.0 * hurst) + std::pow(t, 2.0 * hurst) -
                std::pow(std::abs(t - s), 2.0 * hurst));
}

DriverSample sample_q_fbm(const QSpectrum& spectrum, double hurst, const Grid& grid,
                          std::uint64_t seed, double alpha) {
  if (!(hurst > 1.0 / 3.0) || hurst > 0.5) {
    throw std::invalid_argument("sample_q_fbm: hurst must lie in (1/3, 1/2]");
  }
  if (alpha <= 0.0) alpha = std::max(hurst - 0.05, 1.0 / 3.0 + 1e-3);
  const int d = spectrum.dim();
  const int n = grid.n_steps();

  // Exact covariance of (X_{t_1}, ..., X_{t_n}); t_0 = 0 is pinned.
  Eigen::MatrixXd cov(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cov(i, j) = fbm_covariance(grid.time(i + 1), grid.time(j + 1), hurst);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    // Rounding can push the smallest eigenvalue below zero; jitter once.
    Eigen::MatrixXd jittered = cov;
    jittered.diagonal().array() += 1e-12;
    llt.compute(jittered);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("sample_q_fbm: covariance not positive definite");
    }
  }
  const Eigen::MatrixXd chol = llt.matrixL();

  Eigen::MatrixXd first = Eigen::MatrixXd::Zero(d, n + 1);
  Eigen::VectorXd z(n);
  for (int c = 0; c < d; ++c) {
    CounterRng rng(CounterRng::derive_key(seed, static_cast<std::uint64_t>(c)));
    for (int i = 0; i < n; ++i) z(i) = rng.next_gaussian();
    first.row(c).tail(n) =
        (std::sqrt(spectrum.eigenvalues(c)) * (chol * z)).transpose();
  }
  RoughPath rough = enhance_piecewise_linear(Path(grid, std::move(first)), alpha);
  return DriverSample{std::move(rough), DriverKind::GeometricFbm, hurst, 1, seed};
}

DriverSample coarsen(const DriverSample& sample, int factor) {
  const Grid& fine = sample.rough.grid();
  if (factor < 1 || fine.n_steps() % factor != 0) {
    throw std::invalid_argument("coarsen: factor must divide the step count");
  }
  if (factor == 1) return sample;
  const int n = fine.n_steps() / factor;
  const int d = sample.rough.dim();
  Grid coarse(fine.horizon(), n);
  Eigen::MatrixXd first(d, n + 1);
  std::vector<Eigen::MatrixXd> areas;
  areas.reserve(n);
  for (int i = 0; i <= n; ++i) {
    first.col(i) = sample.rough.first_level().value(i * factor);
  }
  for (int i = 0; i < n; ++i) {
    areas.push_back(sample.rough.chen_area(i * factor, (i + 1) * factor));
  }
  DriverSample out{RoughPath(Path(coarse, std::move(first)), std::move(areas),
                             sample.rough.alpha()),
                   sample.kind, sample.hurst, sample.fine_factor * factor,
                   sample.seed};
  return out;
}

MomentSlopes moment_scaling_probe(const QSpectrum& spectrum, const Grid& grid,
                                  int p, int n_seeds, std::uint64_t base_seed,
                                  int fine_factor) {
  if (p != 2 && p != 4) {
    throw std::invalid_argument("moment_scaling_probe: p must be 2 or 4");
  }
  const int n = grid.n_steps();
  std::vector<int> gaps;
  for (int g = 1; g <= n; g *= 2) gaps.push_back(g);

  std::vector<Eigen::ArrayXd> first_acc(static_cast<std::size_t>(n_seeds));
  std::vector<Eigen::ArrayXd> second_acc(static_cast<std::size_t>(n_seeds));
  parallel_for(static_cast<std::size_t>(n_seeds), [&](std::size_t s) {
    DriverSample sample = sample_q_wiener(spectrum, grid, fine_factor,
                                          base_seed + static_cast<std::uint64_t>(s));
    Eigen::ArrayXd fl(gaps.size()), sl(gaps.size());
    for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
      const int g = gaps[gi];
      fl(gi) = std::pow(sample.rough.increment(0, g).norm(), p);
      sl(gi) = std::pow(sample.rough.chen_area(0, g).norm(), p);
    }
    first_acc[s] = fl;
    second_acc[s] = sl;
  });

  MomentSlopes out;
  Eigen::ArrayXd first_mean = Eigen::ArrayXd::Zero(gaps.size());
  Eigen::ArrayXd second_mean = Eigen::ArrayXd::Zero(gaps.size());
  for (int s = 0; s < n_seeds; ++s) {
    first_mean += first_acc[s];
    second_mean += second_acc[s];
  }
  first_mean /= n_seeds;
  second_mean /= n_seeds;

  double sx = 0, sxx = 0, sy1 = 0, sy2 = 0, sxy1 = 0, sxy2 = 0;
  for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
    const double x = std::log(grid.step() * gaps[gi]);
    const double y1 = std::log(first_mean(gi));
    const double y2 = std::log(second_mean(gi));
    out.gaps.push_back(grid.step() * gaps[gi]);
    out.first_level_moment.push_back(first_mean(gi));
    out.second_level_moment.push_back(second_mean(gi));
    sx += x;
    sxx += x * x;
    sy1 += y1;
    sy2 += y2;
    sxy1 += x * y1;
    sxy2 += x * y2;
  }
  const double cnt = static_cast<double>(gaps.size());
  out.first_level_slope = (cnt * sxy1 - sx * sy1) / (cnt * sxx - sx * sx);
  out.second_level_slope = (cnt * sxy2 - sx * sy2) / (cnt * sxx - sx * sx);
  return out;
}

Eigen::VectorXd ito_integral_leftpoint(const std::vector<Eigen::MatrixXd>& y,
                                       const RoughPath& driver, int j) {
  if (static_cast<int>(y.size()) != driver.grid().n_points()) {
    throw std::invalid_argument("ito_integral_leftpoint: integrand not on the driver grid");
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(y.front().rows());
  for (int k = 0; k < j; ++k) {
    acc.noalias() += y[k] * driver.increment(k, k + 1);
  }
  return acc;
}

double coincidence_gap(const ControlledPath& cp) {
  const int n = cp.grid().n_steps();
  const Eigen::VectorXd rough = rough_integral(cp, 0, n);
  const Eigen::VectorXd ito = ito_integral_leftpoint(cp.values(), cp.reference(), n);
  return (rough - ito).norm();
}

}  // namespace roughmild
