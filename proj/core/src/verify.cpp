#include "roughmild/verify.hpp"

#include <cmath>
#include <fstream>

#include "roughmild/convolution.hpp"
#include "roughmild/gubinelli.hpp"
#include "roughmild/rng.hpp"
#include "roughmild/semigroup.hpp"
#include "roughmild/serialization.hpp"

namespace roughmild {

namespace {

constexpr double kStructuralTol = 1e-10;

CheckRow make_row(const std::string& suite, const std::string& check,
                  const std::string& instance, double lhs, double rhs) {
  CheckRow row;
  row.suite = suite;
  row.check_id = check;
  row.instance_id = instance;
  row.lhs = lhs;
  row.rhs = rhs;
  row.slack = rhs - lhs;
  row.pass = row.slack >= -1e-12;
  return row;
}

/// Deterministic piecewise-linear test path: a few random Fourier modes.
Path fourier_path(const Grid& grid, int dim, std::uint64_t seed) {
  CounterRng rng(CounterRng::derive_key(seed, 0xf0f0));
  Eigen::MatrixXd values(dim, grid.n_points());
  Eigen::MatrixXd amp(dim, 3), phase(dim, 3);
  for (int c = 0; c < dim; ++c) {
    for (int k = 0; k < 3; ++k) {
      amp(c, k) = rng.next_gaussian() * 0.5;
      phase(c, k) = rng.next_uniform() * 6.28318530717958647692;
    }
  }
  for (int i = 0; i < grid.n_points(); ++i) {
    const double t = grid.time(i);
    for (int c = 0; c < dim; ++c) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k) {
        v += amp(c, k) * std::sin((k + 1) * 6.28318530717958647692 * t / grid.horizon() + phase(c, k));
      }
      values(c, i) = v;
    }
  }
  return Path(grid, std::move(values));
}

std::vector<std::string> driver_tags(const Config& config) {
  auto tags = config.get_list("verify.drivers");
  if (tags.empty()) tags = {"pwl", "ito_wiener", "fbm0.4"};
  return tags;
}

}  // namespace

DriverSample make_verify_driver(const std::string& kind, const Grid& grid,
                                int driver_dim, std::uint64_t seed) {
  const QSpectrum spectrum = QSpectrum::polynomial(2.0, driver_dim);
  if (kind == "pwl") {
    return DriverSample{
        enhance_piecewise_linear(fourier_path(grid, driver_dim, seed), 0.45),
        DriverKind::GeometricWiener, 0.5, 1, seed};
  }
  if (kind == "ito_wiener") {
    return sample_q_wiener(spectrum, grid, 8, seed);
  }
  if (kind == "geometric_wiener") {
    return sample_q_wiener_geometric(spectrum, grid, seed);
  }
  if (kind.rfind("fbm", 0) == 0) {
    const double hurst = std::stod(kind.substr(3));
    return sample_q_fbm(spectrum, hurst, grid, seed);
  }
  throw std::invalid_argument("unknown verify driver tag: " + kind);
}

ControlledPath make_random_controlled_path(std::shared_ptr<const RoughPath> reference,
                                           int state_dim, std::uint64_t seed) {
  CounterRng rng(CounterRng::derive_key(seed, 0xc0117));
  const Grid& grid = reference->grid();
  const int points = grid.n_points();
  const int d = reference->dim();

  Eigen::MatrixXd linear(state_dim, d);
  Eigen::VectorXd trend_amp(state_dim), trend_freq(state_dim), base(state_dim);
  Eigen::VectorXd wave(state_dim);
  for (int r = 0; r < state_dim; ++r) {
    for (int c = 0; c < d; ++c) linear(r, c) = 0.7 * rng.next_gaussian();
    trend_amp(r) = 0.5 * rng.next_gaussian();
    trend_freq(r) = 1.0 + 2.0 * rng.next_uniform();
    base(r) = rng.next_gaussian();
    wave(r) = 0.5 + rng.next_uniform();
  }

  std::vector<Eigen::MatrixXd> values(points);
  std::vector<Tensor3> derivs(points);
  for (int i = 0; i < points; ++i) {
    const double t = grid.time(i);
    const Eigen::VectorXd x = reference->first_level().value(i);
    Eigen::VectorXd y(state_dim);
    Tensor3 deriv(state_dim, 1, d);
    Eigen::MatrixXd flat(state_dim, d);
    for (int r = 0; r < state_dim; ++r) {
      // smooth trend + linear image + componentwise sine of the driver
      double v = base(r) + trend_amp(r) * std::sin(trend_freq(r) * t);
      double sine = 0.0;
      for (int c = 0; c < d; ++c) sine += std::sin(wave(r) * x(c));
      y(r) = v + linear.row(r).dot(x) + 0.3 * sine;
      for (int c = 0; c < d; ++c) {
        flat(r, c) = linear(r, c) + 0.3 * wave(r) * std::cos(wave(r) * x(c));
      }
    }
    values[i] = y;
    deriv.flat() = flat;
    derivs[i] = std::move(deriv);
  }
  return ControlledPath(std::move(reference), std::move(values), std::move(derivs),
                        PathRole::State);
}

std::vector<std::string> default_verify_suites() {
  return {"chen", "geometric", "scaling", "norms", "semigroup", "sewing", "conv_split"};
}

Eigen::MatrixXd generator_from_config(const Config& config, const std::string& section) {
  const std::string kind = config.require_string(section + ".generator");
  const int size = config.get_int(section + ".size", 0);
  if (kind == "zero") {
    if (size < 1) throw std::runtime_error(section + ": zero generator needs size");
    return zero_generator(size);
  }
  if (kind == "laplacian1d") {
    if (size < 1) throw std::runtime_error(section + ": laplacian1d needs size");
    return laplacian_1d(size, config.get_double(section + ".spacing", 1.0));
  }
  if (kind == "diagonal") {
    const auto entries = config.get_list(section + ".diagonal");
    if (entries.empty()) {
      throw std::runtime_error(section + ": diagonal generator needs entries");
    }
    Eigen::VectorXd diag(static_cast<int>(entries.size()));
    for (std::size_t k = 0; k < entries.size(); ++k) {
      diag(static_cast<int>(k)) = std::stod(entries[k]);
    }
    return diagonal_generator(diag);
  }
  if (kind == "custom") {
    if (size < 1) throw std::runtime_error(section + ": custom generator needs size");
    const std::string path = config.require_string(section + ".matrix_file");
    std::ifstream in(path);
    if (!in) throw std::runtime_error(section + ": cannot open matrix file " + path);
    Eigen::MatrixXd a(size, size);
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        if (!(in >> a(r, c))) {
          throw std::runtime_error(section + ": matrix file too short");
        }
      }
    }
    return a;
  }
  throw std::runtime_error(section + ".generator must be laplacian1d|diagonal|zero|custom");
}

namespace {

std::vector<CheckRow> chen_suite(const Config& config) {
  std::vector<CheckRow> rows;
  const int n = config.get_int("verify.n_steps", 128);
  const int d = config.get_int("verify.driver_dim", 3);
  const int instances = config.get_int("verify.instances", 5);
  const std::uint64_t seed = config.get_u64("verify.seed", 42);
  Grid grid(config.get_double("verify.horizon", 1.0), n);

  for (const auto& tag : driver_tags(config)) {
    for (int inst = 0; inst < instances; ++inst) {
      DriverSample sample = make_verify_driver(tag, grid, d, seed + inst);
      rows.push_back(make_row("chen", "chen_defect", tag + "/" + std::to_string(inst),
                              max_chen_defect(sample.rough), kStructuralTol));
      const double assoc =
          (sample.rough.chen_area(0, n) - sample.rough.chen_area_bisect(0, n)).norm();
      rows.push_back(make_row("chen", "chen_associativity",
                              tag + "/" + std::to_string(inst), assoc, kStructuralTol));
    }
  }
  if (config.has("verify.driver_file")) {
    DriverFileInfo info;
    DriverSample sample =
        read_driver_file(config.require_string("verify.driver_file"), &info);
    const double defect = info.total_defect.value_or(0.0);
    rows.push_back(make_row("chen", "chen_defect", "file", defect, kStructuralTol));
    if (sample.kind != DriverKind::ItoWiener) {
      rows.push_back(make_row("chen", "geometric_defect", "file",
                              max_geometric_defect(sample.rough), kStructuralTol));
    }
  }
  return rows;
}

std::vector<CheckRow> geometric_suite(const Config& config) {
  std::vector<CheckRow> rows;
  const int n = config.get_int("verify.n_steps", 128);
  const int d = config.get_int("verify.driver_dim", 3);
  const int instances = config.get_int("verify.instances", 5);
  const std::uint64_t seed = config.get_u64("verify.seed", 42);
  Grid grid(config.get_double("verify.horizon", 1.0), n);
  for (const auto& tag : driver_tags(config)) {
    if (tag == "ito_wiener") continue;  // not geometric by design
    for (int inst = 0; inst < instances; ++inst) {
      DriverSample sample = make_verify_driver(tag, grid, d, seed + inst);
      rows.push_back(make_row("geometric", "geometric_defect",
                              tag + "/" + std::to_string(inst),
                              max_geometric_defect(sample.rough), kStructuralTol));
    }
  }
  return rows;
}

std::vector<CheckRow> scaling_suite(const Config& config) {
  std::vector<CheckRow> rows;
  const int n = config.get_int("verify.n_steps", 128);
  const int d = config.get_int("verify.driver_dim", 3);
  const int instances = config.get_int("verify.instances", 10);
  const std::uint64_t seed = config.get_u64("verify.seed", 42);
  const double alpha = config.get_double("verify.scaling_alpha", 0.35);
  const double beta = config.get_double("verify.scaling_beta", 0.45);
  Grid grid(1.0, n);
  for (const auto& tag : driver_tags(config)) {
    for (int inst = 0; inst < instances; ++inst) {
      DriverSample sample = make_verify_driver(tag, grid, d, seed + 100 + inst);
      ScalingBound bound = scaling_bound_check(sample.rough, alpha, beta);
      rows.push_back(make_row("scaling", "scaling_bound",
                              tag + "/" + std::to_string(inst), bound.lhs, bound.rhs));
    }
  }
  return rows;
}

std::vector<CheckRow> norms_suite(const Config& config) {
  std::vector<CheckRow> rows;
  const int n = config.get_int("verify.n_steps", 64);
  const int d = config.get_int("verify.driver_dim", 2);
  const int instances = config.get_int("verify.instances", 20);
  const std::uint64_t seed = config.get_u64("verify.seed", 42);
  Grid grid(1.0, n);  // unit horizon keeps the constants at one
  for (int inst = 0; inst < instances; ++inst) {
    auto driver = std::make_shared<RoughPath>(
        make_verify_driver(inst % 2 ? "fbm0.4" : "pwl", grid, d, seed + 200 + inst)
            .rough);
    ControlledPath cp = make_random_controlled_path(driver, 3, seed + inst);
    ControlledNorms norms = controlled_norms(cp);
    HoelderReport hr = hoelder_report(*driver, driver->alpha());
    const std::string id = std::to_string(inst);
    rows.push_back(make_row("norms", "derivative_sup_bound", id, norms.y_prime_sup,
                            norms.pointed));
    rows.push_back(make_row("norms", "path_alpha_bound", id, norms.y_alpha,
                            norms.pointed * (hr.combined + 1.0)));
    rows.push_back(make_row("norms", "path_sup_bound", id, norms.y_sup,
                            norms.full * (hr.combined + 2.0)));

    // Linear image: norms scale at most by the operator norm of phi.
    CounterRng rng(CounterRng::derive_key(seed, 300 + inst));
    Eigen::MatrixXd phi(3, 3);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) phi(r, c) = rng.next_gaussian();
    ControlledPath mapped = compose_linear(phi, cp);
    ControlledNorms mapped_norms = controlled_norms(mapped);
    const double phi_norm = phi.jacobiSvd().singularValues()(0);
    rows.push_back(make_row("norms", "linear_composition_seminorm", id,
                            mapped_norms.seminorm, phi_norm * norms.seminorm));
    rows.push_back(make_row("norms", "linear_composition_full", id,
                            mapped_norms.full, phi_norm * norms.full));
  }
  return rows;
}

std::vector<CheckRow> semigroup_suite(const Config& config) {
  std::vector<CheckRow> rows;
  const std::uint64_t seed = config.get_u64("verify.seed", 42);
  const int n = config.get_int("verify.semigroup_steps", 32);
  Grid grid(1.0, n);
  struct Gen {
    std::string name;
    Eigen::MatrixXd a;
  };
  std::vector<Gen> generators = {
      {"zero", zero_generator(4)},
      {"diagonal", diagonal_generator((Eigen::VectorXd(4) << -1, -2, -0.5, 0.25).finished())},
      {"laplacian", laplacian_1d(8, 1.0)},
      {"nonnormal", nonnormal_test_matrix(6, 2.0)},
  };
  for (const auto& gen : generators) {
    SemigroupTable table = build_semigroup(gen.a, grid);
    rows.push_back(make_row("semigroup", "semigroup_law", gen.name,
                            semigroup_law_defect(table, 64, seed), kStructuralTol));
    CounterRng rng(CounterRng::derive_key(seed, 0x5e19));
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd y(gen.a.rows());
      for (int i = 0; i < y.size(); ++i) y(i) = rng.next_gaussian();
      RatioCheck orbit = orbit_lipschitz_check(table, y);
      rows.push_back(make_row("semigroup", "orbit_lipschitz",
                              gen.name + "/" + std::to_string(trial),
                              orbit.max_ratio, orbit.bound * (1.0 + 1e-8)));
      RatioCheck quad = quad_estimate_check(table, y);
      rows.push_back(make_row("semigroup", "quad_estimate",
                              gen.name + "/" + std::to_string(trial), quad.max_ratio,
                              quad.bound * (1.0 + 1e-8)));
    }
  }
  return rows;
}

std::vector<CheckRow> sewing_suite(const Config& config) {
  std::vector<CheckRow> rows;
  const std::uint64_t seed = config.get_u64("verify.seed", 42);
  const int n = config.get_int("verify.sewing_steps", 1024);
  const int instances = std::max(4, config.get_int("verify.instances", 4));
  const double hurst = 0.4;
  Grid grid(1.0, n);
  std::vector<SewingProbe> probes;
  double alpha = 0.35;
  for (int inst = 0; inst < instances; ++inst) {
    auto driver = std::make_shared<RoughPath>(
        sample_q_fbm(QSpectrum::polynomial(2.0, 1), hurst, grid, seed + 400 + inst).rough);
    // Y = sin(X), the classic composed integrand.
    const int points = grid.n_points();
    std::vector<Eigen::MatrixXd> values(points);
    std::vector<Tensor3> derivs(points);
    for (int i = 0; i < points; ++i) {
      const double x = driver->first_level().value(i)(0);
      values[i] = Eigen::MatrixXd::Constant(1, 1, std::sin(x));
      Tensor3 t(1, 1, 1);
      t.flat()(0, 0) = std::cos(x);
      derivs[i] = std::move(t);
    }
    ControlledPath cp(driver, std::move(values), std::move(derivs), PathRole::Operator);
    // levels down to 8-step windows; the tail then has 16..128 windows each
    probes.push_back(sewing_rate_probe(cp, 0, n, 7));
    alpha = driver->alpha();
  }
  // rate fit runs on the instance-pooled mean curve; the max curve stays a
  // uniform-bound diagnostic
  SewingProbe pooled;
  pooled.scales = probes[0].scales;
  pooled.mean_defects.assign(pooled.scales.size(), 0.0);
  pooled.defects.assign(pooled.scales.size(), 0.0);
  for (const auto& probe : probes) {
    for (std::size_t l = 0; l < pooled.scales.size(); ++l) {
      pooled.mean_defects[l] += probe.mean_defects[l] / probes.size();
      pooled.defects[l] = std::max(pooled.defects[l], probe.defects[l]);
    }
  }
  // lhs = required slope, rhs = fitted slope, pass when fitted >= required
  rows.push_back(make_row("sewing", "sewing_rate", "pooled", 3.0 * alpha - 0.1,
                          pooled.mean_slope(4)));
  return rows;
}

std::vector<CheckRow> conv_split_suite(const Config& config) {
  std::vector<CheckRow> rows;
  const std::uint64_t seed = config.get_u64("verify.seed", 42);
  const int n = config.get_int("verify.conv_steps", 256);
  const int instances = std::max(3, config.get_int("verify.instances", 5));
  Grid grid(1.0, n);
  const int d = 2;
  SemigroupTable table = build_semigroup(laplacian_1d(4, 1.0), grid);

  // Fit range stays where span * |A| is small; the |t-s| rate of the
  // second term is an asymptotic statement and bends once S_delta - Id
  // saturates.
  std::vector<double> spans;
  for (int span = 2; span <= std::min(16, n / 8); span *= 2) {
    spans.push_back(grid.step() * span);
  }
  std::vector<double> t1(spans.size(), 0.0), t2(spans.size(), 0.0);
  double alpha = 0.35;
  for (int inst = 0; inst < instances; ++inst) {
    auto driver = std::make_shared<RoughPath>(
        sample_q_fbm(QSpectrum::polynomial(2.0, d), 0.4, grid, seed + 500 + inst).rough);
    alpha = driver->alpha();
    ControlledPath base = make_random_controlled_path(driver, 4, seed + 600 + inst);
    // Operator-valued integrand: m x d blocks from a linear spread of the
    // state path.
    const int points = grid.n_points();
    std::vector<Eigen::MatrixXd> values(points);
    std::vector<Tensor3> derivs(points);
    for (int i = 0; i < points; ++i) {
      Eigen::MatrixXd block(4, d);
      for (int c = 0; c < d; ++c) block.col(c) = base.value(i) * (1.0 / (1 + c));
      values[i] = block;
      Tensor3 t(4, d, d);
      for (int a = 0; a < d; ++a) {
        Eigen::MatrixXd slice(4, d);
        for (int c = 0; c < d; ++c) {
          slice.col(c) = base.derivative(i).slice(a) * (1.0 / (1 + c));
        }
        t.set_slice(a, slice);
      }
      derivs[i] = std::move(t);
    }
    ControlledPath cp(driver, std::move(values), std::move(derivs),
                      PathRole::Operator);

    const std::vector<int> anchors = {n / 4, 3 * n / 8, n / 2, 5 * n / 8, 3 * n / 4};
    for (std::size_t si = 0; si < spans.size(); ++si) {
      const int span = static_cast<int>(std::lround(spans[si] / grid.step()));
      for (int i0 : anchors) {
        ConvolutionSplit split =
            convolution_decomposition_probe(table, cp, i0, i0 + span);
        t1[si] += split.term1.norm() / (instances * anchors.size());
        t2[si] += split.term2.norm() / (instances * anchors.size());
        if (i0 == n / 2) {
          const Eigen::VectorXd lhs = split.term1 + split.term2;
          const Eigen::VectorXd rhs = rough_convolution(table, cp, i0 + span) -
                                      rough_convolution(table, cp, i0) -
                                      rough_integral(cp, i0, i0 + span);
          rows.push_back(make_row(
              "conv_split", "split_identity",
              std::to_string(inst) + "/" + std::to_string(span),
              (lhs - rhs).norm(), kStructuralTol));
        }
      }
    }
  }
  auto fit_slope = [](const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n_pts = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double lx = std::log(x[k]);
      const double ly = std::log(std::max(y[k], 1e-300));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    return (n_pts * sxy - sx * sy) / (n_pts * sxx - sx * sx);
  };
  // rates fitted on the instance- and anchor-averaged curves
  rows.push_back(make_row("conv_split", "term1_rate", "pooled",
                          3.0 * alpha - 0.1, fit_slope(spans, t1)));
  rows.push_back(make_row("conv_split", "term2_rate", "pooled", 0.9,
                          fit_slope(spans, t2)));
  return rows;
}

}  // namespace

std::vector<CheckRow> run_verify_suite(const std::string& suite, const Config& config) {
  if (suite == "chen") return chen_suite(config);
  if (suite == "geometric") return geometric_suite(config);
  if (suite == "scaling") return scaling_suite(config);
  if (suite == "norms") return norms_suite(config);
  if (suite == "semigroup") return semigroup_suite(config);
  if (suite == "sewing") return sewing_suite(config);
  if (suite == "conv_split") return conv_split_suite(config);
  throw std::invalid_argument("unknown verify suite: " + suite);
}

}  // namespace roughmild
