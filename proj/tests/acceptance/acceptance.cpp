// Acceptance suite: one self-contained check per criterion, each printing a
// single PASS/FAIL line.  Run all with no arguments or a single one with
// --criterion <n>.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "roughmild/experiments.hpp"
#include "roughmild/gubinelli.hpp"
#include "roughmild/parallel.hpp"
#include "roughmild/presets.hpp"
#include "roughmild/rng.hpp"
#include "roughmild/verify.hpp"

using namespace roughmild;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]);
    const double ly = std::log(std::max(y[k], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Deterministic piecewise-linear driver built from a few Fourier modes.
DriverSample deterministic_pwl(const Grid& grid, int dim, std::uint64_t seed) {
  CounterRng rng(CounterRng::derive_key(seed, 0xdede));
  Eigen::MatrixXd values(dim, grid.n_points());
  for (int c = 0; c < dim; ++c) {
    const double a1 = rng.next_gaussian(), a2 = rng.next_gaussian();
    const double p1 = rng.next_uniform() * 6.283, p2 = rng.next_uniform() * 6.283;
    for (int i = 0; i < grid.n_points(); ++i) {
      const double t = grid.time(i) / grid.horizon();
      values(c, i) = 0.5 * a1 * std::sin(6.283 * t + p1) +
                     0.25 * a2 * std::sin(12.566 * t + p2);
    }
  }
  return DriverSample{enhance_piecewise_linear(Path(grid, std::move(values)), 0.45),
                      DriverKind::GeometricWiener, 0.5, 1, seed};
}

struct DriverSpec {
  std::string tag;
  std::function<DriverSample(const Grid&, std::uint64_t)> make;
};

std::vector<DriverSpec> acceptance_driver_kinds() {
  const QSpectrum spectrum = QSpectrum::polynomial(2.0, 4);
  std::vector<DriverSpec> kinds;
  kinds.push_back({"pwl", [](const Grid& g, std::uint64_t s) {
                     return deterministic_pwl(g, 4, s);
                   }});
  kinds.push_back({"ito_wiener", [spectrum](const Grid& g, std::uint64_t s) {
                     return sample_q_wiener(spectrum, g, 8, s);
                   }});
  for (double hurst : {0.35, 0.4, 0.45, 0.5}) {
    std::ostringstream tag;
    tag << "fbm" << hurst;
    kinds.push_back({tag.str(), [spectrum, hurst](const Grid& g, std::uint64_t s) {
                       return sample_q_fbm(spectrum, hurst, g, s);
                     }});
  }
  return kinds;
}

// 1. Chen's relation over all grid triples, 100 drivers per kind, N = 256.
Outcome criterion_chen() {
  Grid grid(1.0, 256);
  const auto kinds = acceptance_driver_kinds();
  const int per_kind = 100;
  std::vector<double> worst(kinds.size() * per_kind, 0.0);
  parallel_for(worst.size(), [&](std::size_t idx) {
    const auto& kind = kinds[idx / per_kind];
    DriverSample sample = kind.make(grid, 1000 + idx % per_kind);
    worst[idx] = max_chen_defect(sample.rough);
  });
  const double max_defect = *std::max_element(worst.begin(), worst.end());
  Outcome out;
  out.pass = max_defect <= 1e-10;
  std::ostringstream detail;
  detail << "max Chen defect " << max_defect << " over " << worst.size()
         << " drivers (tol 1e-10)";
  out.detail = detail.str();
  return out;
}

// 2. Weak geometricity for geometric kinds; Ito mean defect = -(t-s)Q/2.
Outcome criterion_geometric() {
  Grid grid(1.0, 256);
  const auto kinds = acceptance_driver_kinds();
  double max_defect = 0.0;
  for (const auto& kind : kinds) {
    if (kind.tag == "ito_wiener") continue;
    std::vector<double> worst(100, 0.0);
    parallel_for(worst.size(), [&](std::size_t s) {
      worst[s] = max_geometric_defect(kind.make(grid, 2000 + s).rough);
    });
    max_defect = std::max(max_defect, *std::max_element(worst.begin(), worst.end()));
  }

  const QSpectrum spectrum = QSpectrum::polynomial(2.0, 4);
  Grid mc_grid(1.0, 16);
  double max_z = 0.0;
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 16}, {4, 12}}) {
    ItoDefectCheck check =
        ito_mean_defect_check(spectrum, mc_grid, i, j, 8, 10000, 3000 + i);
    max_z = std::max(max_z, check.max_abs_z);
  }
  Outcome out;
  out.pass = max_defect <= 1e-10 && max_z <= 3.0;
  std::ostringstream detail;
  detail << "max geometric defect " << max_defect
         << " (tol 1e-10); Ito mean defect max |z| " << max_z
         << " (tol 3 SE, 10^4 seeds)";
  out.detail = detail.str();
  return out;
}

// 3. Cross-scale seminorm bound with (alpha, beta) = (0.35, 0.45), T = 1.
Outcome criterion_scaling() {
  Grid grid(1.0, 256);
  const auto kinds = acceptance_driver_kinds();
  const int per_kind = 100;
  std::vector<double> slack(kinds.size() * per_kind, 0.0);
  parallel_for(slack.size(), [&](std::size_t idx) {
    const auto& kind = kinds[idx / per_kind];
    DriverSample sample = kind.make(grid, 4000 + idx % per_kind);
    slack[idx] = scaling_bound_check(sample.rough, 0.35, 0.45).slack;
  });
  const double min_slack = *std::min_element(slack.begin(), slack.end());
  Outcome out;
  out.pass = min_slack >= -1e-12;
  std::ostringstream detail;
  detail << "min slack " << min_slack << " across " << slack.size() << " samples";
  out.detail = detail.str();
  return out;
}

// 4. Controlled-path norm inequalities with C = 1 at T <= 1, plus exact
// linear-composition bounds.
Outcome criterion_norms() {
  bool pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  const QSpectrum spectrum = QSpectrum::polynomial(2.0, 2);
  for (int inst = 0; inst < 100; ++inst) {
    Grid grid(1.0, 64);
    auto driver = std::make_shared<RoughPath>(
        inst % 2 == 0 ? sample_q_fbm(spectrum, 0.4, grid, 5000 + inst).rough
                      : sample_q_wiener_geometric(spectrum, grid, 5000 + inst).rough);
    ControlledPath cp = make_random_controlled_path(driver, 3, 500 + inst);
    ControlledNorms norms = controlled_norms(cp);
    HoelderReport hr = hoelder_report(*driver, driver->alpha());
    const double m1 = norms.pointed - norms.y_prime_sup;
    const double m2 = norms.pointed * (hr.combined + 1.0) - norms.y_alpha;
    const double m3 = norms.full * (hr.combined + 2.0) - norms.y_sup;
    worst_margin = std::min({worst_margin, m1, m2, m3});
    pass = pass && m1 >= -1e-12 && m2 >= -1e-12 && m3 >= -1e-12;

    CounterRng rng(CounterRng::derive_key(600 + inst, 2));
    Eigen::MatrixXd phi(3, 3);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) phi(r, c) = rng.next_gaussian();
    const double phi_norm = phi.jacobiSvd().singularValues()(0);
    ControlledNorms mapped = controlled_norms(compose_linear(phi, cp));
    pass = pass && mapped.seminorm <= phi_norm * norms.seminorm * (1.0 + 1e-12) &&
           mapped.pointed <= phi_norm * norms.pointed * (1.0 + 1e-12) &&
           mapped.full <= phi_norm * norms.full * (1.0 + 1e-12);
  }
  Outcome out;
  out.pass = pass;
  std::ostringstream detail;
  detail << "norm inequalities on 100 paths, worst margin " << worst_margin
         << "; linear composition bounds exact";
  out.detail = detail.str();
  return out;
}

// 5. Sewing rate: local compensated-increment defects decay at slope
// >= 3 alpha - 0.1 for f(X)-type integrands on fBm drivers.
Outcome criterion_sewing() {
  const QSpectrum spectrum = QSpectrum::polynomial(2.0, 1);
  const int n = 2048;
  const int levels = 7;
  Grid grid(1.0, n);
  bool pass = true;
  std::ostringstream detail;
  for (double hurst : {0.4, 0.45}) {
    const int seeds = 8;
    std::vector<SewingProbe> probes(seeds);
    parallel_for(seeds, [&](std::size_t s) {
      DriverSample sample = sample_q_fbm(spectrum, hurst, grid, 6000 + s);
      auto driver = std::make_shared<RoughPath>(sample.rough);
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
      ControlledPath cp(driver, std::move(values), std::move(derivs),
                        PathRole::Operator);
      probes[s] = sewing_rate_probe(cp, 0, n, levels);
    });
    // ensemble mean of the per-level mean defects, then the tail fit
    SewingProbe pooled;
    pooled.scales = probes[0].scales;
    pooled.mean_defects.assign(pooled.scales.size(), 0.0);
    pooled.defects.assign(pooled.scales.size(), 0.0);
    for (const auto& probe : probes) {
      for (std::size_t l = 0; l < pooled.scales.size(); ++l) {
        pooled.mean_defects[l] += probe.mean_defects[l] / seeds;
        pooled.defects[l] = std::max(pooled.defects[l], probe.defects[l]);
      }
    }
    const double slope = pooled.mean_slope(4);
    const double alpha = std::max(hurst - 0.05, 1.0 / 3.0 + 1e-3);
    pass = pass && slope >= 3.0 * alpha - 0.1;
    detail << "H=" << hurst << " pooled slope " << slope << " over " << seeds
           << " seeds (need >= " << 3.0 * alpha - 0.1 << "); ";
  }
  Outcome out;
  out.pass = pass;
  out.detail = detail.str();
  return out;
}

// 6. Semigroup quadruple estimate, exhaustive sweep on a 32-step grid.
Outcome criterion_quad() {
  Grid grid(1.0, 32);
  bool pass = true;
  double worst_fraction = 0.0;
  const std::vector<std::pair<std::string, Eigen::MatrixXd>> generators = {
      {"laplacian", laplacian_1d(8, 1.0)},
      {"nonnormal", nonnormal_test_matrix(8, 2.0)}};
  for (const auto& [name, a] : generators) {
    SemigroupTable table = build_semigroup(a, grid);
    CounterRng rng(CounterRng::derive_key(7000, name.size()));
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd y(8);
      for (int i = 0; i < 8; ++i) y(i) = rng.next_gaussian();
      RatioCheck check = quad_estimate_check(table, y, 1e-8);
      pass = pass && check.holds;
      worst_fraction = std::max(worst_fraction, check.max_ratio / check.bound);
    }
  }
  Outcome out;
  out.pass = pass;
  std::ostringstream detail;
  detail << "exhaustive quadruple sweep, worst ratio/bound = " << worst_fraction
         << " (needs <= 1 + 1e-8)";
  out.detail = detail.str();
  return out;
}

// 7. Convolution decomposition: split identity and both term rates.
Outcome criterion_conv_split() {
  const QSpectrum spectrum = QSpectrum::polynomial(2.0, 2);
  const int n = 512;
  Grid grid(1.0, n);
  SemigroupTable table = build_semigroup(laplacian_1d(4, 1.0), grid);
  bool pass = true;
  double worst_identity = 0.0;
  std::vector<double> t1_slopes, t2_slopes;
  double alpha = 0.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto driver = std::make_shared<RoughPath>(
        sample_q_fbm(spectrum, 0.4, grid, 8000 + seed).rough);
    alpha = driver->alpha();
    ControlledPath base = make_random_controlled_path(driver, 4, 800 + seed);
    const int points = grid.n_points();
    std::vector<Eigen::MatrixXd> values(points);
    std::vector<Tensor3> derivs(points);
    for (int i = 0; i < points; ++i) {
      Eigen::MatrixXd block(4, 2);
      for (int c = 0; c < 2; ++c) block.col(c) = base.value(i) / (1.0 + c);
      values[i] = block;
      Tensor3 t(4, 2, 2);
      for (int a = 0; a < 2; ++a) {
        Eigen::MatrixXd slice(4, 2);
        for (int c = 0; c < 2; ++c) {
          slice.col(c) = base.derivative(i).slice(a) / (1.0 + c);
        }
        t.set_slice(a, slice);
      }
      derivs[i] = std::move(t);
    }
    ControlledPath cp(driver, std::move(values), std::move(derivs),
                      PathRole::Operator);

    const int i0 = n / 2;
    std::vector<double> spans, t1, t2;
    for (int span = 4; span <= 32; span *= 2) {
      ConvolutionSplit split =
          convolution_decomposition_probe(table, cp, i0, i0 + span);
      const Eigen::VectorXd direct = rough_convolution(table, cp, i0 + span) -
                                     rough_convolution(table, cp, i0) -
                                     rough_integral(cp, i0, i0 + span);
      worst_identity =
          std::max(worst_identity, (split.term1 + split.term2 - direct).norm());
      spans.push_back(grid.step() * span);
      t1.push_back(split.term1.norm());
      t2.push_back(split.term2.norm());
    }
    const double s1 = fit_slope(spans, t1);
    const double s2 = fit_slope(spans, t2);
    t1_slopes.push_back(s1);
    t2_slopes.push_back(s2);
    pass = pass && s1 >= 3.0 * alpha - 0.1 && s2 >= 0.9;
  }
  pass = pass && worst_identity <= 1e-10;
  Outcome out;
  out.pass = pass;
  std::ostringstream detail;
  detail << "split identity defect " << worst_identity << " (tol 1e-10); term1 slopes";
  for (double s : t1_slopes) detail << " " << s;
  detail << " (need >= " << 3.0 * alpha - 0.1 << "); term2 slopes";
  for (double s : t2_slopes) detail << " " << s;
  detail << " (need >= 0.9)";
  out.detail = detail.str();
  return out;
}

// 8. Scalar linear geometric equation against its closed form.
Outcome criterion_linear_closed_form() {
  SolverPreset preset = make_preset("linear_scalar_geometric");
  Grid grid(preset.horizon, 1024);
  SemigroupTable table = build_semigroup(preset.a_matrix, grid);
  const int seeds = 20;
  std::vector<double> rel_errors(seeds, 0.0);
  std::vector<char> ok(seeds, 0);
  parallel_for(seeds, [&](std::size_t s) {
    auto driver = std::make_shared<RoughPath>(
        sample_q_fbm(preset.spectrum, preset.hurst, grid, 9000 + s).rough);
    SolveConfig config;
    config.picard_tol = 1e-12;
    config.max_picard_iters = 80;
    SolveReport report =
        solve_global(table, preset.field, driver, preset.xi, config);
    if (!report.converged) return;
    ok[s] = 1;
    const double exact = linear_geometric_closed_form(1.0, *driver);
    rel_errors[s] =
        std::abs(report.solution->value(1024)(0, 0) - exact) / std::abs(exact);
  });
  bool all_ok = true;
  for (char c : ok) all_ok = all_ok && c;
  const double med = median(rel_errors);
  Outcome out;
  out.pass = all_ok && med <= 1e-3;
  std::ostringstream detail;
  detail << "median relative error " << med
         << " over 20 seeds (tol 1e-3, N=1024, H=0.4, T=" << preset.horizon << ")";
  out.detail = detail.str();
  return out;
}

// Second-order exponential integrator for y' = A y + f0(t, y), symmetric A;
// the independent oracle for the zero-noise criteria.
Eigen::MatrixXd heun_oracle(const Eigen::MatrixXd& a, const CoefficientField& field,
                            const Eigen::VectorXd& xi, double horizon, int steps) {
  const int m = static_cast<int>(a.rows());
  const double h = horizon / steps;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const Eigen::VectorXd lambda = es.eigenvalues();
  const Eigen::MatrixXd v = es.eigenvectors();
  auto phi = [&](int order) {
    Eigen::VectorXd out(m);
    for (int i = 0; i < m; ++i) {
      const double z = lambda(i) * h;
      if (std::abs(z) < 1e-5) {
        out(i) = order == 0   ? std::exp(z)
                 : order == 1 ? 1.0 + z / 2.0 + z * z / 6.0
                              : 0.5 + z / 6.0 + z * z / 24.0;
      } else {
        out(i) = order == 0   ? std::exp(z)
                 : order == 1 ? (std::exp(z) - 1.0) / z
                              : (std::exp(z) - 1.0 - z) / (z * z);
      }
    }
    return (v * out.asDiagonal() * v.transpose()).eval();
  };
  const Eigen::MatrixXd e_h = phi(0);
  const Eigen::MatrixXd phi1 = phi(1);
  const Eigen::MatrixXd phi2 = phi(2);
  Eigen::MatrixXd out(m, steps + 1);
  Eigen::VectorXd y = xi;
  out.col(0) = y;
  for (int k = 0; k < steps; ++k) {
    const double t = h * k;
    const Eigen::VectorXd fk = field.eval_f0(t, y);
    const Eigen::VectorXd predictor = e_h * y + h * (phi1 * fk);
    const Eigen::VectorXd f_next = field.eval_f0(t + h, predictor);
    y = predictor + h * (phi2 * (f_next - fk));
    out.col(k + 1) = y;
  }
  return out;
}

// 9. Zero-noise heat equation against a 64x-finer exponential integrator.
Outcome criterion_zero_noise_heat() {
  SolverPreset preset = make_preset("heat_additive", 0.0);
  const int n = 512;
  Grid grid(1.0, n);
  auto driver = std::make_shared<RoughPath>(
      enhance_piecewise_linear(Path::zero(grid, 4), 0.45));
  SemigroupTable table = build_semigroup(preset.a_matrix, grid);
  SolveConfig config;
  config.picard_tol = 1e-12;
  config.max_picard_iters = 100;
  config.drift_quadrature = QuadratureRule::Trapezoid;
  SolveReport report = solve_global(table, preset.field, driver, preset.xi, config);
  Outcome out;
  if (!report.converged) {
    out.detail = "solver failed: " + report.failure;
    return out;
  }
  const Eigen::MatrixXd oracle =
      heun_oracle(preset.a_matrix, preset.field, preset.xi, 1.0, 64 * n);
  double sup = 0.0;
  for (int j = 0; j <= n; ++j) {
    sup = std::max(sup,
                   (report.solution->value(j).col(0) - oracle.col(64 * j)).norm());
  }
  out.pass = sup <= 1e-5;
  std::ostringstream detail;
  detail << "sup error " << sup
         << " vs 64x exponential integrator (tol 1e-5, m=32, N=512)";
  out.detail = detail.str();
  return out;
}

// 10. Fixed-point residuals on accepted windows and window concatenation.
Outcome criterion_picard() {
  SolverPreset preset = make_preset("heat_multiplicative", 0.15);
  Grid grid(0.5, 256);
  auto driver = std::make_shared<RoughPath>(
      sample_q_fbm(preset.spectrum, preset.hurst, grid, 10000).rough);
  SemigroupTable table = build_semigroup(preset.a_matrix, grid);
  SolveConfig config;
  config.picard_tol = 1e-12;
  config.max_picard_iters = 80;
  SolveReport one = solve_global(table, preset.field, driver, preset.xi, config);
  SolveConfig halved = config;
  halved.initial_window = 0.5;
  halved.window_growth_cap = 1;
  SolveReport two = solve_global(table, preset.field, driver, preset.xi, halved);
  Outcome out;
  if (!one.converged || !two.converged) {
    out.detail = "solver failed";
    return out;
  }
  double worst_fp = 0.0;
  for (const auto& info : one.windows) {
    if (info.accepted) worst_fp = std::max(worst_fp, info.fixed_point_residual);
  }
  for (const auto& info : two.windows) {
    if (info.accepted) worst_fp = std::max(worst_fp, info.fixed_point_residual);
  }
  double gap = 0.0;
  for (int j = 0; j <= 256; ++j) {
    gap = std::max(gap, (one.solution->value(j) - two.solution->value(j)).norm());
  }
  out.pass = worst_fp <= 1e-9 && gap <= 1e-8 && two.windows.size() >= 2;
  std::ostringstream detail;
  detail << "worst accepted-window fixed-point residual " << worst_fp
         << " (tol 1e-9); one- vs two-window gap " << gap << " (tol 1e-8)";
  out.detail = detail.str();
  return out;
}

// 11. Strong-form residual decays at first order under grid halving: the
// additive preset with the noise off (pure drift quadrature) and the
// multiplicative preset with noise on, refined along one coarsened driver.
Outcome criterion_mild_strong() {
  Outcome out;
  std::ostringstream detail;
  bool pass = true;
  {
    SolverPreset preset = make_preset("heat_additive", 0.0);
    std::vector<double> hs, residuals;
    for (int n : {128, 256, 512}) {
      Grid grid(1.0, n);
      auto driver = std::make_shared<RoughPath>(
          enhance_piecewise_linear(Path::zero(grid, 4), 0.45));
      SemigroupTable table = build_semigroup(preset.a_matrix, grid);
      SolveConfig config;
      config.picard_tol = 1e-12;
      config.max_picard_iters = 100;
      SolveReport report =
          solve_global(table, preset.field, driver, preset.xi, config);
      if (!report.converged) {
        out.detail = "solver failed on heat_additive";
        return out;
      }
      hs.push_back(grid.step());
      residuals.push_back(report.strong_residual);
    }
    const double slope = fit_slope(hs, residuals);
    pass = pass && slope >= 0.7 && slope <= 1.3;
    detail << "heat_additive (zero noise) slope " << slope << " (need 1 +- 0.3); ";
  }
  {
    SolverPreset preset = make_preset("heat_multiplicative", 0.15);
    Grid fine_grid(1.0, 512);
    DriverSample fine = sample_q_fbm(preset.spectrum, preset.hurst, fine_grid, 77);
    std::vector<double> hs, residuals;
    for (int n : {128, 256, 512}) {
      auto driver = std::make_shared<RoughPath>(coarsen(fine, 512 / n).rough);
      SemigroupTable table = build_semigroup(preset.a_matrix, driver->grid());
      SolveConfig config;
      config.picard_tol = 1e-12;
      config.max_picard_iters = 100;
      SolveReport report =
          solve_global(table, preset.field, driver, preset.xi, config);
      if (!report.converged) {
        out.detail = "solver failed on heat_multiplicative";
        return out;
      }
      hs.push_back(driver->grid().step());
      residuals.push_back(report.strong_residual);
    }
    const double slope = fit_slope(hs, residuals);
    pass = pass && slope >= 0.7 && slope <= 1.3;
    detail << "heat_multiplicative (with noise) slope " << slope
           << " (need 1 +- 0.3)";
  }
  out.pass = pass;
  out.detail = detail.str();
  return out;
}

// 12. Rough and Ito integrals coincide in the refinement limit; the
// geometric control keeps the Ito-Stratonovich correction.
Outcome criterion_coincidence() {
  const QSpectrum spectrum = QSpectrum::from_list(Eigen::VectorXd::Ones(1));
  ScalarField sine{[](double x) { return std::sin(x); },
                   [](double x) { return std::cos(x); }};
  CoincidenceResult result =
      coincidence_check(spectrum, 1.0, {256, 1024, 4096}, 8, 50, 11000, sine, 1.0);
  const bool decreasing = result.median_gap[0] > result.median_gap[1] &&
                          result.median_gap[1] > result.median_gap[2];
  const double final_rel = result.median_gap_rel.back();
  const double control = result.median_gap_geometric.back();
  Outcome out;
  out.pass =
      decreasing && final_rel <= 1e-2 && control > 10.0 * result.median_gap.back();
  std::ostringstream detail;
  detail << "median gaps";
  for (double g : result.median_gap) detail << " " << g;
  detail << "; final relative " << final_rel << " (tol 1e-2); geometric control "
         << control << " (non-vanishing)";
  out.detail = detail.str();
  return out;
}

// 13. Moment scaling of the Ito-enhanced Q-Wiener process at p = 2.
Outcome criterion_moments() {
  const QSpectrum spectrum = QSpectrum::polynomial(2.0, 4);
  Grid grid(1.0, 64);
  MomentSlopes slopes = moment_scaling_probe(spectrum, grid, 2, 10000, 12000);
  Outcome out;
  out.pass = std::abs(slopes.first_level_slope - 1.0) <= 0.1 &&
             std::abs(slopes.second_level_slope - 2.0) <= 0.15;
  std::ostringstream detail;
  detail << "first-level slope " << slopes.first_level_slope
         << " (1 +- 0.1); second-level slope " << slopes.second_level_slope
         << " (2 +- 0.15); 10^4 seeds";
  out.detail = detail.str();
  return out;
}

// 14. Empirical fBm covariance against the analytic kernel.
Outcome criterion_fbm_covariance() {
  const QSpectrum spectrum = QSpectrum::polynomial(2.0, 4);
  Grid grid(1.0, 8);
  CovarianceCheck frac = fbm_covariance_check(spectrum, 0.4, grid, 10000, 13000);
  CovarianceCheck brown = fbm_covariance_check(spectrum, 0.5, grid, 10000, 13500);
  double kernel_gap = 0.0;
  for (int i = 1; i <= 8; ++i) {
    for (int j = i; j <= 8; ++j) {
      kernel_gap = std::max(kernel_gap,
                            std::abs(fbm_covariance(grid.time(i), grid.time(j), 0.5) -
                                     std::min(grid.time(i), grid.time(j))));
    }
  }
  Outcome out;
  out.pass = frac.max_abs_z <= 5.0 && brown.max_abs_z <= 5.0 && kernel_gap <= 1e-14;
  std::ostringstream detail;
  detail << "H=0.4 max |z| " << frac.max_abs_z << ", H=0.5 max |z| "
         << brown.max_abs_z << " (tol 5 SE, 10^4 seeds); min(s,t) kernel gap "
         << kernel_gap;
  out.detail = detail.str();
  return out;
}

struct Criterion {
  int number;
  std::string name;
  std::function<Outcome()> run;
  double budget_seconds;  // nonzero where the criterion pins a runtime
};

std::vector<Criterion> all_criteria() {
  return {
      {1, "Chen's relation", criterion_chen, 120.0},
      {2, "weak geometricity", criterion_geometric, 0.0},
      {3, "scaling lemma", criterion_scaling, 0.0},
      {4, "controlled norm inequalities", criterion_norms, 0.0},
      {5, "sewing rate", criterion_sewing, 0.0},
      {6, "semigroup quadratic estimate", criterion_quad, 0.0},
      {7, "convolution decomposition", criterion_conv_split, 0.0},
      {8, "linear geometric closed form", criterion_linear_closed_form, 60.0},
      {9, "zero-noise mild solution", criterion_zero_noise_heat, 0.0},
      {10, "Picard fixed point and concatenation", criterion_picard, 0.0},
      {11, "mild-strong residual decay", criterion_mild_strong, 0.0},
      {12, "rough/Ito coincidence", criterion_coincidence, 0.0},
      {13, "moment scaling", criterion_moments, 0.0},
      {14, "fBm covariance", criterion_fbm_covariance, 0.0},
  };
}

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected = std::atoi(argv[i + 1]);
      ++i;
    } else if (std::strcmp(argv[i], "--help") == 0) {
      std::cout << "usage: acceptance [--criterion <1..14>]\n";
      return 0;
    }
  }

  bool all_pass = true;
  for (const auto& criterion : all_criteria()) {
    if (selected != 0 && criterion.number != selected) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& err) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + err.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool within_budget =
        criterion.budget_seconds <= 0.0 || secs <= criterion.budget_seconds;
    const bool pass = outcome.pass && within_budget;
    all_pass = all_pass && pass;
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion.number
              << " (" << criterion.name << "): " << outcome.detail;
    if (criterion.budget_seconds > 0.0) {
      std::cout << " [" << secs << " s, budget " << criterion.budget_seconds << " s]";
    } else {
      std::cout << " [" << secs << " s]";
    }
    std::cout << std::endl;
  }
  return all_pass ? 0 : 1;
}
