#include <doctest.h>

#include <cmath>
#include <sstream>

#include "roughmild/drivers.hpp"
#include "roughmild/experiments.hpp"
#include "roughmild/gubinelli.hpp"
#include "roughmild/rng.hpp"
#include "roughmild/serialization.hpp"

using namespace roughmild;

TEST_CASE("polynomial spectra are positive, descending, trace one") {
  QSpectrum spectrum = QSpectrum::polynomial(2.0, 6);
  CHECK(spectrum.dim() == 6);
  CHECK(spectrum.trace() == doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 1; k < 6; ++k) {
    CHECK(spectrum.eigenvalues(k) < spectrum.eigenvalues(k - 1));
    CHECK(spectrum.eigenvalues(k) > 0.0);
  }
  CHECK_THROWS_AS(
      QSpectrum::from_list((Eigen::VectorXd(2) << 0.1, 0.5).finished()),
      std::invalid_argument);
}

TEST_CASE("counter rng: determinism and substream independence") {
  CounterRng a(CounterRng::derive_key(42, 0));
  CounterRng b(CounterRng::derive_key(42, 0));
  CounterRng c(CounterRng::derive_key(42, 1));
  bool all_equal = true, any_equal_cross = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    all_equal = all_equal && (x == b.next_u64());
    any_equal_cross = any_equal_cross || (x == c.next_u64());
  }
  CHECK(all_equal);
  CHECK_FALSE(any_equal_cross);
}

TEST_CASE("q-wiener samples are deterministic in the seed and Chen consistent") {
  QSpectrum spectrum = QSpectrum::polynomial(2.0, 3);
  Grid grid(1.0, 32);
  DriverSample s1 = sample_q_wiener(spectrum, grid, 8, 7);
  DriverSample s2 = sample_q_wiener(spectrum, grid, 8, 7);
  CHECK((s1.rough.first_level().values() - s2.rough.first_level().values()).norm() ==
        0.0);
  for (int k = 0; k < 32; ++k) {
    CHECK((s1.rough.step_areas()[k] - s2.rough.step_areas()[k]).norm() == 0.0);
  }
  CHECK(max_chen_defect(s1.rough) <= 1e-12);
  CHECK(s1.kind == DriverKind::ItoWiener);
  CHECK(s1.hurst == 0.5);
  CHECK_THROWS_AS(sample_q_wiener(spectrum, grid, 4, 7), std::invalid_argument);
  CHECK_THROWS_AS(sample_q_wiener(spectrum, grid, 12, 7), std::invalid_argument);
}

TEST_CASE("q-wiener increments are centered with the Ito isometry variance") {
  QSpectrum spectrum = QSpectrum::polynomial(2.0, 2);
  Grid grid(1.0, 8);
  const int n_seeds = 4000;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  double second = 0.0;
  for (int s = 0; s < n_seeds; ++s) {
    DriverSample sample = sample_q_wiener(spectrum, grid, 8, 1000 + s);
    const Eigen::VectorXd inc = sample.rough.increment(2, 6);
    mean += inc;
    second += inc.squaredNorm();
  }
  mean /= n_seeds;
  second /= n_seeds;
  const double gap = grid.step() * 4;
  // E X = 0 within 3 standard errors; E |X|^2 = tr(Q) |t-s| within 5%
  const double se = std::sqrt(spectrum.trace() * gap / n_seeds);
  CHECK(std::abs(mean(0)) <= 3.0 * se);
  CHECK(std::abs(mean(1)) <= 3.0 * se);
  CHECK(second == doctest::Approx(spectrum.trace() * gap).epsilon(0.05));
}

TEST_CASE("geometric wiener samples pass the geometric check") {
  QSpectrum spectrum = QSpectrum::polynomial(1.5, 2);
  Grid grid(1.0, 64);
  DriverSample sample = sample_q_wiener_geometric(spectrum, grid, 11);
  CHECK(sample.kind == DriverKind::GeometricWiener);
  CHECK(max_geometric_defect(sample.rough) <= 1e-12);
}

TEST_CASE("fbm covariance function: H = 1/2 reduces to min(s,t)") {
  for (auto [s, t] : std::vector<std::pair<double, double>>{
           {0.25, 0.75}, {0.5, 0.5}, {1.0, 0.125}}) {
    CHECK(fbm_covariance(s, t, 0.5) == doctest::Approx(std::min(s, t)).epsilon(1e-14));
  }
  // self-covariance R(s,s) = s^{2H}
  CHECK(fbm_covariance(0.7, 0.7, 0.4) == doctest::Approx(std::pow(0.7, 0.8)));
}

TEST_CASE("fbm samples: geometric enhancement, hurst validation, determinism") {
  QSpectrum spectrum = QSpectrum::polynomial(2.0, 2);
  Grid grid(1.0, 48);
  DriverSample sample = sample_q_fbm(spectrum, 0.4, grid, 5);
  CHECK(sample.kind == DriverKind::GeometricFbm);
  CHECK(sample.rough.alpha() == doctest::Approx(0.35));
  CHECK(max_geometric_defect(sample.rough) <= 1e-12);
  CHECK(max_chen_defect(sample.rough) <= 1e-12);

  DriverSample again = sample_q_fbm(spectrum, 0.4, grid, 5);
  CHECK((sample.rough.first_level().values() -
         again.rough.first_level().values()).norm() == 0.0);
  CHECK_THROWS_AS(sample_q_fbm(spectrum, 0.3, grid, 5), std::invalid_argument);
  CHECK_THROWS_AS(sample_q_fbm(spectrum, 0.6, grid, 5), std::invalid_argument);
}

TEST_CASE("fbm terminal variance matches lambda_k per component") {
  QSpectrum spectrum = QSpectrum::polynomial(2.0, 2);
  Grid grid(1.0, 4);
  const int n_seeds = 4000;
  Eigen::Vector2d second = Eigen::Vector2d::Zero();
  for (int s = 0; s < n_seeds; ++s) {
    DriverSample sample = sample_q_fbm(spectrum, 0.45, grid, 2000 + s);
    const Eigen::VectorXd terminal = sample.rough.first_level().value(4);
    second += terminal.cwiseProduct(terminal);
  }
  second /= n_seeds;
  // R(1,1) = 1, so the terminal variance is lambda_k; MC tolerance 5%
  CHECK(second(0) == doctest::Approx(spectrum.eigenvalues(0)).epsilon(0.05));
  CHECK(second(1) == doctest::Approx(spectrum.eigenvalues(1)).epsilon(0.05));
}

TEST_CASE("empirical fbm covariance agrees with the kernel on a small grid") {
  QSpectrum spectrum = QSpectrum::polynomial(2.0, 2);
  Grid grid(1.0, 4);
  CovarianceCheck check = fbm_covariance_check(spectrum, 0.4, grid, 4000, 77);
  CHECK(check.max_abs_z <= 5.0);
  // H = 1/2: same machinery must reproduce Brownian covariance
  CovarianceCheck brown = fbm_covariance_check(spectrum, 0.5, grid, 4000, 78);
  CHECK(brown.max_abs_z <= 5.0);
  for (const auto& entry : brown.entries) {
    CHECK(entry.analytic ==
          doctest::Approx(spectrum.eigenvalues(entry.component) *
                          std::min(grid.time(entry.i), grid.time(entry.j))));
  }
}

TEST_CASE("coarsening preserves the underlying rough path") {
  QSpectrum spectrum = QSpectrum::polynomial(2.0, 2);
  Grid grid(1.0, 64);
  DriverSample fine = sample_q_wiener(spectrum, grid, 8, 9);
  DriverSample coarse = coarsen(fine, 4);
  CHECK(coarse.rough.grid().n_steps() == 16);
  for (int i = 0; i <= 16; ++i) {
    CHECK((coarse.rough.first_level().value(i) -
           fine.rough.first_level().value(4 * i)).norm() == 0.0);
  }
  for (int i = 0; i < 16; ++i) {
    CHECK((coarse.rough.step_areas()[i] - fine.rough.chen_area(4 * i, 4 * i + 4)).norm() <=
          1e-14);
  }
  // geometric samples stay geometric under Chen aggregation
  DriverSample pwl = sample_q_wiener_geometric(spectrum, grid, 10);
  CHECK(max_geometric_defect(coarsen(pwl, 4).rough) <= 1e-12);
  CHECK_THROWS_AS(coarsen(fine, 7), std::invalid_argument);
}

TEST_CASE("moment scaling probe recovers the Brownian orders") {
  QSpectrum spectrum = QSpectrum::polynomial(2.0, 2);
  Grid grid(1.0, 32);
  MomentSlopes slopes = moment_scaling_probe(spectrum, grid, 2, 800, 31);
  CHECK(slopes.first_level_slope == doctest::Approx(1.0).epsilon(0.10));
  CHECK(slopes.second_level_slope == doctest::Approx(2.0).epsilon(0.10));
  CHECK_THROWS_AS(moment_scaling_probe(spectrum, grid, 3, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("deterministic linear path shows slope two, not the Brownian one") {
  // |X_{0,g}| is proportional to g, so E|X|^2 scales with slope 2 in the
  // gap; the Brownian slope-1 signature is genuinely stochastic.
  Grid grid(1.0, 16);
  Eigen::MatrixXd values(1, 17);
  for (int i = 0; i <= 16; ++i) values(0, i) = 3.0 * grid.time(i);
  RoughPath rough = enhance_piecewise_linear(Path(grid, values), 0.5);
  std::vector<double> logs_x, logs_m;
  for (int g = 1; g <= 16; g *= 2) {
    logs_x.push_back(std::log(grid.step() * g));
    logs_m.push_back(std::log(std::pow(rough.increment(0, g).norm(), 2)));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < logs_x.size(); ++k) {
    sx += logs_x[k];
    sy += logs_m[k];
    sxx += logs_x[k] * logs_x[k];
    sxy += logs_x[k] * logs_m[k];
  }
  const double n = static_cast<double>(logs_x.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("left-point Ito sums: constant integrand and the Ito formula") {
  QSpectrum spectrum = QSpectrum::from_list(Eigen::VectorXd::Ones(1));
  Grid grid(1.0, 64);
  DriverSample sample = sample_q_wiener(spectrum, grid, 8, 12);
  std::vector<Eigen::MatrixXd> constant(65, Eigen::MatrixXd::Constant(1, 1, 2.5));
  const Eigen::VectorXd got = ito_integral_leftpoint(constant, sample.rough, 64);
  CHECK(got(0) == doctest::Approx(2.5 * sample.rough.increment(0, 64)(0)).epsilon(1e-13));

  // E[ (beta_T^2 - T)/2 - leftsum(beta) ] -> 0 within 3 SE
  const int n_seeds = 2000;
  double mean = 0.0, second = 0.0;
  for (int s = 0; s < n_seeds; ++s) {
    DriverSample w = sample_q_wiener(spectrum, grid, 8, 4000 + s);
    std::vector<Eigen::MatrixXd> beta(65);
    for (int i = 0; i <= 64; ++i) {
      beta[i] = Eigen::MatrixXd::Constant(1, 1, w.rough.first_level().value(i)(0));
    }
    const double bt = w.rough.first_level().value(64)(0);
    const double gap = (bt * bt - 1.0) / 2.0 - ito_integral_leftpoint(beta, w.rough, 64)(0);
    mean += gap;
    second += gap * gap;
  }
  mean /= n_seeds;
  second /= n_seeds;
  const double se = std::sqrt(std::max(second - mean * mean, 0.0) / n_seeds);
  CHECK(std::abs(mean) <= 3.0 * se + 1e-12);
}

TEST_CASE("Ito isometry of the unit integrand") {
  QSpectrum spectrum = QSpectrum::polynomial(2.0, 2);
  Grid grid(1.0, 32);
  const int n_seeds = 4000;
  double second = 0.0;
  for (int s = 0; s < n_seeds; ++s) {
    DriverSample w = sample_q_wiener(spectrum, grid, 8, 6000 + s);
    std::vector<Eigen::MatrixXd> ones(33, Eigen::MatrixXd::Identity(2, 2));
    second += ito_integral_leftpoint(ones, w.rough, 32).squaredNorm();
  }
  second /= n_seeds;
  CHECK(second == doctest::Approx(spectrum.trace() * 1.0).epsilon(0.05));
}

TEST_CASE("coincidence gap: constant integrand has no compensator") {
  QSpectrum spectrum = QSpectrum::from_list(Eigen::VectorXd::Ones(1));
  Grid grid(1.0, 32);
  auto driver = std::make_shared<RoughPath>(
      sample_q_wiener(spectrum, grid, 8, 21).rough);
  ControlledPath cp =
      ControlledPath::constant(driver, Eigen::MatrixXd::Constant(1, 1, 3.0),
                               PathRole::Operator);
  CHECK(coincidence_gap(cp) == 0.0);
}

TEST_CASE("coincidence sweep shrinks for Ito areas but not for geometric ones") {
  QSpectrum spectrum = QSpectrum::from_list(Eigen::VectorXd::Ones(1));
  ScalarField sine{[](double x) { return std::sin(x); },
                   [](double x) { return std::cos(x); }};
  CoincidenceResult result =
      coincidence_check(spectrum, 1.0, {64, 256, 1024}, 8, 21, 99, sine, 1.0);
  CHECK(result.median_gap[0] > result.median_gap[1]);
  CHECK(result.median_gap[1] > result.median_gap[2]);
  // control: geometric enhancement keeps the Ito-Stratonovich correction
  CHECK(result.median_gap_geometric[2] > 5.0 * result.median_gap[2]);
  CHECK(result.median_gap_geometric[2] > 0.05);
}

TEST_CASE("ito mean defect matches -(t-s) Q / 2") {
  QSpectrum spectrum = QSpectrum::polynomial(2.0, 2);
  Grid grid(1.0, 8);
  ItoDefectCheck check = ito_mean_defect_check(spectrum, grid, 0, 8, 8, 4000, 55);
  CHECK(check.max_abs_z <= 4.0);
  for (const auto& entry : check.entries) {
    if (entry.row == entry.col) {
      CHECK(entry.expected ==
            doctest::Approx(-0.5 * spectrum.eigenvalues(entry.row)));
    } else {
      CHECK(entry.expected == 0.0);
    }
  }
}

TEST_CASE("driver files round-trip with their meta line") {
  QSpectrum spectrum = QSpectrum::polynomial(2.0, 2);
  Grid grid(0.5, 16);
  DriverSample sample = sample_q_fbm(spectrum, 0.45, grid, 31);
  std::stringstream buffer;
  write_driver(buffer, sample);
  DriverFileInfo info;
  DriverSample loaded = read_driver(buffer, &info);
  CHECK(loaded.kind == DriverKind::GeometricFbm);
  CHECK(loaded.hurst == 0.45);
  CHECK(loaded.seed == 31);
  CHECK((loaded.rough.first_level().values() -
         sample.rough.first_level().values()).norm() == 0.0);
  REQUIRE(info.total_defect.has_value());
  CHECK(*info.total_defect <= 1e-12);
}

TEST_CASE("fourth-moment probe doubles the orders (loose Monte Carlo bands)") {
  QSpectrum spectrum = QSpectrum::polynomial(2.0, 2);
  Grid grid(1.0, 32);
  MomentSlopes slopes = moment_scaling_probe(spectrum, grid, 4, 3000, 97);
  CHECK(slopes.first_level_slope == doctest::Approx(2.0).epsilon(0.15));
  CHECK(slopes.second_level_slope == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("geometric-control coincidence gap sits at the Ito correction scale") {
  // For Y = sin(X) against piecewise-linear areas the gap converges to
  // |(1/2) int cos(X_s) ds|, about 0.39 in expectation at tr Q = T = 1.
  QSpectrum spectrum = QSpectrum::from_list(Eigen::VectorXd::Ones(1));
  ScalarField sine{[](double x) { return std::sin(x); },
                   [](double x) { return std::cos(x); }};
  CoincidenceResult result =
      coincidence_check(spectrum, 1.0, {512}, 8, 30, 321, sine, 1.0);
  CHECK(result.median_gap_geometric[0] >= 0.2);
  CHECK(result.median_gap_geometric[0] <= 0.6);
}
