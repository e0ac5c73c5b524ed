#include <doctest.h>

#include <cmath>

#include "roughmild/rng.hpp"
#include "roughmild/semigroup.hpp"

using namespace roughmild;

namespace {

Eigen::VectorXd random_vector(int m, std::uint64_t seed) {
  CounterRng rng(CounterRng::derive_key(seed, 3));
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) y(i) = rng.next_gaussian();
  return y;
}

}  // namespace

TEST_CASE("zero generator: identity exponentials, M = 1, omega = 0") {
  Grid grid(1.0, 16);
  SemigroupTable table = build_semigroup(zero_generator(4), grid);
  CHECK(table.is_identity());
  CHECK(table.growth_m() == 1.0);
  CHECK(table.growth_omega() == 0.0);
  for (int k = 0; k <= 16; ++k) {
    CHECK((table.exp_at(k) - Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);
  }
}

TEST_CASE("diagonal generator exponentiates entrywise") {
  Grid grid(2.0, 32);
  Eigen::VectorXd entries(3);
  entries << -1.0, 0.5, -3.0;
  SemigroupTable table = build_semigroup(diagonal_generator(entries), grid);
  for (int k = 0; k <= 32; ++k) {
    const double t = grid.time(k);
    for (int i = 0; i < 3; ++i) {
      CHECK(table.exp_at(k)(i, i) ==
            doctest::Approx(std::exp(entries(i) * t)).epsilon(1e-14));
    }
  }
}

TEST_CASE("Dirichlet Laplacian exponentials match the spectral oracle") {
  const int m = 8;
  const double dx = 1.0 / (m + 1);
  Grid grid(0.5, 16);
  SemigroupTable table = build_semigroup(laplacian_1d(m, dx), grid);
  // Known eigenpairs: lambda_k = -4 sin^2(k pi / (2(m+1))) / dx^2 with
  // orthonormal eigenvectors v_k(i) = sqrt(2/(m+1)) sin(i k pi / (m+1)).
  Eigen::MatrixXd v(m, m);
  Eigen::VectorXd lambda(m);
  for (int k = 1; k <= m; ++k) {
    lambda(k - 1) = -4.0 * std::pow(std::sin(k * M_PI / (2.0 * (m + 1))), 2) / (dx * dx);
    for (int i = 1; i <= m; ++i) {
      v(i - 1, k - 1) = std::sqrt(2.0 / (m + 1)) * std::sin(i * k * M_PI / (m + 1));
    }
  }
  for (int k : {1, 4, 16}) {
    const double t = grid.time(k);
    const Eigen::MatrixXd oracle =
        v * (lambda.array() * t).exp().matrix().asDiagonal() * v.transpose();
    CHECK((table.exp_at(k) - oracle).norm() <= 1e-10);
  }
}

TEST_CASE("graph norms: zero generator, unit diagonal example, equivalence bounds") {
  Grid grid(1.0, 4);
  SemigroupTable zero = build_semigroup(zero_generator(3), grid);
  Eigen::VectorXd y = random_vector(3, 1);
  for (int order = 0; order <= 3; ++order) {
    CHECK(zero.graph_norm(y, order) == doctest::Approx(y.norm()));
  }

  SemigroupTable unit =
      build_semigroup(diagonal_generator(Eigen::VectorXd::Constant(2, -1.0)), grid);
  Eigen::VectorXd e1 = Eigen::VectorXd::Unit(2, 0);
  CHECK(unit.graph_norm(e1, 2) == doctest::Approx(3.0));

  // |y|_{D(A^2)} and |y|_{D(A)} + |Ay|_{D(A)} differ exactly by |Ay| and are
  // two-sided equivalent.
  SemigroupTable lap = build_semigroup(laplacian_1d(6, 1.0), grid);
  for (std::uint64_t seed : {2, 3, 4}) {
    Eigen::VectorXd w = random_vector(6, seed);
    const double lhs = lap.graph_norm(w, 2);
    const double rhs = lap.graph_norm(w, 1) +
                       lap.graph_norm(lap.generator() * w, 1);
    CHECK(rhs == doctest::Approx(lhs + (lap.generator() * w).norm()).epsilon(1e-12));
    CHECK(lhs <= rhs + 1e-12);
    CHECK(rhs <= 2.0 * lhs + 1e-12);
  }
  CHECK_THROWS_AS(lap.graph_norm(y, 4), std::invalid_argument);
}

TEST_CASE("growth envelope: contraction for symmetric negatives, M > 1 when non-normal") {
  Grid grid(1.0, 32);
  SemigroupTable lap = build_semigroup(laplacian_1d(8, 1.0 / 9.0), grid);
  CHECK(lap.growth_omega() == 0.0);
  CHECK(lap.growth_m() == 1.0);

  SemigroupTable nn = build_semigroup(nonnormal_test_matrix(6, 2.0), grid);
  CHECK(nn.growth_m() > 1.0);
  // envelope actually dominates the cached exponentials
  for (int k = 0; k <= 32; ++k) {
    const double bound =
        nn.growth_m() * std::exp(nn.growth_omega() * grid.time(k));
    CHECK(nn.exp_at(k).jacobiSvd().singularValues()(0) <= bound * (1.0 + 1e-10));
  }
}

TEST_CASE("semigroup law holds on random index pairs") {
  Grid grid(1.0, 64);
  for (const auto& a : {laplacian_1d(8, 0.25), nonnormal_test_matrix(5, 1.5)}) {
    SemigroupTable table = build_semigroup(a, grid);
    CHECK(semigroup_law_defect(table, 128, 7) <= 1e-10);
  }
}

TEST_CASE("orbit Lipschitz check: zero generator, scalar decay, Laplacian sweep") {
  Grid grid(1.0, 32);
  SemigroupTable zero = build_semigroup(zero_generator(2), grid);
  RatioCheck z = orbit_lipschitz_check(zero, random_vector(2, 5));
  CHECK(z.max_ratio == 0.0);
  CHECK(z.holds);

  SemigroupTable decay =
      build_semigroup(diagonal_generator(Eigen::VectorXd::Constant(1, -1.0)), grid);
  RatioCheck d = orbit_lipschitz_check(decay, Eigen::VectorXd::Ones(1));
  CHECK(d.holds);
  CHECK(d.max_ratio <= 1.0);

  SemigroupTable lap = build_semigroup(laplacian_1d(8, 1.0 / 9.0), grid);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RatioCheck check = orbit_lipschitz_check(lap, random_vector(8, 100 + seed));
    CHECK(check.holds);
  }
}

TEST_CASE("quadruple estimate: zero generator, scalar closed form, matrix sweeps") {
  Grid grid(1.0, 24);
  SemigroupTable zero = build_semigroup(zero_generator(2), grid);
  RatioCheck z = quad_estimate_check(zero, random_vector(2, 9));
  CHECK(z.max_ratio == 0.0);

  // scalar a < 0: compare against the directly evaluated double difference
  const double a = -1.5;
  SemigroupTable scalar =
      build_semigroup(diagonal_generator(Eigen::VectorXd::Constant(1, a)), grid);
  Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  RatioCheck s = quad_estimate_check(scalar, one);
  CHECK(s.holds);
  double sharp = 0.0;
  const double h = grid.step();
  const double graph2 = 1.0 + std::abs(a) + a * a;
  for (int t = 1; t <= 24; ++t) {
    for (int ss = 0; ss < t; ++ss) {
      for (int r = 0; r <= ss; ++r) {
        for (int q = 0; q < r; ++q) {
          const double lhs = std::abs(std::exp(a * h * (t - r)) - std::exp(a * h * (ss - r)) -
                                      std::exp(a * h * (t - q)) + std::exp(a * h * (ss - q)));
          sharp = std::max(sharp, lhs / (h * (t - ss) * h * (r - q) * graph2));
        }
      }
    }
  }
  CHECK(s.max_ratio == doctest::Approx(sharp).epsilon(1e-12));

  SemigroupTable lap = build_semigroup(laplacian_1d(8, 1.0), grid);
  SemigroupTable nn = build_semigroup(nonnormal_test_matrix(6, 2.0), grid);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CHECK(quad_estimate_check(lap, random_vector(8, 200 + seed)).holds);
    CHECK(quad_estimate_check(nn, random_vector(6, 300 + seed)).holds);
  }
}

TEST_CASE("generator consistency: forward difference converges at first order") {
  const Eigen::MatrixXd a = laplacian_1d(6, 0.5);
  Eigen::VectorXd y = random_vector(6, 11);
  std::vector<double> errors;
  for (int n : {32, 64, 128}) {
    Grid grid(1.0, n);
    SemigroupTable table = build_semigroup(a, grid);
    double worst = 0.0;
    for (int k = 0; k + 1 <= n; k += n / 8) {
      const Eigen::VectorXd fd =
          (table.apply(k + 1, y) - table.apply(k, y)) / grid.step();
      worst = std::max(worst, (fd - a * table.apply(k, y)).norm());
    }
    errors.push_back(worst);
  }
  CHECK(errors[0] / errors[1] == doctest::Approx(2.0).epsilon(0.3));
  CHECK(errors[1] / errors[2] == doctest::Approx(2.0).epsilon(0.3));
}

TEST_CASE("integral identity: A applied to the trapezoid orbit integral") {
  const Eigen::MatrixXd a = laplacian_1d(6, 0.5);
  Eigen::VectorXd y = random_vector(6, 12);
  std::vector<double> errors;
  for (int n : {16, 32}) {
    Grid grid(1.0, n);
    SemigroupTable table = build_semigroup(a, grid);
    // trapezoid of int_0^T S_s y ds
    Eigen::VectorXd integral = Eigen::VectorXd::Zero(6);
    for (int k = 0; k < n; ++k) {
      integral += 0.5 * grid.step() * (table.apply(k, y) + table.apply(k + 1, y));
    }
    errors.push_back((a * integral - (table.apply(n, y) - y)).norm());
  }
  CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(0.4));
}

TEST_CASE("restriction to the graph norm keeps the growth envelope") {
  // S_t commutes with A, so |S_t y|_{D(A)} <= M e^(omega t) |y|_{D(A)} with
  // the same fitted constants.
  Grid grid(1.0, 32);
  for (const auto& a : {laplacian_1d(8, 0.5), nonnormal_test_matrix(5, 1.5)}) {
    SemigroupTable table = build_semigroup(a, grid);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Eigen::VectorXd y = random_vector(static_cast<int>(a.rows()), 400 + seed);
      for (int k = 0; k <= 32; ++k) {
        const double bound = table.growth_m() *
                             std::exp(table.growth_omega() * grid.time(k)) *
                             table.graph_norm(y, 1);
        CHECK(table.graph_norm(table.apply(k, y), 1) <= bound * (1.0 + 1e-9));
      }
    }
  }
}

TEST_CASE("non-finite generators are rejected") {
  Grid grid(1.0, 4);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(build_semigroup(bad, grid), std::invalid_argument);
  CHECK_THROWS_AS(build_semigroup(Eigen::MatrixXd::Zero(2, 3), grid),
                  std::invalid_argument);
}
