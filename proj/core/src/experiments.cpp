#include "roughmild/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "roughmild/gubinelli.hpp"
#include "roughmild/parallel.hpp"

namespace roughmild {

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

namespace {

ControlledPath scalar_composition(std::shared_ptr<const RoughPath> driver,
                                  const ScalarField& field) {
  const int points = driver->grid().n_points();
  std::vector<Eigen::MatrixXd> values(points);
  std::vector<Tensor3> derivs(points);
  for (int i = 0; i < points; ++i) {
    const double x = driver->first_level().value(i)(0);
    values[i] = Eigen::MatrixXd::Constant(1, 1, field.f(x));
    Tensor3 t(1, 1, 1);
    t.flat()(0, 0) = field.df(x);
    derivs[i] = std::move(t);
  }
  return ControlledPath(std::move(driver), std::move(values), std::move(derivs),
                        PathRole::Operator);
}

}  // namespace

CoincidenceResult coincidence_check(const QSpectrum& spectrum, double horizon,
                                    const std::vector<int>& resolutions,
                                    int fine_factor, int n_seeds,
                                    std::uint64_t base_seed, const ScalarField& field,
                                    double f_sup) {
  CoincidenceResult result;
  result.resolutions = resolutions;
  const int n_max = *std::max_element(resolutions.begin(), resolutions.end());
  for (int r : resolutions) {
    if (n_max % r != 0) {
      throw std::invalid_argument("coincidence_check: resolutions must divide the finest");
    }
  }
  result.gaps.assign(resolutions.size(), std::vector<double>(n_seeds, 0.0));
  result.gaps_geometric.assign(resolutions.size(), std::vector<double>(n_seeds, 0.0));

  Grid fine_grid(horizon, n_max);
  parallel_for(static_cast<std::size_t>(n_seeds), [&](std::size_t s) {
    DriverSample fine = sample_q_wiener(spectrum, fine_grid, fine_factor,
                                        base_seed + static_cast<std::uint64_t>(s));
    for (std::size_t ri = 0; ri < resolutions.size(); ++ri) {
      DriverSample coarse = coarsen(fine, n_max / resolutions[ri]);
      auto driver = std::make_shared<RoughPath>(coarse.rough);
      result.gaps[ri][s] = coincidence_gap(scalar_composition(driver, field));

      // Control: same first level, piecewise-linear (geometric) areas.
      auto geo = std::make_shared<RoughPath>(
          enhance_piecewise_linear(coarse.rough.first_level(), coarse.rough.alpha()));
      result.gaps_geometric[ri][s] =
          coincidence_gap(scalar_composition(geo, field));
    }
  });

  result.integral_scale = f_sup * std::sqrt(spectrum.trace() * horizon);
  for (std::size_t ri = 0; ri < resolutions.size(); ++ri) {
    result.median_gap.push_back(median(result.gaps[ri]));
    result.median_gap_geometric.push_back(median(result.gaps_geometric[ri]));
    result.median_gap_rel.push_back(result.median_gap.back() / result.integral_scale);
  }
  return result;
}

CovarianceCheck fbm_covariance_check(const QSpectrum& spectrum, double hurst,
                                     const Grid& grid, int n_seeds,
                                     std::uint64_t base_seed) {
  const int d = spectrum.dim();
  const int points = grid.n_points();
  // Per-seed products X^c_{t_i} X^c_{t_j} for 1 <= i <= j.
  const int n_pairs = (grid.n_steps() * (grid.n_steps() + 1)) / 2;
  std::vector<Eigen::ArrayXXd> per_seed(static_cast<std::size_t>(n_seeds));
  parallel_for(static_cast<std::size_t>(n_seeds), [&](std::size_t s) {
    DriverSample sample = sample_q_fbm(spectrum, hurst, grid,
                                       base_seed + static_cast<std::uint64_t>(s));
    Eigen::ArrayXXd prods(d, n_pairs);
    int at = 0;
    for (int i = 1; i < points; ++i) {
      for (int j = i; j < points; ++j, ++at) {
        for (int c = 0; c < d; ++c) {
          prods(c, at) = sample.rough.first_level().values()(c, i) *
                         sample.rough.first_level().values()(c, j);
        }
      }
    }
    per_seed[s] = std::move(prods);
  });

  Eigen::ArrayXXd mean = Eigen::ArrayXXd::Zero(d, n_pairs);
  Eigen::ArrayXXd second = Eigen::ArrayXXd::Zero(d, n_pairs);
  for (const auto& prods : per_seed) {
    mean += prods;
    second += prods.square();
  }
  mean /= n_seeds;
  second /= n_seeds;

  CovarianceCheck out;
  int at = 0;
  for (int i = 1; i < points; ++i) {
    for (int j = i; j < points; ++j, ++at) {
      for (int c = 0; c < d; ++c) {
        CovarianceCheck::Entry entry;
        entry.component = c;
        entry.i = i;
        entry.j = j;
        entry.empirical = mean(c, at);
        entry.analytic = spectrum.eigenvalues(c) *
                         fbm_covariance(grid.time(i), grid.time(j), hurst);
        const double var = std::max(second(c, at) - mean(c, at) * mean(c, at), 0.0);
        entry.standard_error = std::sqrt(var / n_seeds);
        entry.z = entry.standard_error > 0.0
                      ? (entry.empirical - entry.analytic) / entry.standard_error
                      : 0.0;
        out.max_abs_z = std::max(out.max_abs_z, std::abs(entry.z));
        out.entries.push_back(entry);
      }
    }
  }
  return out;
}

ItoDefectCheck ito_mean_defect_check(const QSpectrum& spectrum, const Grid& grid,
                                     int i, int j, int fine_factor, int n_seeds,
                                     std::uint64_t base_seed) {
  const int d = spectrum.dim();
  std::vector<Eigen::MatrixXd> defects(static_cast<std::size_t>(n_seeds));
  parallel_for(static_cast<std::size_t>(n_seeds), [&](std::size_t s) {
    DriverSample sample = sample_q_wiener(spectrum, grid, fine_factor,
                                          base_seed + static_cast<std::uint64_t>(s));
    defects[s] = geometric_defect_tensor(sample.rough, i, j);
  });
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
  for (const auto& defect : defects) {
    mean += defect;
    second += defect.cwiseProduct(defect);
  }
  mean /= n_seeds;
  second /= n_seeds;

  const double gap = grid.step() * (j - i);
  ItoDefectCheck out;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      ItoDefectCheck::Entry entry;
      entry.row = r;
      entry.col = c;
      entry.mean = mean(r, c);
      entry.expected = r == c ? -0.5 * gap * spectrum.eigenvalues(r) : 0.0;
      const double var = std::max(second(r, c) - mean(r, c) * mean(r, c), 0.0);
      entry.standard_error = std::sqrt(var / n_seeds);
      entry.z = entry.standard_error > 0.0
                    ? (entry.mean - entry.expected) / entry.standard_error
                    : 0.0;
      out.max_abs_z = std::max(out.max_abs_z, std::abs(entry.z));
      out.entries.push_back(entry);
    }
  }
  return out;
}

}  // namespace roughmild
