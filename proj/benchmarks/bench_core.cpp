#include <benchmark/benchmark.h>

#include "roughmild/convolution.hpp"
#include "roughmild/drivers.hpp"
#include "roughmild/gubinelli.hpp"
#include "roughmild/verify.hpp"

namespace {

using namespace roughmild;

DriverSample sample(int n, int d, std::uint64_t seed) {
  return sample_q_wiener(QSpectrum::polynomial(2.0, d), Grid(1.0, n), 8, seed);
}

void BM_HolderNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  DriverSample driver = sample(n, 4, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(holder_norm(driver.rough.first_level(), 0.45));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_HolderNorm)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

void BM_SecondLevelNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  DriverSample driver = sample(n, 4, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(second_level_norm(driver.rough, 0.45));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SecondLevelNorm)->RangeMultiplier(2)->Range(128, 1024)->Complexity();

void BM_QWienerSample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample(n, 4, ++seed));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_QWienerSample)->RangeMultiplier(4)->Range(64, 1024)->Complexity();

void BM_FbmSample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const QSpectrum spectrum = QSpectrum::polynomial(2.0, 4);
  Grid grid(1.0, n);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_q_fbm(spectrum, 0.4, grid, ++seed));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_FbmSample)->RangeMultiplier(4)->Range(64, 1024)->Complexity();

void BM_RoughConvolution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto driver = std::make_shared<RoughPath>(sample(n, 2, 3).rough);
  SemigroupTable table = build_semigroup(laplacian_1d(8, 1.0), driver->grid());
  ControlledPath base = make_random_controlled_path(driver, 8, 4);
  ControlledPath cp = [&] {
    const int points = driver->grid().n_points();
    std::vector<Eigen::MatrixXd> values(points);
    std::vector<Tensor3> derivs(points);
    for (int i = 0; i < points; ++i) {
      Eigen::MatrixXd block(8, 2);
      block.col(0) = base.value(i);
      block.col(1) = 0.5 * base.value(i);
      values[i] = block;
      Tensor3 t(8, 2, 2);
      for (int a = 0; a < 2; ++a) {
        Eigen::MatrixXd slice(8, 2);
        slice.col(0) = base.derivative(i).slice(a);
        slice.col(1) = 0.5 * base.derivative(i).slice(a);
        t.set_slice(a, slice);
      }
      derivs[i] = std::move(t);
    }
    return ControlledPath(driver, std::move(values), std::move(derivs),
                          PathRole::Operator);
  }();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rough_convolution(table, cp, n));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_RoughConvolution)->RangeMultiplier(2)->Range(128, 1024)->Complexity();

void BM_ChenReconstructFullTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  DriverSample driver = sample(n, 4, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(full_table(driver.rough));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_ChenReconstructFullTable)->RangeMultiplier(2)->Range(64, 512)->Complexity();

}  // namespace

BENCHMARK_MAIN();
