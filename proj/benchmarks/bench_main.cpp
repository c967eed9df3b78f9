// Microbenchmarks for the hot paths: a k-means restart sweep dominates every
// experiment, followed by forest fitting and the least-squares solver.

#include <benchmark/benchmark.h>

#include <cstdint>

#include "msreg/kmeans.hpp"
#include "msreg/least_squares.hpp"
#include "msreg/prediction_model.hpp"
#include "msreg/regressor.hpp"
#include "msreg/rng.hpp"

namespace {

msreg::Matrix random_points(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  msreg::Matrix m(rows, cols);
  msreg::Rng rng(seed);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.unit() * 2.0 - 1.0;
  return m;
}

msreg::Vector random_targets(const msreg::Matrix& x, std::uint64_t seed) {
  msreg::Rng rng(seed);
  msreg::Vector y(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double v = 0.0;
    for (std::size_t c = 0; c < x.cols(); ++c) v += (c % 3 ? 1.0 : -0.5) * x(r, c);
    y[r] = v + 0.1 * rng.gaussian();
  }
  return y;
}

void bm_kmeans_best_of(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const msreg::Matrix points = random_points(500, 13, 11);
  msreg::RestartPolicy policy;
  policy.n_restarts = 16;
  policy.seed = 5;
  for (auto _ : state) {
    msreg::Clustering c = msreg::kmeans_best_of(points, k, policy);
    benchmark::DoNotOptimize(c.distortion);
  }
}
BENCHMARK(bm_kmeans_best_of)->Arg(4)->Arg(12)->Arg(25)->Unit(benchmark::kMillisecond);

void bm_least_squares(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const msreg::Matrix x = random_points(n, 14, 23);
  const msreg::Vector y = random_targets(x, 29);
  for (auto _ : state) {
    msreg::Vector beta = msreg::solve_least_squares(x, y);
    benchmark::DoNotOptimize(beta.data());
  }
}
BENCHMARK(bm_least_squares)->Arg(100)->Arg(500)->Arg(2000);

void bm_forest_fit(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const msreg::Matrix x = random_points(n, 8, 31);
  const msreg::Vector y = random_targets(x, 37);
  msreg::ForestParams params;
  params.n_trees = 20;
  params.seed = 3;
  for (auto _ : state) {
    msreg::FittedRegressor forest = msreg::fit_random_forest(x, y, params);
    benchmark::DoNotOptimize(forest.trees.data());
  }
}
BENCHMARK(bm_forest_fit)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void bm_train_pm(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const msreg::Matrix x = random_points(600, 10, 41);
  const msreg::Vector y = random_targets(x, 43);
  const msreg::RegressorSpec spec = msreg::RegressorSpec::make(msreg::RegressorKind::ols);
  msreg::RestartPolicy policy;
  policy.n_restarts = 16;
  policy.seed = 7;
  for (auto _ : state) {
    msreg::PredictionModel pm = msreg::train_pm(x, y, k, spec, policy);
    benchmark::DoNotOptimize(pm.k);
  }
}
BENCHMARK(bm_train_pm)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
