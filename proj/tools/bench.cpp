// Compares the OpenMP kernels against the serial reference paths on a
// seeded synthetic workload. Run with --benchmark_filter=... to narrow.

#include <benchmark/benchmark.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fairtail/dataset.hpp"
#include "fairtail/recommenders.hpp"
#include "fairtail/reference.hpp"

namespace {

using namespace fairtail;

const InteractionMatrix& workload() {
  static InteractionMatrix matrix =
      build_matrix(generate_synthetic(400, 800, 60, 1.1, 20240229));
  return matrix;
}

RecommenderConfig knn_config() {
  RecommenderConfig config;
  config.algorithm = Algorithm::UserKnn;
  config.k = 40;
  config.n = 10;
  config.seed = 7;
  return config;
}

void BM_UserKnnFit_Parallel(benchmark::State& state) {
  const auto& matrix = workload();
  auto config = knn_config();
  for (auto _ : state) {
    FittedModel model = fit(config, matrix);
    benchmark::DoNotOptimize(model.neighbors.data());
  }
}
BENCHMARK(BM_UserKnnFit_Parallel);

void BM_UserKnnTopN_BruteForce(benchmark::State& state) {
  const auto& matrix = workload();
  auto config = knn_config();
  for (auto _ : state) {
    RecommendationSet recs = reference::user_knn_top_n(matrix, config);
    benchmark::DoNotOptimize(recs.lists.data());
  }
}
BENCHMARK(BM_UserKnnTopN_BruteForce);

void BM_RecommendAll_Parallel(benchmark::State& state) {
  const auto& matrix = workload();
  auto config = knn_config();
  FittedModel model = fit(config, matrix);
  for (auto _ : state) {
    RecommendationSet recs = recommend_all(model, config);
    benchmark::DoNotOptimize(recs.lists.data());
  }
}
BENCHMARK(BM_RecommendAll_Parallel);

void BM_RecommendAll_Serial(benchmark::State& state) {
  const auto& matrix = workload();
  auto config = knn_config();
  FittedModel model = fit(config, matrix);
  for (auto _ : state) {
    RecommendationSet recs = reference::recommend_all_serial(model, config);
    benchmark::DoNotOptimize(recs.lists.data());
  }
}
BENCHMARK(BM_RecommendAll_Serial);

void BM_NmfFit_Threads(benchmark::State& state) {
#ifdef _OPENMP
  omp_set_num_threads(static_cast<int>(state.range(0)));
#endif
  const auto& matrix = workload();
  RecommenderConfig config;
  config.algorithm = Algorithm::Nmf;
  config.factors = 15;
  config.epochs = 10;
  config.seed = 7;
  for (auto _ : state) {
    FittedModel model = fit(config, matrix);
    benchmark::DoNotOptimize(model.user_factors.data());
  }
#ifdef _OPENMP
  omp_set_num_threads(omp_get_num_procs());
#endif
}
BENCHMARK(BM_NmfFit_Threads)->Arg(1)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
