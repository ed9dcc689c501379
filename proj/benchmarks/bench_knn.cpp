#include <benchmark/benchmark.h>

#include "grec/knn.hpp"
#include "grec/synth.hpp"

namespace {

grec::EmbeddingSet make_dataset(std::int64_t rows) {
  grec::SyntheticSpec spec;
  spec.num_classes = static_cast<std::uint32_t>(rows / 8);
  spec.samples_per_class = 8;
  spec.dim = 16;
  spec.seed = 1;
  return grec::generate(spec);
}

void BM_BuildIndex(benchmark::State& state) {
  const auto backend = state.range(1) == 0 ? grec::Backend::brute_force : grec::Backend::vp_tree;
  const auto dataset = make_dataset(state.range(0));
  for (auto _ : state) {
    grec::NeighborIndex index(dataset, backend, grec::Distance::squared_euclidean);
    benchmark::DoNotOptimize(index.size());
  }
}
BENCHMARK(BM_BuildIndex)->Args({1024, 0})->Args({1024, 1})->Args({8192, 0})->Args({8192, 1});

void BM_QueryKnn(benchmark::State& state) {
  const auto backend = state.range(1) == 0 ? grec::Backend::brute_force : grec::Backend::vp_tree;
  const auto dataset = make_dataset(state.range(0));
  const grec::NeighborIndex index(dataset, backend, grec::Distance::squared_euclidean);
  std::uint32_t query = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.query(query, 8, true));
    query = (query + 1) % static_cast<std::uint32_t>(dataset.rows());
  }
}
BENCHMARK(BM_QueryKnn)
    ->Args({1024, 0})
    ->Args({1024, 1})
    ->Args({8192, 0})
    ->Args({8192, 1})
    ->Args({32768, 0})
    ->Args({32768, 1});

}  // namespace

BENCHMARK_MAIN();
