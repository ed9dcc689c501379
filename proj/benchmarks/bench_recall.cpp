#include <benchmark/benchmark.h>

#include "grec/metrics.hpp"
#include "grec/synth.hpp"

namespace {

grec::EmbeddingSet make_dataset(std::int64_t rows) {
  grec::SyntheticSpec spec;
  spec.num_classes = static_cast<std::uint32_t>(rows / 8);
  spec.samples_per_class = 8;
  spec.dim = 16;
  spec.seed = 2;
  return grec::generate(spec);
}

// Full-dataset leave-one-out recall: the gallery grows with n.
void BM_PlainRecall(benchmark::State& state) {
  const auto dataset = make_dataset(state.range(0));
  grec::EvalConfig config;
  config.k = 1;
  config.backend = state.range(1) == 0 ? grec::Backend::brute_force : grec::Backend::vp_tree;
  for (auto _ : state) {
    benchmark::DoNotOptimize(grec::recall_at_k(dataset, config).value);
  }
}
BENCHMARK(BM_PlainRecall)
    ->Args({2048, 0})
    ->Args({2048, 1})
    ->Args({8192, 0})
    ->Args({8192, 1})
    ->Unit(benchmark::kMillisecond);

// Grouped recall at fixed group size: per-group cost stays constant.
void BM_GroupedRecall(benchmark::State& state) {
  const auto dataset = make_dataset(state.range(0));
  grec::EvalConfig config;
  config.k = 1;
  config.group_size = 4;
  config.seed = 3;
  config.backend = state.range(1) == 0 ? grec::Backend::brute_force : grec::Backend::vp_tree;
  for (auto _ : state) {
    benchmark::DoNotOptimize(grec::grouped_recall(dataset, config).value);
  }
}
BENCHMARK(BM_GroupedRecall)
    ->Args({2048, 0})
    ->Args({2048, 1})
    ->Args({8192, 0})
    ->Args({8192, 1})
    ->Args({32768, 0})
    ->Args({32768, 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace
