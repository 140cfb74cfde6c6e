#include <benchmark/benchmark.h>

#include "rankcount/rankgraph.hpp"
#include "rankcount/rng.hpp"
#include "rankcount/synthdata.hpp"
#include "rankcount/training.hpp"

using namespace rankcount;

namespace {

CountMap random_counts(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  CountMap counts;
  for (std::size_t k = 0; k < n; ++k) counts["i" + std::to_string(k)] = static_cast<std::int64_t>(1 + rng.index(1000));
  return counts;
}

FeatureTable random_features(const CountMap& counts, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  FeatureTable table;
  for (const auto& [id, c] : counts) {
    std::vector<double> f(dim);
    for (auto& x : f) x = static_cast<double>(c) + 50.0 * rng.normal();
    table[id] = std::move(f);
  }
  return table;
}

void BM_TransitiveClosure(benchmark::State& state) {
  const auto counts = random_counts(static_cast<std::size_t>(state.range(0)), 1);
  const auto pairs = autolabel_pairs(counts, 2.0, 4 * counts.size(), 2);
  for (auto _ : state) {
    RankGraph graph;
    for (const auto& p : pairs) (void)graph.add_pair(p);
    benchmark::DoNotOptimize(graph.transitive_closure());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TransitiveClosure)->Arg(100)->Arg(500)->Arg(2000);

void BM_ForwardBackward(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  auto model = PotentialModel::initialize({dim, 32, 16, 1}, 3);
  std::vector<double> x(dim, 0.5);
  std::vector<double> grad(model.parameter_count());
  for (auto _ : state) {
    const auto trace = forward_trace(model, x);
    accumulate_backward(model, trace, 1.0, grad);
    benchmark::DoNotOptimize(grad.data());
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(16)->Arg(256);

void BM_TrainEpoch(benchmark::State& state) {
  const auto counts = random_counts(200, 4);
  const auto features = random_features(counts, 16, 5);
  const auto pairs = autolabel_pairs(counts, 2.0, 1000, 6);
  const auto init = prepare_model(features, {}, 7);
  TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train(features, pairs, {}, cfg, init));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * pairs.size()));
}
BENCHMARK(BM_TrainEpoch);

}  // namespace
BENCHMARK_MAIN();
