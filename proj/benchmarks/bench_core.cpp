#include <benchmark/benchmark.h>

#include <map>

#include "trustsage/community.hpp"
#include "trustsage/rng.hpp"
#include "trustsage/sage.hpp"
#include "trustsage/sampler.hpp"
#include "trustsage/synth.hpp"
#include "trustsage/tsm.hpp"

using namespace trustsage;

namespace {

const SbmGraph& sbm(std::size_t communities) {
  static std::map<std::size_t, SbmGraph> cache;
  auto it = cache.find(communities);
  if (it == cache.end()) {
    it = cache.emplace(communities, generate_sbm(SbmConfig::equal_blocks(
                                        communities, 250, 0.06, 0.003, 1)))
             .first;
  }
  return it->second;
}

}  // namespace

static void BM_Tsm(benchmark::State& state) {
  const auto& g = sbm(static_cast<std::size_t>(state.range(0))).graph;
  for (auto _ : state) benchmark::DoNotOptimize(compute_tsm(g));
  state.counters["edges"] = static_cast<double>(g.edge_count());
}
BENCHMARK(BM_Tsm)->Arg(4)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_Louvain(benchmark::State& state) {
  const auto& g = sbm(static_cast<std::size_t>(state.range(0))).graph;
  for (auto _ : state) benchmark::DoNotOptimize(louvain(g));
}
BENCHMARK(BM_Louvain)->Arg(4)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_Sample(benchmark::State& state) {
  const auto& g = sbm(20).graph;
  auto w = normalize_weights(g, compute_believability(g, compute_tsm(g)).values);
  SamplerConfig cfg;
  cfg.depth = static_cast<int>(state.range(0));
  NodeId root = 0;
  for (auto _ : state) {
    cfg.seed++;
    benchmark::DoNotOptimize(sample(root, w, cfg));
    root = (root + 1) % g.node_count();
  }
}
BENCHMARK(BM_Sample)->Arg(1)->Arg(2);

static void BM_ForwardBackward(benchmark::State& state) {
  const auto& g = sbm(20).graph;
  auto scores = compute_tsm(g);
  auto w = normalize_weights(g, compute_believability(g, scores).values);
  auto x = build_features(scores, nullptr, FeatureStrategy::top);
  const auto hidden = static_cast<std::size_t>(state.range(0));
  auto params = SageParams::random(2, hidden, 1, Aggregator::concat, 3);
  auto grad = SageParams::zeros(2, hidden, 1, Aggregator::concat);
  std::vector<SampledNeighborhood> nbhs;
  for (NodeId v = 0; v < 64; ++v) nbhs.push_back(sample(v, w, SamplerConfig{}));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        accumulate_gradient(nbhs[i++ % nbhs.size()], x, params, Label::spreader, grad));
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(16)->Arg(128);
BENCHMARK_MAIN();
