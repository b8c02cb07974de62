#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "oracles.hpp"
#include "trustsage/error.hpp"
#include "trustsage/rng.hpp"
#include "trustsage/sampler.hpp"

using namespace trustsage;

namespace {

// root 0 with out-edges to 1..k carrying `raw` weights
SamplingWeights star(const std::vector<double>& raw) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 1; i <= raw.size(); ++i) edges.push_back({0, i});
  auto g = oracle::make_graph(raw.size() + 1, edges);
  return normalize_weights(g, raw);
}

}  // namespace

TEST(Sampler, DegenerateDistribution) {
  auto w = star({0.0, 1.0, 0.0});
  SamplerConfig cfg;
  cfg.sample_size = 1;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    cfg.seed = seed;
    auto nbh = sample(0, w, cfg);
    EXPECT_EQ(nbh.drawn_for(1, 0).size(), 1u);
    EXPECT_EQ(nbh.drawn_for(1, 0)[0], 2u);
  }
}

TEST(Sampler, ExhaustionTakesAllNeighbors) {
  auto w = star({1, 2, 3, 4});
  SamplerConfig cfg;
  cfg.sample_size = 25;
  auto nbh = sample(0, w, cfg);
  EXPECT_EQ(std::vector<NodeId>(nbh.drawn_for(1, 0).begin(), nbh.drawn_for(1, 0).end()),
            std::vector<NodeId>({1, 2, 3, 4}));
  EXPECT_EQ(nbh.hops[1], std::vector<NodeId>({0, 1, 2, 3, 4}));
}

TEST(Sampler, FirstPickFrequencies) {
  auto w = star({0.5, 0.3, 0.2});
  const std::vector<NodeId> cand{1, 2, 3};
  const std::vector<double> probs{0.5, 0.3, 0.2};
  Rng rng(99);
  std::vector<double> counts(3, 0.0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    auto pick = draw_without_replacement(cand, probs, 1, SamplerMode::weighted, rng);
    counts[pick[0] - 1] += 1.0;
  }
  double tv = 0.0;
  for (int i = 0; i < 3; ++i) tv += std::abs(counts[i] / draws - probs[i]);
  EXPECT_LT(tv / 2.0, 0.01);
}

TEST(Sampler, WithoutReplacementAndInvariants) {
  auto g = oracle::random_graph(40, 0.2, 5);
  std::vector<double> raw(g.edge_count());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = 1.0 + static_cast<double>(i % 7);
  auto w = normalize_weights(g, raw);
  SamplerConfig cfg;
  cfg.depth = 2;
  cfg.sample_size = 3;
  cfg.seed = 4;
  for (NodeId root = 0; root < 40; ++root) {
    auto nbh = sample(root, w, cfg);
    ASSERT_EQ(nbh.depth(), 2);
    EXPECT_EQ(nbh.hops[0], std::vector<NodeId>({root}));
    for (int k = 1; k <= 2; ++k) {
      const auto& prev = nbh.hops[k - 1];
      const auto& cur = nbh.hops[k];
      EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
      EXPECT_TRUE(std::is_sorted(cur.begin(), cur.end()));
      std::set<NodeId> expect(prev.begin(), prev.end());
      for (NodeId u : prev) {
        auto drawn = nbh.drawn_for(k, u);
        std::set<NodeId> unique(drawn.begin(), drawn.end());
        EXPECT_EQ(unique.size(), drawn.size());
        EXPECT_LE(drawn.size(), 3u);
        EXPECT_EQ(drawn.size(), std::min<std::size_t>(3, w.targets_of(u).size()));
        for (NodeId d : drawn) {
          EXPECT_TRUE(g.find_edge(u, d).has_value());
          expect.insert(d);
        }
      }
      EXPECT_EQ(std::vector<NodeId>(expect.begin(), expect.end()), cur);
    }
  }
}

TEST(Sampler, DeterministicAndSeedSensitive) {
  std::vector<double> raw(20);
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = 1.0 + static_cast<double>(i);
  auto w = star(raw);
  SamplerConfig cfg;
  cfg.sample_size = 5;
  cfg.seed = 1;
  auto a = sample(0, w, cfg);
  auto b = sample(0, w, cfg);
  EXPECT_EQ(a.hops, b.hops);
  bool differs = false;
  for (std::uint64_t s = 2; s < 10 && !differs; ++s) {
    cfg.seed = s;
    differs = sample(0, w, cfg).hops != a.hops;
  }
  EXPECT_TRUE(differs);
}

TEST(Sampler, UniformMatchesWeightedOnEqualWeights) {
  auto w = star(std::vector<double>(10, 1.0));
  const int draws = 10000;
  // chi-square critical value, 9 degrees of freedom, alpha = 0.01
  const double critical = 21.666;
  for (auto mode : {SamplerMode::weighted, SamplerMode::uniform}) {
    SamplerConfig cfg;
    cfg.sample_size = 1;
    cfg.mode = mode;
    std::vector<double> counts(10, 0.0);
    for (int i = 0; i < draws; ++i) {
      cfg.seed = static_cast<std::uint64_t>(i);
      counts[sample(0, w, cfg).drawn_for(1, 0)[0] - 1] += 1.0;
    }
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - draws / 10.0) * (c - draws / 10.0) / (draws / 10.0);
    EXPECT_LT(chi2, critical) << (mode == SamplerMode::uniform ? "uniform" : "weighted");
  }
}

TEST(Sampler, EmptyDistributionYieldsRootOnly) {
  auto w = star({0.0, 0.0});
  auto nbh = sample(0, w, SamplerConfig{});
  EXPECT_EQ(nbh.hops[1], std::vector<NodeId>({0}));
  EXPECT_TRUE(nbh.drawn_for(1, 0).empty());
  // uniform mode draws from the same (empty) support
  SamplerConfig u;
  u.mode = SamplerMode::uniform;
  EXPECT_EQ(sample(0, w, u).hops[1], std::vector<NodeId>({0}));
}

TEST(Sampler, StreamsIndependentOfRootOrder) {
  auto g = oracle::random_graph(30, 0.3, 8);
  auto w = normalize_weights(g, std::vector<double>(g.edge_count(), 1.0));
  SamplerConfig cfg;
  cfg.sample_size = 4;
  cfg.seed = 17;
  std::map<NodeId, SampledNeighborhood> forward_order, backward_order;
  for (NodeId r = 0; r < 30; ++r) forward_order[r] = sample(r, w, cfg);
  for (NodeId r = 30; r-- > 0;) backward_order[r] = sample(r, w, cfg);
  for (NodeId r = 0; r < 30; ++r) EXPECT_EQ(forward_order[r].hops, backward_order[r].hops);
}

TEST(Sampler, ConfigValidation) {
  auto w = star({1.0});
  SamplerConfig cfg;
  cfg.depth = 0;
  EXPECT_THROW(sample(0, w, cfg), InputError);
  cfg = {};
  cfg.sample_size = 0;
  EXPECT_THROW(sample(0, w, cfg), InputError);
  EXPECT_THROW(sample(7, w, SamplerConfig{}), InputError);
  EXPECT_EQ(parse_sampler_mode("uniform"), SamplerMode::uniform);
  EXPECT_THROW(parse_sampler_mode("greedy"), InputError);
}
