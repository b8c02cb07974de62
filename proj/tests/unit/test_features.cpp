#include <gtest/gtest.h>

#include <numeric>

#include "oracles.hpp"
#include "trustsage/error.hpp"
#include "trustsage/features.hpp"
#include "trustsage/tsm.hpp"

using namespace trustsage;

TEST(Features, ActivityArithmetic) {
  TrustScores s;
  s.trustingness = {0.1, 0.2, 0.3};
  s.trustworthiness = {0.4, 0.5, 0.6};
  ActivityTable t(3);
  t.records[0] = ActivityRecord{10, 4, 20.0};
  t.records[1] = ActivityRecord{0, 0, 0.0};
  auto x = build_features(s, &t, FeatureStrategy::act);
  EXPECT_DOUBLE_EQ(x.row(0)[0], 0.4);
  EXPECT_DOUBLE_EQ(x.row(0)[1], 2.0);
  EXPECT_EQ(x.row(1)[0], 0.0);
  EXPECT_EQ(x.row(1)[1], 0.0);
  EXPECT_EQ(x.row(2)[0], 0.0);
  EXPECT_EQ(x.flagged_nodes, 2u);
  EXPECT_EQ(x.missing_records, 1u);
  EXPECT_THROW(build_features(s, nullptr, FeatureStrategy::act), InputError);
}

TEST(Features, TopPassesScoresThrough) {
  auto g = oracle::random_graph(40, 0.1, 8);
  auto s = compute_tsm(g);
  auto x = build_features(s, nullptr, FeatureStrategy::top);
  ASSERT_EQ(x.rows(), 40u);
  for (NodeId v = 0; v < 40; ++v) {
    EXPECT_EQ(x.row(v)[0], s.trustingness[v]);
    EXPECT_EQ(x.row(v)[1], s.trustworthiness[v]);
  }
}

TEST(SamplingWeights, NormalizesOutWeights) {
  auto g = oracle::make_graph(4, {{0, 1}, {0, 2}, {1, 2}, {3, 0}, {3, 1}});
  // edge ids follow (src, dst) order: 0->1, 0->2, 1->2, 3->0, 3->1
  std::vector<double> raw{2.0, 3.0, 5.0, 0.0, 0.0};
  auto w = normalize_weights(g, raw);
  ASSERT_EQ(w.targets_of(0).size(), 2u);
  EXPECT_DOUBLE_EQ(w.probabilities_of(0)[0], 0.4);
  EXPECT_DOUBLE_EQ(w.probabilities_of(0)[1], 0.6);
  EXPECT_EQ(w.probabilities_of(1)[0], 1.0);
  EXPECT_TRUE(w.targets_of(2).empty());
  EXPECT_TRUE(w.targets_of(3).empty());
  EXPECT_EQ(w.flagged_nodes, 2u);  // nodes 2 and 3

  raw[1] = -1.0;
  EXPECT_THROW(normalize_weights(g, raw), InputError);
  raw.pop_back();
  EXPECT_THROW(normalize_weights(g, raw), InputError);
}

TEST(SamplingWeights, ZeroWeightTargetsDropped) {
  auto g = oracle::make_graph(3, {{0, 1}, {0, 2}});
  auto w = normalize_weights(g, std::vector<double>{0.0, 4.0});
  ASSERT_EQ(w.targets_of(0).size(), 1u);
  EXPECT_EQ(w.targets_of(0)[0], 2u);
  EXPECT_EQ(w.probabilities_of(0)[0], 1.0);
}

TEST(SamplingWeights, InDirection) {
  auto g = oracle::make_graph(3, {{0, 2}, {1, 2}});
  auto w = normalize_weights(g, std::vector<double>{1.0, 3.0}, SampleDirection::in);
  ASSERT_EQ(w.targets_of(2).size(), 2u);
  EXPECT_DOUBLE_EQ(w.probabilities_of(2)[0], 0.25);
  EXPECT_DOUBLE_EQ(w.probabilities_of(2)[1], 0.75);
}

TEST(SamplingWeights, TopModeRecomputesFromBelievability) {
  auto g = oracle::random_graph(60, 0.1, 12);
  auto s = compute_tsm(g);
  auto bel = compute_believability(g, s);
  auto w = normalize_weights(g, bel.values);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    double total = 0.0;
    for (const auto& arc : g.out_arcs(v)) total += bel.values[arc.edge];
    auto targets = w.targets_of(v);
    auto probs = w.probabilities_of(v);
    if (total == 0.0) {
      EXPECT_TRUE(targets.empty());
      continue;
    }
    EXPECT_NEAR(std::accumulate(probs.begin(), probs.end(), 0.0), 1.0, 1e-9);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const double expected = bel.values[*g.find_edge(v, targets[i])] / total;
      EXPECT_EQ(probs[i], expected);
      EXPECT_GE(probs[i], 0.0);
      EXPECT_LE(probs[i], 1.0);
    }
  }
}

TEST(ActivityFiles, ParseAndRoundTrip) {
  oracle::TempDir dir;
  auto g = oracle::make_graph(3, {{0, 1}, {1, 2}});
  dir.write("a.csv", "node,n_t,retweet_count,times_retweeted_total\n0,10,4,20\n2,5,5,1.5\n");
  dir.write("rt.csv", "x,v,rt_count\n0,1,3\n2,0,9\n");
  auto t = load_activity(g, dir.file("a.csv"), dir.file("rt.csv"));
  ASSERT_TRUE(t.records[0].has_value());
  EXPECT_EQ(t.records[0]->retweet_count, 4u);
  EXPECT_FALSE(t.records[1].has_value());
  EXPECT_EQ(t.records[2]->times_retweeted_total, 1.5);
  auto rt = retweet_edge_weights(g, t);
  EXPECT_EQ(rt[*g.find_edge(0, 1)], 3.0);
  EXPECT_EQ(rt[*g.find_edge(1, 2)], 0.0);

  save_activity(g, t, dir.file("a2.csv"), dir.file("rt2.csv"));
  auto t2 = load_activity(g, dir.file("a2.csv"), dir.file("rt2.csv"));
  EXPECT_EQ(retweet_edge_weights(g, t2), rt);
  EXPECT_EQ(t2.records[2]->timeline_size, 5u);

  dir.write("bad.csv", "0,3,4,1\n");
  EXPECT_THROW(load_activity(g, dir.file("bad.csv")), InputError);
  dir.write("neg.csv", "0,3,1,-1\n");
  EXPECT_THROW(load_activity(g, dir.file("neg.csv")), InputError);
}

TEST(FeatureFiles, RoundTrip) {
  oracle::TempDir dir;
  auto g = oracle::random_graph(30, 0.2, 6);
  auto s = compute_tsm(g);
  auto x = build_features(s, nullptr, FeatureStrategy::top);
  save_features(g, x, dir.file("f.tsv"));
  auto back = load_features(g, dir.file("f.tsv"), FeatureStrategy::top);
  EXPECT_EQ(back.values, x.values);

  auto w = normalize_weights(g, compute_believability(g, s).values);
  save_sampling_weights(g, w, dir.file("w.tsv"));
  auto w2 = load_sampling_weights(g, dir.file("w.tsv"));
  EXPECT_EQ(w2.offsets, w.offsets);
  EXPECT_EQ(w2.targets, w.targets);
  EXPECT_EQ(w2.probabilities, w.probabilities);
}

TEST(FeatureStrategy, Parse) {
  EXPECT_EQ(parse_feature_strategy("act"), FeatureStrategy::act);
  EXPECT_EQ(to_string(FeatureStrategy::top), "top");
  EXPECT_THROW(parse_feature_strategy("rand"), InputError);
}
