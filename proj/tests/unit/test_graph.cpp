#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "trustsage/error.hpp"
#include "trustsage/graph.hpp"

using namespace trustsage;
using oracle::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(LoadEdgeList, TwoRows) {
  TempDir dir;
  auto load = load_edge_list(dir.write("e.tsv", "a\tb\nb\tc\n"));
  EXPECT_EQ(load.graph.node_count(), 3u);
  EXPECT_EQ(load.graph.edge_count(), 2u);
  for (const auto& e : load.graph.edges()) EXPECT_EQ(e.weight, 1.0);
  EXPECT_EQ(load.graph.label(0), "a");
  EXPECT_EQ(load.graph.label(2), "c");
  EXPECT_TRUE(load.graph.find_edge(0, 1).has_value());
}

TEST(LoadEdgeList, EmptyFile) {
  TempDir dir;
  auto load = load_edge_list(dir.write("e.tsv", ""));
  EXPECT_EQ(load.graph.node_count(), 0u);
  EXPECT_EQ(load.graph.edge_count(), 0u);
}

TEST(LoadEdgeList, SelfLoopSkipped) {
  TempDir dir;
  auto load = load_edge_list(dir.write("e.tsv", "a\ta\n"));
  EXPECT_EQ(load.self_loops, 1u);
  EXPECT_EQ(load.graph.edge_count(), 0u);
}

TEST(LoadEdgeList, DuplicateKeepsFirst) {
  TempDir dir;
  auto load = load_edge_list(dir.write("e.tsv", "a\tb\t2\na\tb\t5\nb\ta\n"));
  EXPECT_EQ(load.duplicate_edges, 1u);
  ASSERT_EQ(load.graph.edge_count(), 2u);
  EXPECT_EQ(load.graph.edge(*load.graph.find_edge(0, 1)).weight, 2.0);
}

TEST(LoadEdgeList, DefaultWeightAndComments) {
  TempDir dir;
  auto load = load_edge_list(dir.write("e.tsv", "# header\na\tb\n\nb\tc\t0.25\r\n"), 3.0);
  EXPECT_EQ(load.graph.edge(*load.graph.find_edge(0, 1)).weight, 3.0);
  EXPECT_EQ(load.graph.edge(*load.graph.find_edge(1, 2)).weight, 0.25);
}

TEST(LoadEdgeList, MalformedRowReportsLine) {
  TempDir dir;
  auto path = dir.write("e.tsv", "a\tb\nonlyone\n");
  try {
    load_edge_list(path);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_edge_list(dir.write("w.tsv", "a\tb\tx1\n")), InputError);
}

TEST(LoadEdgeList, NegativeWeightRejected) {
  TempDir dir;
  EXPECT_THROW(load_edge_list(dir.write("e.tsv", "a\tb\t-1\n")), InputError);
}

TEST(LoadEdgeList, MissingFile) {
  EXPECT_THROW(load_edge_list("/nonexistent/edges.tsv"), InputError);
}

TEST(SaveEdgeList, TwoEdgesTwoRows) {
  TempDir dir;
  auto g = oracle::make_graph(3, {{0, 1}, {1, 2}});
  save_edge_list(g, dir.file("out.tsv"));
  EXPECT_EQ(slurp(dir.file("out.tsv")), "0\t1\t1\n1\t2\t1\n");
}

TEST(SaveEdgeList, EmptyGraphEmptyFile) {
  TempDir dir;
  save_edge_list(DirectedGraph(), dir.file("out.tsv"));
  EXPECT_EQ(slurp(dir.file("out.tsv")), "");
}

TEST(SaveEdgeList, RandomRoundTrip) {
  TempDir dir;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> w(0.0, 10.0);
  std::vector<EdgeView> edges;
  std::vector<std::string> labels;
  for (int i = 0; i < 40; ++i) labels.push_back("user_" + std::to_string(1000 - i));
  while (edges.size() < 100) {
    NodeId s = gen() % 40, d = gen() % 40;
    if (s == d) continue;
    bool dup = false;
    for (const auto& e : edges) dup = dup || (e.src == s && e.dst == d);
    if (!dup) edges.push_back({s, d, w(gen)});
  }
  DirectedGraph g(40, edges, labels);
  save_edge_list(g, dir.file("e.tsv"));
  save_labels(g, dir.file("labels.tsv"));
  auto back = load_edge_list(dir.file("e.tsv"), 1.0, dir.file("labels.tsv")).graph;
  ASSERT_EQ(back.node_count(), g.node_count());
  EXPECT_EQ(back.labels(), g.labels());
  EXPECT_EQ(back.edges(), g.edges());

  // without the label table the ids change but the labelled edge set is the same
  auto relabelled = load_edge_list(dir.file("e.tsv")).graph;
  ASSERT_EQ(relabelled.edge_count(), g.edge_count());
  for (const auto& e : g.edges()) {
    auto s = relabelled.find_node(g.label(e.src));
    auto d = relabelled.find_node(g.label(e.dst));
    ASSERT_TRUE(s && d);
    auto id = relabelled.find_edge(*s, *d);
    ASSERT_TRUE(id.has_value());
    EXPECT_EQ(relabelled.edge(*id).weight, e.weight);
  }
}

TEST(DirectedGraph, NeighborOrdering) {
  auto g = oracle::make_graph(4, {{0, 3}, {0, 1}});
  auto out = g.out_neighbors(0);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].dst, 1u);
  EXPECT_EQ(out[1].dst, 3u);
  EXPECT_TRUE(g.out_neighbors(2).empty());
  EXPECT_TRUE(g.in_neighbors(2).empty());
  EXPECT_EQ(g.in_neighbors(3).front().src, 0u);
  EXPECT_THROW(g.out_neighbors(9), InputError);
}

TEST(DirectedGraph, DegreeSumsMatchEdgeCount) {
  auto g = oracle::random_graph(60, 0.08, 3);
  std::size_t out = 0, in = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out += g.out_neighbors(v).size();
    in += g.in_degree(v);
    EXPECT_EQ(g.out_degree(v), g.out_neighbors(v).size());
  }
  EXPECT_EQ(out, g.edge_count());
  EXPECT_EQ(in, g.edge_count());
}

TEST(DirectedGraph, ArcsShareEdgeIds) {
  auto g = oracle::random_graph(30, 0.2, 5);
  auto edges = g.edges();
  for (std::size_t i = 1; i < edges.size(); ++i) {
    EXPECT_TRUE(std::pair(edges[i - 1].src, edges[i - 1].dst) <
                std::pair(edges[i].src, edges[i].dst));
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (const auto& arc : g.in_arcs(v)) {
      auto e = g.edge(arc.edge);
      EXPECT_EQ(e.src, arc.node);
      EXPECT_EQ(e.dst, v);
    }
  }
  EXPECT_EQ(g.out_neighbors(4), g.out_neighbors(4));
}

TEST(DirectedGraph, RejectsInvalidEdges) {
  std::vector<EdgeView> loop{{0, 0, 1.0}};
  EXPECT_THROW(DirectedGraph(2, loop), InputError);
  std::vector<EdgeView> dup{{0, 1, 1.0}, {0, 1, 2.0}};
  EXPECT_THROW(DirectedGraph(2, dup), InputError);
  std::vector<EdgeView> neg{{0, 1, -0.5}};
  EXPECT_THROW(DirectedGraph(2, neg), InputError);
  std::vector<EdgeView> range{{0, 5, 1.0}};
  EXPECT_THROW(DirectedGraph(2, range), InputError);
  std::vector<EdgeView> none;
  EXPECT_THROW(DirectedGraph(2, none, {"x", "x"}), InputError);
}

TEST(ResolveNode, LabelThenId) {
  DirectedGraph g(3, std::vector<EdgeView>{}, {"alice", "bob", "7"});
  EXPECT_EQ(resolve_node(g, "bob"), 1u);
  EXPECT_EQ(resolve_node(g, "7"), 2u);
  EXPECT_EQ(resolve_node(g, "0"), 0u);
  EXPECT_THROW(resolve_node(g, "nobody"), InputError);
}
