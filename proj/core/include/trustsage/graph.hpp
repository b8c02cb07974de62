#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace trustsage {

/// Dense node identity in [0, node_count).
using NodeId = std::uint32_t;

/// Edge direction convention used throughout the library: an edge b -> a
/// means "b follows a", so information posted by a reaches b.
struct EdgeView {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;

  friend bool operator==(const EdgeView&, const EdgeView&) = default;
};

/// One adjacency entry. `edge` is the id of the underlying edge, which is its
/// position in the (src, dst)-sorted edge order; in-arcs carry the same id as
/// the matching out-arc so per-edge arrays can be indexed from either side.
struct Arc {
  NodeId node = 0;
  double weight = 1.0;
  std::size_t edge = 0;
};

/// Immutable simple digraph with nonnegative weights, stored as two CSR
/// arrays (out and in). Adjacency lists are sorted by neighbour id.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Validates and indexes `edges`. Throws InputError on self-loops,
  /// duplicate (src, dst) pairs, negative or non-finite weights, out-of-range
  /// endpoints, or duplicate labels. Missing labels default to the decimal id.
  DirectedGraph(std::size_t node_count, std::span<const EdgeView> edges,
                std::vector<std::string> labels = {});

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return out_arcs_.size(); }

  std::span<const Arc> out_arcs(NodeId v) const;
  std::span<const Arc> in_arcs(NodeId v) const;
  std::size_t out_degree(NodeId v) const { return out_arcs(v).size(); }
  std::size_t in_degree(NodeId v) const { return in_arcs(v).size(); }

  /// Out-edges of v as (v, dst, w), ascending dst.
  std::vector<EdgeView> out_neighbors(NodeId v) const;
  /// In-edges of v as (src, v, w), ascending src.
  std::vector<EdgeView> in_neighbors(NodeId v) const;

  EdgeView edge(std::size_t id) const;
  std::vector<EdgeView> edges() const;
  std::optional<std::size_t> find_edge(NodeId src, NodeId dst) const;

  const std::string& label(NodeId v) const;
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<NodeId> find_node(std::string_view label) const;

  /// Throws InputError unless v < node_count().
  void check_node(NodeId v) const;

 private:
  std::size_t node_count_ = 0;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeId> edge_src_;
  std::vector<Arc> out_arcs_;
  std::vector<Arc> in_arcs_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_index_;
};

/// Incremental construction with label interning, keep-first duplicate
/// handling and self-loop skipping.
class GraphBuilder {
 public:
  enum class EdgeOutcome { added, duplicate, self_loop };

  NodeId add_node(std::string_view label);
  EdgeOutcome add_edge(NodeId src, NodeId dst, double weight);

  std::size_t node_count() const { return labels_.size(); }
  std::size_t duplicate_edges() const { return duplicates_; }
  std::size_t self_loops() const { return self_loops_; }

  DirectedGraph build() const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<EdgeView> edges_;
  std::unordered_set<std::uint64_t> seen_;
  std::size_t duplicates_ = 0;
  std::size_t self_loops_ = 0;
};

struct EdgeListLoad {
  DirectedGraph graph;
  std::size_t duplicate_edges = 0;
  std::size_t self_loops = 0;
};

/// Reads `src<TAB>dst[<TAB>weight]` rows. External labels are remapped to
/// dense ids in order of first appearance, or in the order given by
/// `label_table` (a labels.tsv file) when supplied, which preserves ids and
/// isolated nodes across a save/load round trip.
EdgeListLoad load_edge_list(const std::filesystem::path& path, double default_weight = 1.0,
                            const std::optional<std::filesystem::path>& label_table = {});

void save_edge_list(const DirectedGraph& g, const std::filesystem::path& path);

/// `dense_id<TAB>external_label`, one row per node.
void save_labels(const DirectedGraph& g, const std::filesystem::path& path);

/// Resolves a node given either its external label or, failing that, a dense id.
NodeId resolve_node(const DirectedGraph& g, std::string_view token);

}  // namespace trustsage
