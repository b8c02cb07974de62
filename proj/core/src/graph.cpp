#include "trustsage/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trustsage/error.hpp"
#include "trustsage/tsv.hpp"

namespace trustsage {

namespace {

std::uint64_t edge_key(NodeId src, NodeId dst) {
  return (static_cast<std::uint64_t>(src) << 32) | dst;
}

}  // namespace

DirectedGraph::DirectedGraph(std::size_t node_count, std::span<const EdgeView> edges,
                             std::vector<std::string> labels)
    : node_count_(node_count), labels_(std::move(labels)) {
  if (labels_.empty()) {
    labels_.reserve(node_count);
    for (std::size_t v = 0; v < node_count; ++v) labels_.push_back(std::to_string(v));
  }
  if (labels_.size() != node_count) {
    throw InputError("label table has " + std::to_string(labels_.size()) + " entries for " +
                     std::to_string(node_count) + " nodes");
  }
  label_index_.reserve(node_count);
  for (std::size_t v = 0; v < node_count; ++v) {
    if (!label_index_.emplace(labels_[v], static_cast<NodeId>(v)).second) {
      throw InputError("duplicate node label '" + labels_[v] + "'");
    }
  }

  std::vector<EdgeView> sorted(edges.begin(), edges.end());
  for (const auto& e : sorted) {
    if (e.src >= node_count || e.dst >= node_count) {
      throw InputError("edge endpoint out of range: " + std::to_string(e.src) + " -> " +
                       std::to_string(e.dst));
    }
    if (e.src == e.dst) throw InputError("self-loop on node " + labels_[e.src]);
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw InputError("invalid weight on edge " + labels_[e.src] + " -> " + labels_[e.dst]);
    }
  }
  std::sort(sorted.begin(), sorted.end(), [](const EdgeView& a, const EdgeView& b) {
    return edge_key(a.src, a.dst) < edge_key(b.src, b.dst);
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].src == sorted[i - 1].src && sorted[i].dst == sorted[i - 1].dst) {
      throw InputError("duplicate edge " + labels_[sorted[i].src] + " -> " +
                       labels_[sorted[i].dst]);
    }
  }

  const std::size_t m = sorted.size();
  out_offsets_.assign(node_count + 1, 0);
  in_offsets_.assign(node_count + 1, 0);
  for (const auto& e : sorted) {
    ++out_offsets_[e.src + 1];
    ++in_offsets_[e.dst + 1];
  }
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());

  out_arcs_.resize(m);
  in_arcs_.resize(m);
  edge_src_.resize(m);
  std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  // Sorted by (src, dst), so filling in-lists in edge order leaves each one
  // sorted by src.
  for (std::size_t id = 0; id < m; ++id) {
    const auto& e = sorted[id];
    out_arcs_[id] = Arc{e.dst, e.weight, id};
    edge_src_[id] = e.src;
    in_arcs_[in_fill[e.dst]++] = Arc{e.src, e.weight, id};
  }
}

void DirectedGraph::check_node(NodeId v) const {
  if (v >= node_count_) {
    throw InputError("invalid node id " + std::to_string(v) + " (graph has " +
                     std::to_string(node_count_) + " nodes)");
  }
}

std::span<const Arc> DirectedGraph::out_arcs(NodeId v) const {
  check_node(v);
  return {out_arcs_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
}

std::span<const Arc> DirectedGraph::in_arcs(NodeId v) const {
  check_node(v);
  return {in_arcs_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
}

std::vector<EdgeView> DirectedGraph::out_neighbors(NodeId v) const {
  std::vector<EdgeView> result;
  for (const auto& a : out_arcs(v)) result.push_back({v, a.node, a.weight});
  return result;
}

std::vector<EdgeView> DirectedGraph::in_neighbors(NodeId v) const {
  std::vector<EdgeView> result;
  for (const auto& a : in_arcs(v)) result.push_back({a.node, v, a.weight});
  return result;
}

EdgeView DirectedGraph::edge(std::size_t id) const {
  if (id >= out_arcs_.size()) throw InputError("invalid edge id " + std::to_string(id));
  return {edge_src_[id], out_arcs_[id].node, out_arcs_[id].weight};
}

std::vector<EdgeView> DirectedGraph::edges() const {
  std::vector<EdgeView> result;
  result.reserve(edge_count());
  for (std::size_t id = 0; id < edge_count(); ++id) result.push_back(edge(id));
  return result;
}

std::optional<std::size_t> DirectedGraph::find_edge(NodeId src, NodeId dst) const {
  auto arcs = out_arcs(src);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), dst,
                             [](const Arc& a, NodeId target) { return a.node < target; });
  if (it == arcs.end() || it->node != dst) return std::nullopt;
  return it->edge;
}

const std::string& DirectedGraph::label(NodeId v) const {
  check_node(v);
  return labels_[v];
}

std::optional<NodeId> DirectedGraph::find_node(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

NodeId GraphBuilder::add_node(std::string_view label) {
  auto [it, inserted] = index_.emplace(std::string(label), static_cast<NodeId>(labels_.size()));
  if (inserted) labels_.emplace_back(label);
  return it->second;
}

GraphBuilder::EdgeOutcome GraphBuilder::add_edge(NodeId src, NodeId dst, double weight) {
  if (src >= labels_.size() || dst >= labels_.size()) {
    throw InputError("edge endpoint was never added as a node");
  }
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw InputError("negative or invalid weight");
  if (src == dst) {
    ++self_loops_;
    return EdgeOutcome::self_loop;
  }
  if (!seen_.insert(edge_key(src, dst)).second) {
    ++duplicates_;
    return EdgeOutcome::duplicate;
  }
  edges_.push_back({src, dst, weight});
  return EdgeOutcome::added;
}

DirectedGraph GraphBuilder::build() const {
  return DirectedGraph(labels_.size(), edges_, labels_);
}

EdgeListLoad load_edge_list(const std::filesystem::path& path, double default_weight,
                            const std::optional<std::filesystem::path>& label_table) {
  if (!(default_weight >= 0.0)) throw InputError("default weight must be nonnegative");
  GraphBuilder builder;
  if (label_table) {
    std::size_t expected = 0;
    tsv::for_each_row(*label_table, '\t', [&](const auto& fields, std::size_t line) {
      const std::string where = label_table->string() + ":" + std::to_string(line);
      if (fields.size() != 2 || fields[1].empty()) throw InputError(where + ": malformed label row");
      if (tsv::parse_int(fields[0], where) != static_cast<long long>(expected)) {
        throw InputError(where + ": label table ids must be dense and ascending");
      }
      if (builder.add_node(fields[1]) != expected) {
        throw InputError(where + ": duplicate label '" + std::string(fields[1]) + "'");
      }
      ++expected;
    });
  }
  tsv::for_each_row(path, '\t', [&](const auto& fields, std::size_t line) {
    const std::string where = path.string() + ":" + std::to_string(line);
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() || fields[1].empty()) {
      throw InputError(where + ": malformed row, expected src<TAB>dst[<TAB>weight]");
    }
    double weight = default_weight;
    if (fields.size() == 3) {
      weight = tsv::parse_double(fields[2], where);
      if (weight < 0.0) throw InputError(where + ": negative weight");
    }
    NodeId src = builder.add_node(fields[0]);
    NodeId dst = builder.add_node(fields[1]);
    builder.add_edge(src, dst, weight);
  });
  return {builder.build(), builder.duplicate_edges(), builder.self_loops()};
}

void save_edge_list(const DirectedGraph& g, const std::filesystem::path& path) {
  auto out = tsv::open_output(path);
  for (std::size_t id = 0; id < g.edge_count(); ++id) {
    auto e = g.edge(id);
    out << g.label(e.src) << '\t' << g.label(e.dst) << '\t' << tsv::format_double(e.weight)
        << '\n';
  }
  if (!out) throw InputError("write failure on " + path.string());
}

void save_labels(const DirectedGraph& g, const std::filesystem::path& path) {
  auto out = tsv::open_output(path);
  for (NodeId v = 0; v < g.node_count(); ++v) out << v << '\t' << g.label(v) << '\n';
  if (!out) throw InputError("write failure on " + path.string());
}

NodeId resolve_node(const DirectedGraph& g, std::string_view token) {
  if (auto id = g.find_node(token)) return *id;
  long long dense = tsv::parse_int(token, "node '" + std::string(token) + "'");
  if (dense < 0 || static_cast<std::size_t>(dense) >= g.node_count()) {
    throw InputError("unknown node '" + std::string(token) + "'");
  }
  return static_cast<NodeId>(dense);
}

}  // namespace trustsage
