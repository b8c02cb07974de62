#include "trustsage/community.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "trustsage/error.hpp"
#include "trustsage/rng.hpp"
#include "trustsage/tsv.hpp"

namespace trustsage {

namespace {

/// Undirected weighted graph used inside Louvain. Self-loops hold the
/// internal weight of coarsened communities (A_ii counts both directions).
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
  std::vector<double> degree;
  double total = 0.0;  // 2m

  std::size_t size() const { return adj.size(); }
};

void finalize(WeightedGraph& wg) {
  wg.degree.assign(wg.size(), 0.0);
  wg.total = 0.0;
  for (std::size_t i = 0; i < wg.size(); ++i) {
    auto& list = wg.adj[i];
    std::sort(list.begin(), list.end());
    std::size_t out = 0;
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (out > 0 && list[out - 1].first == list[k].first) {
        list[out - 1].second += list[k].second;
      } else {
        list[out++] = list[k];
      }
    }
    list.resize(out);
    for (const auto& [j, w] : list) wg.degree[i] += w;
    wg.total += wg.degree[i];
  }
}

WeightedGraph symmetrize(const DirectedGraph& g) {
  WeightedGraph wg;
  wg.adj.resize(g.node_count());
  for (const auto& e : g.edges()) {
    wg.adj[e.src].emplace_back(e.dst, e.weight);
    wg.adj[e.dst].emplace_back(e.src, e.weight);
  }
  finalize(wg);
  return wg;
}

double modularity_of(const WeightedGraph& wg, std::span<const CommunityId> assignment,
                     double resolution) {
  if (wg.total <= 0.0) return 0.0;
  std::size_t count = 0;
  for (auto c : assignment) count = std::max<std::size_t>(count, c + 1);
  std::vector<double> internal(count, 0.0), tot(count, 0.0);
  for (std::size_t i = 0; i < wg.size(); ++i) {
    tot[assignment[i]] += wg.degree[i];
    for (const auto& [j, w] : wg.adj[i]) {
      if (assignment[j] == assignment[i]) internal[assignment[i]] += w;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < count; ++c) {
    const double frac = tot[c] / wg.total;
    q += internal[c] / wg.total - resolution * frac * frac;
  }
  return q;
}

/// Relabels to contiguous ids in order of first appearance; returns the count.
std::size_t compact(std::vector<CommunityId>& labels) {
  std::unordered_map<CommunityId, CommunityId> remap;
  for (auto& c : labels) {
    auto [it, inserted] = remap.emplace(c, static_cast<CommunityId>(remap.size()));
    c = it->second;
  }
  return remap.size();
}

/// Local-move phase. Returns true if any node changed community.
bool local_moves(const WeightedGraph& wg, double resolution, Rng& rng,
                 std::vector<CommunityId>& comm) {
  const std::size_t n = wg.size();
  comm.resize(n);
  std::iota(comm.begin(), comm.end(), 0);
  std::vector<double> tot(wg.degree);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<NodeId>(order));

  const double two_m = wg.total;
  const double m = two_m / 2.0;
  std::vector<double> link(n, 0.0);
  std::vector<CommunityId> touched;
  bool any_move = false;

  // Each sweep strictly increases modularity if it moves anything, so the
  // cap only guards against floating-point ping-pong.
  for (int sweep = 0; sweep < 1000; ++sweep) {
    bool moved = false;
    for (NodeId i : order) {
      const CommunityId own = comm[i];
      const double k_i = wg.degree[i];
      touched.clear();
      touched.push_back(own);
      link[own] = 0.0;
      for (const auto& [j, w] : wg.adj[i]) {
        if (j == i) continue;
        const CommunityId c = comm[j];
        if (link[c] == 0.0 && std::find(touched.begin(), touched.end(), c) == touched.end()) {
          touched.push_back(c);
        }
        link[c] += w;
      }
      tot[own] -= k_i;

      auto gain = [&](CommunityId c) {
        return (link[c] - resolution * tot[c] * k_i / two_m) / m;
      };
      const double stay = gain(own);
      std::sort(touched.begin(), touched.end());
      CommunityId best = own;
      double best_gain = -std::numeric_limits<double>::infinity();
      for (CommunityId c : touched) {
        if (c == own) continue;
        const double gc = gain(c);
        if (gc > best_gain) {
          best_gain = gc;
          best = c;
        }
      }
      if (best == own || !(best_gain > stay + 1e-12)) best = own;

      tot[best] += k_i;
      if (best != own) {
        comm[i] = best;
        moved = true;
      }
      for (CommunityId c : touched) link[c] = 0.0;
    }
    if (!moved) break;
    any_move = true;
  }
  return any_move;
}

WeightedGraph coarsen(const WeightedGraph& wg, std::span<const CommunityId> comm,
                      std::size_t count) {
  WeightedGraph next;
  next.adj.resize(count);
  for (std::size_t i = 0; i < wg.size(); ++i) {
    for (const auto& [j, w] : wg.adj[i]) next.adj[comm[i]].emplace_back(comm[j], w);
  }
  finalize(next);
  return next;
}

}  // namespace

void LouvainConfig::validate() const {
  if (!(resolution > 0.0)) throw InputError("louvain resolution must be positive");
  if (max_passes < 1) throw InputError("louvain max_passes must be at least 1");
}

std::vector<std::vector<NodeId>> CommunityPartition::members() const {
  std::vector<std::vector<NodeId>> result(community_count);
  for (NodeId v = 0; v < assignment.size(); ++v) result[assignment[v]].push_back(v);
  return result;
}

CommunityPartition make_partition(std::span<const std::uint64_t> labels) {
  CommunityPartition p;
  std::unordered_map<std::uint64_t, CommunityId> remap;
  p.assignment.reserve(labels.size());
  for (auto label : labels) {
    auto [it, inserted] = remap.emplace(label, static_cast<CommunityId>(remap.size()));
    p.assignment.push_back(it->second);
  }
  p.community_count = remap.size();
  return p;
}

double modularity(const DirectedGraph& g, std::span<const CommunityId> assignment,
                  double resolution) {
  if (assignment.size() != g.node_count()) {
    throw InputError("partition size does not match graph");
  }
  return modularity_of(symmetrize(g), assignment, resolution);
}

CommunityPartition louvain(const DirectedGraph& g, const LouvainConfig& cfg) {
  cfg.validate();
  if (g.node_count() == 0) throw InputError("louvain requires a nonempty graph");
  const WeightedGraph base = symmetrize(g);

  CommunityPartition result;
  result.assignment.resize(g.node_count());
  std::iota(result.assignment.begin(), result.assignment.end(), 0);
  result.pass_modularity.push_back(modularity_of(base, result.assignment, cfg.resolution));

  if (base.total > 0.0) {
    WeightedGraph level = base;
    for (int pass = 0; pass < cfg.max_passes; ++pass) {
      Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(pass)));
      std::vector<CommunityId> comm;
      if (!local_moves(level, cfg.resolution, rng, comm)) break;
      const std::size_t count = compact(comm);
      for (auto& c : result.assignment) c = comm[c];
      result.pass_modularity.push_back(modularity_of(base, result.assignment, cfg.resolution));
      if (count == level.size()) break;
      level = coarsen(level, comm, count);
    }
  }
  result.community_count = compact(result.assignment);
  result.modularity = modularity_of(base, result.assignment, cfg.resolution);
  return result;
}

double normalized_mutual_information(std::span<const CommunityId> a,
                                     std::span<const CommunityId> b) {
  if (a.size() != b.size()) throw InputError("labelings differ in length");
  if (a.empty()) return 1.0;
  const double n = static_cast<double>(a.size());
  std::map<std::pair<CommunityId, CommunityId>, double> joint;
  std::map<CommunityId, double> pa, pb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    pa[a[i]] += 1.0;
    pb[b[i]] += 1.0;
  }
  auto entropy = [n](const std::map<CommunityId, double>& counts) {
    double h = 0.0;
    for (const auto& [label, c] : counts) h -= (c / n) * std::log(c / n);
    return h;
  };
  const double ha = entropy(pa);
  const double hb = entropy(pb);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    mi += (c / n) * std::log((c * n) / (pa[key.first] * pb[key.second]));
  }
  return 2.0 * mi / (ha + hb);
}

NeighborDirection parse_neighbor_direction(std::string_view text) {
  if (text == "either") return NeighborDirection::either;
  if (text == "in") return NeighborDirection::in;
  if (text == "out") return NeighborDirection::out;
  throw InputError("neighbor direction must be either|in|out, got '" + std::string(text) + "'");
}

std::string_view to_string(NeighborDirection dir) {
  switch (dir) {
    case NeighborDirection::either: return "either";
    case NeighborDirection::in: return "in";
    case NeighborDirection::out: return "out";
  }
  return "either";
}

std::string_view to_string(NodeRole role) {
  return role == NodeRole::boundary ? "boundary" : "core";
}

ChaPartition cha_partition(const DirectedGraph& g, const CommunityPartition& partition,
                           NeighborDirection dir) {
  if (partition.assignment.size() != g.node_count()) {
    throw InputError("partition covers " + std::to_string(partition.assignment.size()) +
                     " nodes, graph has " + std::to_string(g.node_count()));
  }
  ChaPartition cha;
  cha.community_of = partition.assignment;
  cha.role.assign(g.node_count(), NodeRole::core);
  cha.communities.resize(partition.community_count);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    cha.communities.at(partition.assignment[v]).members.push_back(v);
  }

  // stamp[x] == c + 1 marks x as a neighbour of community c.
  std::vector<std::size_t> stamp(g.node_count(), 0);
  for (CommunityId c = 0; c < cha.communities.size(); ++c) {
    auto& roles = cha.communities[c];
    const std::size_t mark = static_cast<std::size_t>(c) + 1;
    auto consider = [&](NodeId x) {
      if (partition.assignment[x] != c && stamp[x] != mark) {
        stamp[x] = mark;
        roles.neighbors.push_back(x);
      }
    };
    for (NodeId u : roles.members) {
      if (dir != NeighborDirection::in) {
        for (const auto& arc : g.out_arcs(u)) consider(arc.node);
      }
      if (dir != NeighborDirection::out) {
        for (const auto& arc : g.in_arcs(u)) consider(arc.node);
      }
    }
    std::sort(roles.neighbors.begin(), roles.neighbors.end());
    for (NodeId u : roles.members) {
      bool boundary = false;
      for (const auto& arc : g.out_arcs(u)) {
        if (stamp[arc.node] == mark) {
          boundary = true;
          break;
        }
      }
      if (boundary) {
        roles.boundary.push_back(u);
        cha.role[u] = NodeRole::boundary;
      } else {
        roles.core.push_back(u);
      }
    }
  }
  return cha;
}

void save_communities(const DirectedGraph& g, const CommunityPartition& p,
                      const std::filesystem::path& path) {
  auto out = tsv::open_output(path);
  for (NodeId v = 0; v < g.node_count(); ++v) out << g.label(v) << '\t' << p.assignment[v] << '\n';
  if (!out) throw InputError("write failure on " + path.string());
}

CommunityPartition load_communities(const DirectedGraph& g, const std::filesystem::path& path) {
  std::vector<std::uint64_t> labels(g.node_count(), 0);
  std::vector<bool> seen(g.node_count(), false);
  tsv::for_each_row(path, '\t', [&](const auto& fields, std::size_t line) {
    const std::string where = path.string() + ":" + std::to_string(line);
    if (fields.size() != 2) throw InputError(where + ": expected node<TAB>community");
    auto v = g.find_node(fields[0]);
    if (!v) throw InputError(where + ": unknown node '" + std::string(fields[0]) + "'");
    long long c = tsv::parse_int(fields[1], where);
    if (c < 0) throw InputError(where + ": negative community id");
    labels[*v] = static_cast<std::uint64_t>(c);
    seen[*v] = true;
  });
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!seen[v]) throw InputError(path.string() + ": node '" + g.label(v) + "' unassigned");
  }
  auto p = make_partition(labels);
  p.modularity = modularity(g, p.assignment);
  return p;
}

void save_cha(const DirectedGraph& g, const ChaPartition& cha, const std::filesystem::path& path) {
  auto out = tsv::open_output(path);
  for (CommunityId c = 0; c < cha.communities.size(); ++c) {
    const auto& roles = cha.communities[c];
    for (NodeId v : roles.boundary) out << g.label(v) << '\t' << c << "\tboundary\n";
    for (NodeId v : roles.core) out << g.label(v) << '\t' << c << "\tcore\n";
    for (NodeId v : roles.neighbors) out << g.label(v) << '\t' << c << "\tneighbor\n";
  }
  if (!out) throw InputError("write failure on " + path.string());
}

}  // namespace trustsage
