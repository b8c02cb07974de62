#include "trustsage/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "trustsage/error.hpp"
#include "trustsage/rng.hpp"
#include "trustsage/tsv.hpp"

namespace trustsage {

SbmConfig SbmConfig::equal_blocks(std::size_t communities, std::size_t size, double p_in,
                                  double p_out, std::uint64_t seed) {
  SbmConfig cfg;
  cfg.sizes.assign(communities, size);
  cfg.p_in = p_in;
  cfg.p_out = p_out;
  cfg.seed = seed;
  return cfg;
}

void SbmConfig::validate() const {
  if (!(0.0 <= p_out && p_out <= p_in && p_in <= 1.0)) {
    throw InputError("SBM probabilities must satisfy 0 <= p_out <= p_in <= 1");
  }
}

SbmGraph generate_sbm(const SbmConfig& cfg) {
  cfg.validate();
  std::vector<std::uint64_t> block;
  for (std::size_t c = 0; c < cfg.sizes.size(); ++c) block.insert(block.end(), cfg.sizes[c], c);
  const std::size_t n = block.size();
  Rng rng(cfg.seed);
  std::vector<EdgeView> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u == v) continue;
      const double p = block[u] == block[v] ? cfg.p_in : cfg.p_out;
      if (rng.uniform() < p) edges.push_back({u, v, 1.0});
    }
  }
  SbmGraph result{DirectedGraph(n, edges), make_partition(block)};
  result.planted.modularity = modularity(result.graph, result.planted.assignment);
  return result;
}

std::string_view to_string(CascadeStatus s) {
  switch (s) {
    case CascadeStatus::spreader: return "spreader";
    case CascadeStatus::exposed: return "exposed";
    case CascadeStatus::unexposed: return "unexposed";
  }
  return "unexposed";
}

void CascadeConfig::validate() const {
  if (!(beta > 0.0) || beta > 1.0) throw InputError("cascade beta must lie in (0, 1]");
  if (max_rounds < 0) throw InputError("max_rounds must be nonnegative");
}

std::size_t CascadeTrace::spreader_count() const {
  return static_cast<std::size_t>(
      std::count(status.begin(), status.end(), CascadeStatus::spreader));
}

double attempt_uniform(std::uint64_t seed, std::size_t edge) {
  return to_unit(mix_seed(seed, 0x61747470ULL, edge));
}

std::vector<NodeId> pick_seeds(std::size_t node_count, std::size_t count, std::uint64_t seed) {
  if (count > node_count) throw InputError("more cascade seeds requested than nodes");
  std::vector<NodeId> nodes(node_count);
  std::iota(nodes.begin(), nodes.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(nodes[i], nodes[i + rng.index(node_count - i)]);
  }
  nodes.resize(count);
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

CascadeTrace simulate_cascade(const DirectedGraph& g, const BelievabilityScores& bel,
                              const CascadeConfig& cfg) {
  cfg.validate();
  if (bel.values.size() != g.edge_count()) {
    throw InputError("believability scores do not cover every edge");
  }
  const std::size_t n = g.node_count();
  CascadeTrace trace;
  trace.status.assign(n, CascadeStatus::unexposed);
  trace.round.assign(n, -1);
  trace.is_seed.assign(n, false);
  trace.activated_by.assign(n, kNoNode);

  std::vector<NodeId> seeds = cfg.seeds;
  if (seeds.empty()) seeds = pick_seeds(n, cfg.seed_count, mix_seed(cfg.seed, 0x73656564ULL));
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  for (NodeId s : seeds) {
    g.check_node(s);
    trace.status[s] = CascadeStatus::spreader;
    trace.round[s] = 0;
    trace.is_seed[s] = true;
  }

  std::vector<NodeId> frontier = seeds;
  for (int r = 1; r <= cfg.max_rounds && !frontier.empty(); ++r) {
    std::vector<NodeId> next;
    for (NodeId a : frontier) {
      for (const auto& arc : g.in_arcs(a)) {
        const NodeId v = arc.node;  // v follows a
        if (trace.status[v] == CascadeStatus::spreader) continue;
        if (trace.status[v] == CascadeStatus::unexposed) {
          trace.status[v] = CascadeStatus::exposed;
          trace.round[v] = r;
        }
        const double p = std::min(1.0, cfg.beta * bel.values[arc.edge]);
        if (attempt_uniform(cfg.seed, arc.edge) < p) {
          trace.status[v] = CascadeStatus::spreader;
          trace.round[v] = r;
          trace.activated_by[v] = a;
          next.push_back(v);
        }
      }
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  return trace;
}

void save_trace(const DirectedGraph& g, const CascadeTrace& trace,
                const std::filesystem::path& path) {
  auto out = tsv::open_output(path);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << g.label(v) << '\t' << to_string(trace.status.at(v)) << '\t' << trace.round.at(v)
        << '\n';
  }
  if (!out) throw InputError("write failure on " + path.string());
}

CascadeTrace load_trace(const DirectedGraph& g, const std::filesystem::path& path) {
  const std::size_t n = g.node_count();
  CascadeTrace trace;
  trace.status.assign(n, CascadeStatus::unexposed);
  trace.round.assign(n, -1);
  trace.is_seed.assign(n, false);
  trace.activated_by.assign(n, kNoNode);
  tsv::for_each_row(path, '\t', [&](const auto& f, std::size_t line) {
    const std::string where = path.string() + ":" + std::to_string(line);
    if (f.size() != 3) throw InputError(where + ": expected node<TAB>status<TAB>round");
    auto v = g.find_node(f[0]);
    if (!v) throw InputError(where + ": unknown node '" + std::string(f[0]) + "'");
    if (f[1] == "spreader") {
      trace.status[*v] = CascadeStatus::spreader;
    } else if (f[1] == "exposed") {
      trace.status[*v] = CascadeStatus::exposed;
    } else if (f[1] == "unexposed") {
      trace.status[*v] = CascadeStatus::unexposed;
    } else {
      throw InputError(where + ": unknown status '" + std::string(f[1]) + "'");
    }
    trace.round[*v] = static_cast<int>(tsv::parse_int(f[2], where));
    trace.is_seed[*v] = trace.status[*v] == CascadeStatus::spreader && trace.round[*v] == 0;
  });
  return trace;
}

LabeledDatasets make_labeled_dataset(const CascadeTrace& trace, const ChaPartition& cha) {
  if (trace.size() != cha.role.size()) throw InputError("trace and CHA cover different graphs");
  LabeledDatasets data;
  for (NodeId v = 0; v < trace.size(); ++v) {
    if (trace.is_seed[v]) continue;
    LabeledExample ex;
    ex.node = v;
    ex.role = cha.role[v];
    ex.label = trace.status[v] == CascadeStatus::spreader ? Label::spreader : Label::non_spreader;
    (ex.role == NodeRole::boundary ? data.boundary : data.core).push_back(ex);
  }
  return data;
}

namespace {

std::uint64_t poisson(Rng& rng, double mean) {
  if (mean <= 0.0) return 0;
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double p = rng.uniform();
  while (p > limit) {
    ++k;
    p *= rng.uniform();
  }
  return k;
}

}  // namespace

ActivityTable synthesize_activity(const DirectedGraph& g, const TrustScores& scores,
                                  const BelievabilityScores& bel, const CascadeTrace& trace,
                                  std::uint64_t seed) {
  constexpr std::uint64_t kTimeline = 10;
  const std::size_t n = g.node_count();
  ActivityTable table(n);
  std::vector<double> believed_by(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    if (trace.activated_by[v] != kNoNode) believed_by[trace.activated_by[v]] += 1.0;
  }
  for (NodeId v = 0; v < n; ++v) {
    Rng rng(mix_seed(seed, 0x6e6f6465ULL, v));
    const double p = 0.1 + 0.8 * std::clamp(scores.trustingness[v], 0.0, 1.0);
    std::uint64_t retweets = 0;
    for (std::uint64_t i = 0; i < kTimeline; ++i) retweets += rng.uniform() < p;
    if (trace.status[v] == CascadeStatus::spreader) retweets = std::min(kTimeline, retweets + 1);
    double received = believed_by[v];
    for (std::uint64_t i = 0; i < kTimeline; ++i) {
      received += static_cast<double>(poisson(rng, 2.0 * scores.trustworthiness[v]));
    }
    table.records[v] = ActivityRecord{kTimeline, retweets, received};
  }
  for (std::size_t id = 0; id < g.edge_count(); ++id) {
    auto e = g.edge(id);
    Rng rng(mix_seed(seed, 0x65646765ULL, id));
    double count = static_cast<double>(poisson(rng, 2.0 * bel.values[id]));
    if (trace.activated_by[e.src] == e.dst) count += 1.0;
    if (count > 0.0) table.edge_retweets[id] = count;
  }
  return table;
}

double calibrate_beta(const DirectedGraph& g, const BelievabilityScores& bel, CascadeConfig cfg,
                      std::span<const NodeId> eligible, double low, double high) {
  if (eligible.empty()) throw InputError("no eligible nodes to calibrate against");
  if (!(0.0 <= low && low <= high && high <= 1.0)) throw InputError("invalid target range");
  if (cfg.seeds.empty()) cfg.seeds = pick_seeds(g.node_count(), cfg.seed_count,
                                                mix_seed(cfg.seed, 0x73656564ULL));
  auto fraction = [&](double beta) {
    cfg.beta = beta;
    auto trace = simulate_cascade(g, bel, cfg);
    std::size_t hits = 0;
    for (NodeId v : eligible) hits += trace.status[v] == CascadeStatus::spreader;
    return static_cast<double>(hits) / static_cast<double>(eligible.size());
  };
  if (fraction(1.0) < low) return 1.0;
  const double target = (low + high) / 2.0;
  double lo = 0.0, hi = 1.0;
  // fallback when the fraction jumps over the window's middle
  double best = 1.0;
  double best_miss = std::numeric_limits<double>::infinity();
  double best_f = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double mid = (lo + hi) / 2.0;
    const double f = fraction(mid);
    if (f >= low && f <= high && std::abs(f - target) < (high - low) / 4.0) return mid;
    const double miss = f < low ? low - f : f > high ? f - high : 0.0;
    if (miss < best_miss ||
        (miss == best_miss && std::abs(f - target) < std::abs(best_f - target))) {
      best = mid;
      best_miss = miss;
      best_f = f;
    }
    (f < target ? lo : hi) = mid;
  }
  return best;
}

}  // namespace trustsage
