#include "trustsage/tsm.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "trustsage/error.hpp"
#include "trustsage/tsv.hpp"

namespace trustsage {

void TsmConfig::validate() const {
  if (!(involvement > 0.0) || involvement > 1.0) {
    throw InputError("involvement must lie in (0, 1]");
  }
  if (max_iterations < 1) throw InputError("max_iterations must be at least 1");
  if (!(epsilon >= 0.0)) throw InputError("epsilon must be nonnegative");
  if (!(initial_score >= 0.0) || !std::isfinite(initial_score)) {
    throw InputError("initial score must be finite and nonnegative");
  }
}

void tsm_sweep(const DirectedGraph& g, double involvement, std::span<const double> ti_prev,
               std::span<const double> tw_prev, std::span<double> ti_next,
               std::span<double> tw_next) {
  const auto n = static_cast<NodeId>(g.node_count());
  for (NodeId v = 0; v < n; ++v) {
    double ti = 0.0;
    for (const auto& arc : g.out_arcs(v)) {
      ti += arc.weight / (1.0 + std::pow(tw_prev[arc.node], involvement));
    }
    double tw = 0.0;
    for (const auto& arc : g.in_arcs(v)) {
      tw += arc.weight / (1.0 + std::pow(ti_prev[arc.node], involvement));
    }
    ti_next[v] = ti;
    tw_next[v] = tw;
  }
}

namespace {

void normalize_by_max(std::span<double> scores) {
  double peak = 0.0;
  for (double x : scores) peak = std::max(peak, x);
  if (peak == 0.0) return;
  for (double& x : scores) x /= peak;
}

double max_abs_change(std::span<const double> a, std::span<const double> b) {
  double change = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) change = std::max(change, std::abs(a[i] - b[i]));
  return change;
}

void check_finite(std::span<const double> scores, const char* name, int iteration) {
  for (std::size_t v = 0; v < scores.size(); ++v) {
    if (!std::isfinite(scores[v])) {
      throw NumericError(std::string("non-finite ") + name + " for node " + std::to_string(v) +
                         " at iteration " + std::to_string(iteration));
    }
  }
}

}  // namespace

TrustScores compute_tsm(const DirectedGraph& g, const TsmConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.node_count();
  TrustScores scores;
  scores.trustingness.assign(n, cfg.initial_score);
  scores.trustworthiness.assign(n, cfg.initial_score);
  if (n == 0) {
    scores.converged = true;
    return scores;
  }

  std::vector<double> ti_next(n), tw_next(n);
  for (int iteration = 1; iteration <= cfg.max_iterations; ++iteration) {
    tsm_sweep(g, cfg.involvement, scores.trustingness, scores.trustworthiness, ti_next, tw_next);
    if (cfg.normalize) {
      normalize_by_max(ti_next);
      normalize_by_max(tw_next);
    }
    check_finite(ti_next, "trustingness", iteration);
    check_finite(tw_next, "trustworthiness", iteration);

    scores.last_change = std::max(max_abs_change(ti_next, scores.trustingness),
                                  max_abs_change(tw_next, scores.trustworthiness));
    scores.trustingness.swap(ti_next);
    scores.trustworthiness.swap(tw_next);
    scores.iterations_run = iteration;
    if (scores.last_change < cfg.epsilon) {
      scores.converged = true;
      break;
    }
  }
  return scores;
}

std::optional<double> BelievabilityScores::find(const DirectedGraph& g, NodeId src,
                                                NodeId dst) const {
  auto id = g.find_edge(src, dst);
  if (!id) return std::nullopt;
  return values.at(*id);
}

BelievabilityScores compute_believability(const DirectedGraph& g, const TrustScores& scores) {
  if (scores.trustingness.size() != g.node_count() ||
      scores.trustworthiness.size() != g.node_count()) {
    throw InputError("trust scores cover " + std::to_string(scores.size()) + " nodes, graph has " +
                     std::to_string(g.node_count()));
  }
  BelievabilityScores bel;
  bel.values.resize(g.edge_count());
  for (std::size_t id = 0; id < g.edge_count(); ++id) {
    auto e = g.edge(id);
    bel.values[id] = scores.trustworthiness[e.src] * scores.trustingness[e.dst];
  }
  return bel;
}

void save_trust_scores(const DirectedGraph& g, const TrustScores& scores,
                       const std::filesystem::path& path) {
  auto out = tsv::open_output(path);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << g.label(v) << '\t' << tsv::format_double(scores.trustingness.at(v)) << '\t'
        << tsv::format_double(scores.trustworthiness.at(v)) << '\n';
  }
  if (!out) throw InputError("write failure on " + path.string());
}

TrustScores load_trust_scores(const DirectedGraph& g, const std::filesystem::path& path) {
  TrustScores scores;
  scores.trustingness.assign(g.node_count(), 0.0);
  scores.trustworthiness.assign(g.node_count(), 0.0);
  std::vector<bool> seen(g.node_count(), false);
  tsv::for_each_row(path, '\t', [&](const auto& fields, std::size_t line) {
    const std::string where = path.string() + ":" + std::to_string(line);
    if (fields.size() != 3) throw InputError(where + ": expected node<TAB>ti<TAB>tw");
    auto v = g.find_node(fields[0]);
    if (!v) throw InputError(where + ": unknown node '" + std::string(fields[0]) + "'");
    scores.trustingness[*v] = tsv::parse_double(fields[1], where);
    scores.trustworthiness[*v] = tsv::parse_double(fields[2], where);
    seen[*v] = true;
  });
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!seen[v]) throw InputError(path.string() + ": no score for node '" + g.label(v) + "'");
  }
  scores.converged = true;
  return scores;
}

void save_believability(const DirectedGraph& g, const BelievabilityScores& bel,
                        const std::filesystem::path& path) {
  auto out = tsv::open_output(path);
  for (std::size_t id = 0; id < g.edge_count(); ++id) {
    auto e = g.edge(id);
    out << g.label(e.src) << '\t' << g.label(e.dst) << '\t' << tsv::format_double(bel.at(id))
        << '\n';
  }
  if (!out) throw InputError("write failure on " + path.string());
}

BelievabilityScores load_believability(const DirectedGraph& g,
                                       const std::filesystem::path& path) {
  BelievabilityScores bel;
  bel.values.assign(g.edge_count(), 0.0);
  std::vector<bool> seen(g.edge_count(), false);
  tsv::for_each_row(path, '\t', [&](const auto& fields, std::size_t line) {
    const std::string where = path.string() + ":" + std::to_string(line);
    if (fields.size() != 3) throw InputError(where + ": expected src<TAB>dst<TAB>bel");
    auto src = g.find_node(fields[0]);
    auto dst = g.find_node(fields[1]);
    std::optional<std::size_t> id;
    if (src && dst) id = g.find_edge(*src, *dst);
    if (!id) throw InputError(where + ": edge not present in graph");
    double value = tsv::parse_double(fields[2], where);
    if (value < 0.0) throw InputError(where + ": negative believability");
    bel.values[*id] = value;
    seen[*id] = true;
  });
  for (std::size_t id = 0; id < g.edge_count(); ++id) {
    if (!seen[id]) {
      auto e = g.edge(id);
      throw InputError(path.string() + ": missing believability for " + g.label(e.src) + " -> " +
                       g.label(e.dst));
    }
  }
  return bel;
}

}  // namespace trustsage
