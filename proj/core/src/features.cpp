#include "trustsage/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "trustsage/error.hpp"
#include "trustsage/tsv.hpp"

namespace trustsage {

FeatureStrategy parse_feature_strategy(std::string_view text) {
  if (text == "top") return FeatureStrategy::top;
  if (text == "act") return FeatureStrategy::act;
  throw InputError("feature strategy must be top|act, got '" + std::string(text) + "'");
}

std::string_view to_string(FeatureStrategy s) { return s == FeatureStrategy::top ? "top" : "act"; }

SampleDirection parse_sample_direction(std::string_view text) {
  if (text == "out") return SampleDirection::out;
  if (text == "in") return SampleDirection::in;
  throw InputError("sample direction must be out|in, got '" + std::string(text) + "'");
}

ActivityTable load_activity(const DirectedGraph& g, const std::filesystem::path& activity_csv,
                            const std::optional<std::filesystem::path>& retweets_csv) {
  ActivityTable table(g.node_count());
  tsv::for_each_row(activity_csv, ',', [&](const auto& f, std::size_t line) {
    const std::string where = activity_csv.string() + ":" + std::to_string(line);
    if (line == 1 && !f.empty() && f[0] == "node") return;
    if (f.size() != 4) {
      throw InputError(where + ": expected node,n_t,retweet_count,times_retweeted_total");
    }
    auto v = g.find_node(f[0]);
    if (!v) throw InputError(where + ": unknown node '" + std::string(f[0]) + "'");
    long long n_t = tsv::parse_int(f[1], where);
    long long retweets = tsv::parse_int(f[2], where);
    double received = tsv::parse_double(f[3], where);
    if (n_t < 0 || retweets < 0 || received < 0.0) throw InputError(where + ": negative count");
    if (retweets > n_t) throw InputError(where + ": retweet_count exceeds n_t");
    table.records[*v] = ActivityRecord{static_cast<std::uint64_t>(n_t),
                                       static_cast<std::uint64_t>(retweets), received};
  });
  if (retweets_csv) {
    tsv::for_each_row(*retweets_csv, ',', [&](const auto& f, std::size_t line) {
      const std::string where = retweets_csv->string() + ":" + std::to_string(line);
      if (line == 1 && !f.empty() && f[0] == "x") return;
      if (f.size() != 3) throw InputError(where + ": expected x,v,rt_count");
      auto x = g.find_node(f[0]);
      auto v = g.find_node(f[1]);
      if (!x || !v) throw InputError(where + ": unknown node");
      double count = tsv::parse_double(f[2], where);
      if (count < 0.0) throw InputError(where + ": negative retweet count");
      // Pairs that are not edges of the graph cannot carry a sampling weight.
      if (auto id = g.find_edge(*x, *v)) table.edge_retweets[*id] = count;
    });
  }
  return table;
}

void save_activity(const DirectedGraph& g, const ActivityTable& table,
                   const std::filesystem::path& activity_csv,
                   const std::filesystem::path& retweets_csv) {
  auto out = tsv::open_output(activity_csv);
  out << "node,n_t,retweet_count,times_retweeted_total\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& rec = table.records.at(v);
    if (!rec) continue;
    out << g.label(v) << ',' << rec->timeline_size << ',' << rec->retweet_count << ','
        << tsv::format_double(rec->times_retweeted_total) << '\n';
  }
  auto rt = tsv::open_output(retweets_csv);
  rt << "x,v,rt_count\n";
  std::map<std::size_t, double> ordered(table.edge_retweets.begin(), table.edge_retweets.end());
  for (const auto& [id, count] : ordered) {
    auto e = g.edge(id);
    rt << g.label(e.src) << ',' << g.label(e.dst) << ',' << tsv::format_double(count) << '\n';
  }
  if (!out || !rt) throw InputError("write failure on activity files");
}

FeatureMatrix build_features(const TrustScores& scores, const ActivityTable* activity,
                             FeatureStrategy strategy) {
  FeatureMatrix x;
  x.strategy = strategy;
  const std::size_t n = scores.size();
  x.values.assign(n * FeatureMatrix::kDim, 0.0);
  if (strategy == FeatureStrategy::top) {
    for (std::size_t v = 0; v < n; ++v) {
      x.values[2 * v] = scores.trustingness[v];
      x.values[2 * v + 1] = scores.trustworthiness[v];
    }
  } else {
    if (activity == nullptr) throw InputError("act features require an activity table");
    if (activity->records.size() != n) throw InputError("activity table does not match graph");
    for (std::size_t v = 0; v < n; ++v) {
      const auto& rec = activity->records[v];
      if (!rec) {
        ++x.missing_records;
        ++x.flagged_nodes;
        continue;
      }
      if (rec->timeline_size == 0) {
        ++x.flagged_nodes;
        continue;
      }
      const double n_t = static_cast<double>(rec->timeline_size);
      x.values[2 * v] = static_cast<double>(rec->retweet_count) / n_t;
      x.values[2 * v + 1] = rec->times_retweeted_total / n_t;
    }
  }
  for (double value : x.values) {
    if (!std::isfinite(value)) throw NumericError("non-finite feature value");
  }
  return x;
}

void save_features(const DirectedGraph& g, const FeatureMatrix& x,
                   const std::filesystem::path& path) {
  auto out = tsv::open_output(path);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto r = x.row(v);
    out << g.label(v) << '\t' << tsv::format_double(r[0]) << '\t' << tsv::format_double(r[1])
        << '\n';
  }
  if (!out) throw InputError("write failure on " + path.string());
}

FeatureMatrix load_features(const DirectedGraph& g, const std::filesystem::path& path,
                            FeatureStrategy strategy) {
  FeatureMatrix x;
  x.strategy = strategy;
  x.values.assign(g.node_count() * FeatureMatrix::kDim, 0.0);
  std::vector<bool> seen(g.node_count(), false);
  tsv::for_each_row(path, '\t', [&](const auto& f, std::size_t line) {
    const std::string where = path.string() + ":" + std::to_string(line);
    if (f.size() != 3) throw InputError(where + ": expected node<TAB>f0<TAB>f1");
    auto v = g.find_node(f[0]);
    if (!v) throw InputError(where + ": unknown node '" + std::string(f[0]) + "'");
    x.values[2 * *v] = tsv::parse_double(f[1], where);
    x.values[2 * *v + 1] = tsv::parse_double(f[2], where);
    seen[*v] = true;
  });
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!seen[v]) throw InputError(path.string() + ": no features for '" + g.label(v) + "'");
  }
  return x;
}

SamplingWeights normalize_weights(const DirectedGraph& g, std::span<const double> raw,
                                  SampleDirection dir) {
  if (raw.size() != g.edge_count()) {
    throw InputError("raw weight vector has " + std::to_string(raw.size()) + " entries for " +
                     std::to_string(g.edge_count()) + " edges");
  }
  for (std::size_t id = 0; id < raw.size(); ++id) {
    if (!(raw[id] >= 0.0) || !std::isfinite(raw[id])) {
      throw InputError("negative or non-finite raw weight on edge " + std::to_string(id));
    }
  }
  SamplingWeights w;
  w.direction = dir;
  w.offsets.assign(1, 0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto arcs = dir == SampleDirection::out ? g.out_arcs(v) : g.in_arcs(v);
    double total = 0.0;
    for (const auto& arc : arcs) total += raw[arc.edge];
    if (total > 0.0) {
      for (const auto& arc : arcs) {
        if (raw[arc.edge] > 0.0) {
          w.targets.push_back(arc.node);
          w.probabilities.push_back(raw[arc.edge] / total);
        }
      }
    } else {
      ++w.flagged_nodes;
    }
    w.offsets.push_back(w.targets.size());
  }
  return w;
}

std::vector<double> retweet_edge_weights(const DirectedGraph& g, const ActivityTable& activity) {
  std::vector<double> raw(g.edge_count(), 0.0);
  for (const auto& [id, count] : activity.edge_retweets) raw.at(id) = count;
  return raw;
}

void save_sampling_weights(const DirectedGraph& g, const SamplingWeights& w,
                           const std::filesystem::path& path) {
  auto out = tsv::open_output(path);
  for (NodeId v = 0; v < w.node_count(); ++v) {
    auto targets = w.targets_of(v);
    auto probs = w.probabilities_of(v);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      out << g.label(v) << '\t' << g.label(targets[i]) << '\t' << tsv::format_double(probs[i])
          << '\n';
    }
  }
  if (!out) throw InputError("write failure on " + path.string());
}

SamplingWeights load_sampling_weights(const DirectedGraph& g, const std::filesystem::path& path,
                                      SampleDirection dir) {
  std::vector<std::vector<std::pair<NodeId, double>>> rows(g.node_count());
  tsv::for_each_row(path, '\t', [&](const auto& f, std::size_t line) {
    const std::string where = path.string() + ":" + std::to_string(line);
    if (f.size() != 3) throw InputError(where + ": expected node<TAB>target<TAB>probability");
    auto v = g.find_node(f[0]);
    auto t = g.find_node(f[1]);
    if (!v || !t) throw InputError(where + ": unknown node");
    double p = tsv::parse_double(f[2], where);
    if (p < 0.0 || p > 1.0) throw InputError(where + ": probability outside [0, 1]");
    rows[*v].emplace_back(*t, p);
  });
  SamplingWeights w;
  w.direction = dir;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto& list = rows[v];
    std::sort(list.begin(), list.end());
    if (list.empty()) ++w.flagged_nodes;
    for (const auto& [t, p] : list) {
      w.targets.push_back(t);
      w.probabilities.push_back(p);
    }
    w.offsets.push_back(w.targets.size());
  }
  return w;
}

}  // namespace trustsage
