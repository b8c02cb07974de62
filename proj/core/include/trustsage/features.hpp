#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trustsage/graph.hpp"
#include "trustsage/tsm.hpp"

namespace trustsage {

/// Source of trust features: network topology (TSM scores) or timeline activity.
enum class FeatureStrategy { top, act };

FeatureStrategy parse_feature_strategy(std::string_view text);
std::string_view to_string(FeatureStrategy s);

/// Timeline summary for one node.
struct ActivityRecord {
  std::uint64_t timeline_size = 0;     ///< n(t), statuses inspected
  std::uint64_t retweet_count = 0;     ///< statuses that are retweets
  double times_retweeted_total = 0.0;  ///< retweets received, summed over the timeline
};

struct ActivityTable {
  /// Indexed by node; nodes without a record stay empty.
  std::vector<std::optional<ActivityRecord>> records;
  /// Pairwise retweet counts keyed by edge id: for follow edge x -> v, how
  /// often x retweeted v.
  std::unordered_map<std::size_t, double> edge_retweets;

  explicit ActivityTable(std::size_t node_count = 0) : records(node_count) {}
};

/// Reads `node,n_t,retweet_count,times_retweeted_total` and, optionally,
/// `x,v,rt_count`. A header row starting with "node" / "x" is skipped.
ActivityTable load_activity(const DirectedGraph& g, const std::filesystem::path& activity_csv,
                            const std::optional<std::filesystem::path>& retweets_csv = {});
void save_activity(const DirectedGraph& g, const ActivityTable& table,
                   const std::filesystem::path& activity_csv,
                   const std::filesystem::path& retweets_csv);

/// Two trust features per node, row-major:
///   top: [ti, tw]
///   act: [retweet_count / n(t), times_retweeted_total / n(t)]
struct FeatureMatrix {
  static constexpr std::size_t kDim = 2;

  FeatureStrategy strategy = FeatureStrategy::top;
  std::vector<double> values;
  /// act mode: nodes with n(t) = 0 or no record, zero-filled.
  std::size_t flagged_nodes = 0;
  std::size_t missing_records = 0;

  std::size_t rows() const { return values.size() / kDim; }
  std::size_t dim() const { return kDim; }
  std::span<const double> row(NodeId v) const { return {values.data() + v * kDim, kDim}; }
};

FeatureMatrix build_features(const TrustScores& scores, const ActivityTable* activity,
                             FeatureStrategy strategy);

void save_features(const DirectedGraph& g, const FeatureMatrix& x,
                   const std::filesystem::path& path);
FeatureMatrix load_features(const DirectedGraph& g, const std::filesystem::path& path,
                            FeatureStrategy strategy);

/// Which adjacency the normalized distributions run over.
enum class SampleDirection { out, in };

SampleDirection parse_sample_direction(std::string_view text);

/// Per-node categorical distribution over adjacent nodes. Only strictly
/// positive weights appear; a node whose weights sum to zero has an empty
/// distribution and is counted in `flagged_nodes`.
struct SamplingWeights {
  SampleDirection direction = SampleDirection::out;
  std::vector<std::size_t> offsets{0};
  std::vector<NodeId> targets;
  std::vector<double> probabilities;
  std::size_t flagged_nodes = 0;

  std::size_t node_count() const { return offsets.size() - 1; }
  std::span<const NodeId> targets_of(NodeId v) const {
    return {targets.data() + offsets.at(v), offsets.at(v + 1) - offsets.at(v)};
  }
  std::span<const double> probabilities_of(NodeId v) const {
    return {probabilities.data() + offsets.at(v), offsets.at(v + 1) - offsets.at(v)};
  }
};

/// Divides each node's edge weights by their sum. `raw` is indexed by edge id
/// and must be nonnegative (InputError otherwise).
SamplingWeights normalize_weights(const DirectedGraph& g, std::span<const double> raw,
                                  SampleDirection dir = SampleDirection::out);

/// Pairwise retweet count per edge id, zero where none was recorded.
std::vector<double> retweet_edge_weights(const DirectedGraph& g, const ActivityTable& activity);

/// `src<TAB>dst<TAB>probability`
void save_sampling_weights(const DirectedGraph& g, const SamplingWeights& w,
                           const std::filesystem::path& path);
SamplingWeights load_sampling_weights(const DirectedGraph& g, const std::filesystem::path& path,
                                      SampleDirection dir = SampleDirection::out);

}  // namespace trustsage
