#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "trustsage/features.hpp"
#include "trustsage/graph.hpp"
#include "trustsage/rng.hpp"

namespace trustsage {

enum class SamplerMode {
  weighted,  ///< proportional to the normalized trust weights
  uniform,   ///< every candidate equally likely; weights ignored
};

SamplerMode parse_sampler_mode(std::string_view text);

struct SamplerConfig {
  int depth = 1;
  std::size_t sample_size = 25;
  SamplerMode mode = SamplerMode::weighted;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Result of recursive neighbourhood sampling around one root.
struct SampledNeighborhood {
  NodeId root = 0;
  /// hops[k] is Nbr_k: hops[0] = {root}, hops[k] = hops[k-1] united with
  /// everything drawn at depth k. Sorted, no duplicates.
  std::vector<std::vector<NodeId>> hops;
  /// draws[k-1] lists, for each node of hops[k-1] (same order), the nodes
  /// drawn for it at depth k, sorted by id.
  std::vector<std::vector<std::vector<NodeId>>> draws;

  int depth() const { return static_cast<int>(draws.size()); }
  /// Nodes drawn for `node` at `depth` (1-based); empty if `node` was not on
  /// that depth's frontier.
  std::span<const NodeId> drawn_for(int depth, NodeId node) const;
};

/// Successive draws without replacement: each pick is proportional to the
/// remaining weight (uniform mode ignores `probs`). Returns the picks in
/// draw order; at most min(count, number of candidates) of them.
std::vector<NodeId> draw_without_replacement(std::span<const NodeId> candidates,
                                             std::span<const double> probs, std::size_t count,
                                             SamplerMode mode, Rng& rng);

/// Seed of the stream used when `node` is expanded at `depth` for `root`.
/// Streams depend only on these values, so results do not depend on the
/// order in which roots are processed.
std::uint64_t sampling_stream(std::uint64_t seed, NodeId root, int depth, NodeId node);

SampledNeighborhood sample(NodeId root, const SamplingWeights& w, const SamplerConfig& cfg);

}  // namespace trustsage
