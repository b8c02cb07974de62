#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "trustsage/community.hpp"
#include "trustsage/features.hpp"
#include "trustsage/graph.hpp"
#include "trustsage/sage.hpp"
#include "trustsage/tsm.hpp"

namespace trustsage {

/// Planted-partition directed graph parameters.
struct SbmConfig {
  std::vector<std::size_t> sizes;
  double p_in = 0.1;
  double p_out = 0.01;
  std::uint64_t seed = 0;

  static SbmConfig equal_blocks(std::size_t communities, std::size_t size, double p_in,
                                double p_out, std::uint64_t seed);
  void validate() const;
};

struct SbmGraph {
  DirectedGraph graph;
  CommunityPartition planted;
};

/// Every ordered pair (u, v), u != v, becomes an edge u -> v with probability
/// p_in inside a block and p_out across blocks. Blocks occupy contiguous id
/// ranges in the order of `sizes`; weights are 1.
SbmGraph generate_sbm(const SbmConfig& cfg);

enum class CascadeStatus : std::uint8_t { spreader, exposed, unexposed };

std::string_view to_string(CascadeStatus s);

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct CascadeConfig {
  /// Explicit seed nodes; when empty, `seed_count` distinct nodes are drawn.
  std::vector<NodeId> seeds;
  std::size_t seed_count = 1;
  /// Transmission scale: an attempt succeeds with probability beta * bel.
  double beta = 0.3;
  int max_rounds = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CascadeTrace {
  std::vector<CascadeStatus> status;
  /// Activation round for spreaders, first exposure round for exposed nodes,
  /// -1 for unexposed nodes. Seeds are spreaders at round 0.
  std::vector<int> round;
  std::vector<bool> is_seed;
  /// Followee whose message a spreader believed (kNoNode for seeds and
  /// non-spreaders); the lowest id wins when several succeed in one round.
  std::vector<NodeId> activated_by;

  std::size_t size() const { return status.size(); }
  std::size_t spreader_count() const;
};

/// Uniform in [0, 1) shared by every run with the same `seed` for the
/// attempt along `edge`. Coupling the draws this way makes the spreader set
/// monotone in beta.
double attempt_uniform(std::uint64_t seed, std::size_t edge);

std::vector<NodeId> pick_seeds(std::size_t node_count, std::size_t count, std::uint64_t seed);

/// Independent cascade over follow edges. When a becomes a spreader in round
/// r, each follower v (edge v -> a) that is not yet a spreader is exposed and
/// believes a, becoming a spreader in round r + 1, iff
/// attempt_uniform(seed, edge) < min(1, beta * bel(v, a)). One attempt per
/// (spreader, follower) pair.
CascadeTrace simulate_cascade(const DirectedGraph& g, const BelievabilityScores& bel,
                              const CascadeConfig& cfg);

/// `node<TAB>status<TAB>round`
void save_trace(const DirectedGraph& g, const CascadeTrace& trace,
                const std::filesystem::path& path);
CascadeTrace load_trace(const DirectedGraph& g, const std::filesystem::path& path);

struct LabeledDatasets {
  std::vector<LabeledExample> boundary;
  std::vector<LabeledExample> core;
};

/// One example per boundary (core) node, spreader iff the trace says so.
/// Seeds are excluded. Sorted by node id.
LabeledDatasets make_labeled_dataset(const CascadeTrace& trace, const ChaPartition& cha);

/// Timeline activity consistent with the trust scores and the trace:
/// n(t) = 10; retweets ~ Binomial(10, 0.1 + 0.8 ti) plus one for spreaders;
/// times retweeted ~ sum of 10 Poisson(2 tw) plus followers v activated;
/// per-edge retweet count on v -> a ~ Poisson(2 bel) plus one if v believed a.
ActivityTable synthesize_activity(const DirectedGraph& g, const TrustScores& scores,
                                  const BelievabilityScores& bel, const CascadeTrace& trace,
                                  std::uint64_t seed);

/// Bisects beta in (0, 1] so that the spreader fraction among `eligible`
/// lands near the middle of [low, high], or as close to the window as the
/// bisection gets when the fraction jumps across it. Uses `cfg`'s seeds and
/// coupling, so the fraction is monotone in beta. Returns 1 if even beta = 1 stays below
/// `low`.
double calibrate_beta(const DirectedGraph& g, const BelievabilityScores& bel, CascadeConfig cfg,
                      std::span<const NodeId> eligible, double low, double high);

}  // namespace trustsage
