#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "trustsage/graph.hpp"

namespace trustsage {

using CommunityId = std::uint32_t;

struct LouvainConfig {
  double resolution = 1.0;
  std::uint64_t seed = 0;
  /// Upper bound on local-move/coarsening passes.
  int max_passes = 64;

  void validate() const;
};

/// Disjoint assignment of nodes to communities 0..community_count-1.
struct CommunityPartition {
  std::vector<CommunityId> assignment;
  std::size_t community_count = 0;
  double modularity = 0.0;
  /// Modularity on the input graph before the first pass (singletons) and
  /// after every completed pass. Louvain never lets this decrease.
  std::vector<double> pass_modularity;

  std::vector<std::vector<NodeId>> members() const;
};

/// Renumbers arbitrary labels into contiguous ids in order of first
/// appearance by node id. Modularity is left at zero.
CommunityPartition make_partition(std::span<const std::uint64_t> labels);

/// Modularity of `assignment` on the symmetrized graph (A_ij = w(i,j) + w(j,i)).
/// Zero when the graph carries no weight.
double modularity(const DirectedGraph& g, std::span<const CommunityId> assignment,
                  double resolution = 1.0);

/// Multi-level Louvain on the symmetrized graph. Node visit order per level
/// comes from a seeded shuffle; among equally good target communities the
/// lowest id wins, and a node only leaves its community for a strict gain.
CommunityPartition louvain(const DirectedGraph& g, const LouvainConfig& cfg = {});

/// Arithmetic-mean normalized mutual information between two labelings.
double normalized_mutual_information(std::span<const CommunityId> a,
                                     std::span<const CommunityId> b);

/// Which edges make an outside node a neighbour of a community.
enum class NeighborDirection {
  either,  ///< any edge between the outsider and a member
  in,      ///< outsider -> member
  out,     ///< member -> outsider
};

NeighborDirection parse_neighbor_direction(std::string_view text);
std::string_view to_string(NeighborDirection dir);

enum class NodeRole : std::uint8_t { boundary, core };

std::string_view to_string(NodeRole role);

struct CommunityRoles {
  std::vector<NodeId> members;
  std::vector<NodeId> neighbors;
  std::vector<NodeId> boundary;
  std::vector<NodeId> core;
};

/// Neighbour/boundary/core sets for every community. All sets are sorted.
struct ChaPartition {
  std::vector<CommunityRoles> communities;
  /// Community of each node, and its role inside that community.
  std::vector<CommunityId> community_of;
  std::vector<NodeRole> role;
};

/// N = outsiders linked to the community (per `dir`), B = members with an
/// out-edge into N, C = members \ B.
ChaPartition cha_partition(const DirectedGraph& g, const CommunityPartition& partition,
                           NeighborDirection dir = NeighborDirection::either);

/// `node<TAB>community`
void save_communities(const DirectedGraph& g, const CommunityPartition& p,
                      const std::filesystem::path& path);
/// Reads `node<TAB>community`; community labels may be any integers. The
/// modularity field is recomputed.
CommunityPartition load_communities(const DirectedGraph& g, const std::filesystem::path& path);

/// `node<TAB>community<TAB>role`; a node is listed once with its own role and
/// once as `neighbor` for every other community it neighbours.
void save_cha(const DirectedGraph& g, const ChaPartition& cha, const std::filesystem::path& path);

}  // namespace trustsage
