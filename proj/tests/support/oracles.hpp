#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trustsage/baselines.hpp"
#include "trustsage/community.hpp"
#include "trustsage/features.hpp"
#include "trustsage/graph.hpp"
#include "trustsage/sage.hpp"
#include "trustsage/sampler.hpp"

namespace trustsage::oracle {

DirectedGraph make_graph(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                         double weight = 1.0);

/// Erdos-Renyi style digraph with edge probability p.
DirectedGraph random_graph(std::size_t n, double p, std::uint64_t seed);

/// k disjoint directed cliques of `size` nodes (every ordered pair linked).
DirectedGraph disconnected_cliques(std::size_t k, std::size_t size);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::filesystem::path path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }
  std::filesystem::path write(const std::string& name, const std::string& contents) const;

 private:
  std::filesystem::path path_;
};

/// Checks a CHA result against the definitions by scanning every edge.
/// Returns the number of violated conditions.
std::size_t cha_violations(const DirectedGraph& g, const CommunityPartition& p,
                           const ChaPartition& cha, NeighborDirection dir);

/// Independent straight-line evaluation of the aggregation + classifier
/// (concat aggregator, any depth); returns [p_spreader, p_non_spreader].
std::array<double, 2> reference_forward(const SampledNeighborhood& nbh, const FeatureMatrix& x,
                                        const SageParams& params);

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t entries = 0;
  /// A ReLU pre-activation sat within reach of the finite-difference step.
  bool near_kink = false;
};

/// Central differences with step h on every parameter entry, compared with
/// batch_gradient.
GradientCheck check_gradient(std::span<const SampledNeighborhood> nbhs,
                             std::span<const Label> labels, const FeatureMatrix& x,
                             const SageParams& params, double h = 1e-5);

/// Smallest |pre-activation| over all layers and all nodes touched.
double min_abs_preactivation(std::span<const SampledNeighborhood> nbhs, const FeatureMatrix& x,
                             const SageParams& params);

/// Best training accuracy over every threshold (all midpoints plus the two
/// outer ones) and both polarities, by brute force, for a fixed alpha.
double exhaustive_threshold_accuracy(std::span<const LabeledExample> train,
                                     const FeatureMatrix& x, double alpha);

FeatureMatrix feature_matrix(const std::vector<std::array<double, 2>>& rows,
                             FeatureStrategy strategy = FeatureStrategy::top);

}  // namespace trustsage::oracle
