#include "trustsage/sampler.hpp"

#include <algorithm>

#include "trustsage/error.hpp"

namespace trustsage {

SamplerMode parse_sampler_mode(std::string_view text) {
  if (text == "weighted") return SamplerMode::weighted;
  if (text == "uniform") return SamplerMode::uniform;
  throw InputError("sampler mode must be weighted|uniform, got '" + std::string(text) + "'");
}

void SamplerConfig::validate() const {
  if (depth < 1) throw InputError("sampling depth must be at least 1");
  if (sample_size < 1) throw InputError("sample size must be at least 1");
}

std::span<const NodeId> SampledNeighborhood::drawn_for(int depth, NodeId node) const {
  if (depth < 1 || depth > this->depth()) return {};
  const auto& frontier = hops[depth - 1];
  auto it = std::lower_bound(frontier.begin(), frontier.end(), node);
  if (it == frontier.end() || *it != node) return {};
  return draws[depth - 1][static_cast<std::size_t>(it - frontier.begin())];
}

std::vector<NodeId> draw_without_replacement(std::span<const NodeId> candidates,
                                             std::span<const double> probs, std::size_t count,
                                             SamplerMode mode, Rng& rng) {
  const std::size_t n = candidates.size();
  std::vector<NodeId> picked;
  if (n == 0 || count == 0) return picked;
  if (count >= n) {
    picked.assign(candidates.begin(), candidates.end());
    return picked;
  }
  picked.reserve(count);

  if (mode == SamplerMode::uniform) {
    std::vector<NodeId> pool(candidates.begin(), candidates.end());
    // Partial Fisher-Yates: the first `count` slots are the draws.
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t j = i + rng.index(n - i);
      std::swap(pool[i], pool[j]);
      picked.push_back(pool[i]);
    }
    return picked;
  }

  std::vector<double> remaining(probs.begin(), probs.end());
  double mass = 0.0;
  for (double p : remaining) mass += p;
  for (std::size_t draw = 0; draw < count && mass > 0.0; ++draw) {
    const double target = rng.uniform() * mass;
    double acc = 0.0;
    std::size_t chosen = n;
    std::size_t last_positive = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (remaining[i] <= 0.0) continue;
      last_positive = i;
      acc += remaining[i];
      if (target < acc) {
        chosen = i;
        break;
      }
    }
    if (chosen == n) chosen = last_positive;  // rounding at the top end
    picked.push_back(candidates[chosen]);
    remaining[chosen] = 0.0;
    mass = 0.0;
    for (double p : remaining) mass += p;
  }
  return picked;
}

std::uint64_t sampling_stream(std::uint64_t seed, NodeId root, int depth, NodeId node) {
  return mix_seed(mix_seed(seed, root), static_cast<std::uint64_t>(depth), node);
}

SampledNeighborhood sample(NodeId root, const SamplingWeights& w, const SamplerConfig& cfg) {
  cfg.validate();
  if (root >= w.node_count()) {
    throw InputError("invalid root node id " + std::to_string(root));
  }
  SampledNeighborhood nbh;
  nbh.root = root;
  nbh.hops.push_back({root});
  for (int depth = 1; depth <= cfg.depth; ++depth) {
    const auto& frontier = nbh.hops.back();
    std::vector<std::vector<NodeId>> drawn;
    drawn.reserve(frontier.size());
    std::vector<NodeId> next = frontier;
    for (NodeId u : frontier) {
      Rng rng(sampling_stream(cfg.seed, root, depth, u));
      auto picks = draw_without_replacement(w.targets_of(u), w.probabilities_of(u),
                                            cfg.sample_size, cfg.mode, rng);
      std::sort(picks.begin(), picks.end());
      next.insert(next.end(), picks.begin(), picks.end());
      drawn.push_back(std::move(picks));
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    nbh.draws.push_back(std::move(drawn));
    nbh.hops.push_back(std::move(next));
  }
  return nbh;
}

}  // namespace trustsage
