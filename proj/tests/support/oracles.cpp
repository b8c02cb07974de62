#include "oracles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <set>

#include <unistd.h>

namespace trustsage::oracle {

DirectedGraph make_graph(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                         double weight) {
  std::vector<EdgeView> list;
  for (auto [s, d] : edges) list.push_back({s, d, weight});
  return DirectedGraph(n, list);
}

DirectedGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<EdgeView> list;
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId d = 0; d < n; ++d) {
      if (s != d && u(gen) < p) list.push_back({s, d, 1.0});
    }
  }
  return DirectedGraph(n, list);
}

DirectedGraph disconnected_cliques(std::size_t k, std::size_t size) {
  std::vector<EdgeView> list;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) {
        if (i != j) {
          list.push_back({static_cast<NodeId>(c * size + i), static_cast<NodeId>(c * size + j),
                          1.0});
        }
      }
    }
  }
  return DirectedGraph(k * size, list);
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("trustsage-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::filesystem::path TempDir::write(const std::string& name, const std::string& contents) const {
  auto p = file(name);
  std::ofstream(p) << contents;
  return p;
}

std::size_t cha_violations(const DirectedGraph& g, const CommunityPartition& p,
                           const ChaPartition& cha, NeighborDirection dir) {
  std::size_t bad = 0;
  const std::size_t n = g.node_count();
  const auto& a = p.assignment;
  if (cha.communities.size() != p.community_count) ++bad;
  for (std::size_t c = 0; c < cha.communities.size(); ++c) {
    const auto& roles = cha.communities[c];
    // expected neighbour set
    std::set<NodeId> neigh;
    for (const auto& e : g.edges()) {
      const bool src_in = a[e.src] == c, dst_in = a[e.dst] == c;
      if (src_in && !dst_in && dir != NeighborDirection::in) neigh.insert(e.dst);
      if (!src_in && dst_in && dir != NeighborDirection::out) neigh.insert(e.src);
    }
    if (std::vector<NodeId>(neigh.begin(), neigh.end()) != roles.neighbors) ++bad;
    for (NodeId x : roles.neighbors) bad += a[x] == c;

    std::set<NodeId> members, boundary, core;
    for (NodeId v = 0; v < n; ++v) {
      if (a[v] == c) members.insert(v);
    }
    for (NodeId v : members) {
      bool exposed = false;
      for (const auto& e : g.edges()) {
        if (e.src == v && neigh.count(e.dst)) exposed = true;
      }
      (exposed ? boundary : core).insert(v);
    }
    if (std::vector<NodeId>(boundary.begin(), boundary.end()) != roles.boundary) ++bad;
    if (std::vector<NodeId>(core.begin(), core.end()) != roles.core) ++bad;
    // B and C partition the community
    std::vector<NodeId> joined(roles.boundary);
    joined.insert(joined.end(), roles.core.begin(), roles.core.end());
    std::sort(joined.begin(), joined.end());
    if (std::adjacent_find(joined.begin(), joined.end()) != joined.end()) ++bad;
    if (joined != std::vector<NodeId>(members.begin(), members.end())) ++bad;
    // every boundary node reaches N; no core node has an out-edge leaving the community
    for (NodeId b : roles.boundary) {
      bool ok = false;
      for (const auto& e : g.out_neighbors(b)) ok = ok || neigh.count(e.dst) > 0;
      bad += !ok;
    }
    if (dir != NeighborDirection::in) {
      for (NodeId v : roles.core) {
        for (const auto& e : g.out_neighbors(v)) bad += a[e.dst] != c;
      }
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    const auto& roles = cha.communities.at(cha.community_of.at(v));
    const auto& set = cha.role[v] == NodeRole::boundary ? roles.boundary : roles.core;
    bad += !std::binary_search(set.begin(), set.end(), v);
    bad += cha.community_of[v] != a[v];
  }
  return bad;
}

namespace {

std::vector<double> ref_hidden(const SampledNeighborhood& nbh, const FeatureMatrix& x,
                               const SageParams& params, int k, NodeId u) {
  if (k == 0) {
    auto r = x.row(u);
    return {r.begin(), r.end()};
  }
  const int depth = params.depth();
  std::vector<double> self = ref_hidden(nbh, x, params, k - 1, u);
  const auto drawn = nbh.drawn_for(depth - k + 1, u);
  std::vector<double> mean(self.size(), 0.0);
  for (NodeId n : drawn) {
    auto h = ref_hidden(nbh, x, params, k - 1, n);
    for (std::size_t j = 0; j < h.size(); ++j) mean[j] += h[j];
  }
  std::vector<double> input;
  if (params.aggregator == Aggregator::concat) {
    if (!drawn.empty()) {
      for (double& m : mean) m /= static_cast<double>(drawn.size());
    }
    input = self;
    input.insert(input.end(), mean.begin(), mean.end());
  } else {
    input.resize(self.size());
    for (std::size_t j = 0; j < self.size(); ++j) {
      input[j] = (mean[j] + self[j]) / static_cast<double>(drawn.size() + 1);
    }
  }
  const Matrix& w = params.layers[k - 1];
  std::vector<double> out(w.rows);
  for (std::size_t r = 0; r < w.rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < w.cols; ++c) acc += w(r, c) * input[c];
    out[r] = std::max(0.0, acc);
  }
  return out;
}

void ref_preacts(const SampledNeighborhood& nbh, const FeatureMatrix& x, const SageParams& params,
                 int k, NodeId u, double& smallest) {
  if (k == 0) return;
  const int depth = params.depth();
  auto self = ref_hidden(nbh, x, params, k - 1, u);
  const auto drawn = nbh.drawn_for(depth - k + 1, u);
  ref_preacts(nbh, x, params, k - 1, u, smallest);
  std::vector<double> mean(self.size(), 0.0);
  for (NodeId n : drawn) {
    ref_preacts(nbh, x, params, k - 1, n, smallest);
    auto h = ref_hidden(nbh, x, params, k - 1, n);
    for (std::size_t j = 0; j < h.size(); ++j) mean[j] += h[j];
  }
  std::vector<double> input;
  if (params.aggregator == Aggregator::concat) {
    if (!drawn.empty()) {
      for (double& m : mean) m /= static_cast<double>(drawn.size());
    }
    input = self;
    input.insert(input.end(), mean.begin(), mean.end());
  } else {
    input.resize(self.size());
    for (std::size_t j = 0; j < self.size(); ++j) {
      input[j] = (mean[j] + self[j]) / static_cast<double>(drawn.size() + 1);
    }
  }
  const Matrix& w = params.layers[k - 1];
  for (std::size_t r = 0; r < w.rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < w.cols; ++c) acc += w(r, c) * input[c];
    smallest = std::min(smallest, std::abs(acc));
  }
}

}  // namespace

std::array<double, 2> reference_forward(const SampledNeighborhood& nbh, const FeatureMatrix& x,
                                        const SageParams& params) {
  auto h = ref_hidden(nbh, x, params, params.depth(), nbh.root);
  double norm = 0.0;
  for (double v : h) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& v : h) v /= norm;
  }
  double l0 = 0.0, l1 = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    l0 += params.classifier(0, j) * h[j];
    l1 += params.classifier(1, j) * h[j];
  }
  const double p0 = 1.0 / (1.0 + std::exp(l1 - l0));
  return {p0, 1.0 - p0};
}

double min_abs_preactivation(std::span<const SampledNeighborhood> nbhs, const FeatureMatrix& x,
                             const SageParams& params) {
  double smallest = INFINITY;
  for (const auto& nbh : nbhs) ref_preacts(nbh, x, params, params.depth(), nbh.root, smallest);
  return smallest;
}

GradientCheck check_gradient(std::span<const SampledNeighborhood> nbhs,
                             std::span<const Label> labels, const FeatureMatrix& x,
                             const SageParams& params, double h) {
  GradientCheck result;
  SageParams grad = SageParams::zeros(params.input_dim, params.hidden_dim, params.depth(),
                                      params.aggregator);
  batch_gradient(nbhs, labels, x, params, grad);
  // a step of h moves any pre-activation by at most h * max|input|, inputs are O(1)
  result.near_kink = min_abs_preactivation(nbhs, x, params) < 10.0 * h;

  SageParams probe = params;
  auto compare = [&](double& slot, double analytic) {
    const double saved = slot;
    slot = saved + h;
    const double up = batch_loss(nbhs, labels, x, probe);
    slot = saved - h;
    const double down = batch_loss(nbhs, labels, x, probe);
    slot = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
    result.max_relative_error =
        std::max(result.max_relative_error, std::abs(analytic - numeric) / scale);
    ++result.entries;
  };
  for (std::size_t k = 0; k < probe.layers.size(); ++k) {
    for (std::size_t i = 0; i < probe.layers[k].data.size(); ++i) {
      compare(probe.layers[k].data[i], grad.layers[k].data[i]);
    }
  }
  for (std::size_t i = 0; i < probe.classifier.data.size(); ++i) {
    compare(probe.classifier.data[i], grad.classifier.data[i]);
  }
  return result;
}

double exhaustive_threshold_accuracy(std::span<const LabeledExample> train,
                                     const FeatureMatrix& x, double alpha) {
  std::vector<double> scores;
  for (const auto& ex : train) {
    auto r = x.row(ex.node);
    scores.push_back((1.0 - alpha) * r[0] + alpha * r[1]);
  }
  std::vector<double> distinct(scores);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<double> candidates{distinct.front() - 1.0, distinct.back() + 1.0};
  for (std::size_t i = 1; i < distinct.size(); ++i) {
    candidates.push_back((distinct[i - 1] + distinct[i]) / 2.0);
  }
  std::size_t best = 0;
  for (double t : candidates) {
    std::size_t above = 0, below = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
      const bool pos = train[i].label == Label::spreader;
      above += (scores[i] > t) == pos;
      below += (scores[i] < t) == pos;
    }
    best = std::max({best, above, below});
  }
  return static_cast<double>(best) / static_cast<double>(train.size());
}

FeatureMatrix feature_matrix(const std::vector<std::array<double, 2>>& rows,
                             FeatureStrategy strategy) {
  FeatureMatrix x;
  x.strategy = strategy;
  for (const auto& r : rows) {
    x.values.push_back(r[0]);
    x.values.push_back(r[1]);
  }
  return x;
}

}  // namespace trustsage::oracle
