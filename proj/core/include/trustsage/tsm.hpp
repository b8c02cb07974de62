#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "trustsage/graph.hpp"

namespace trustsage {

struct TsmConfig {
  /// Involvement exponent s applied to the neighbour's opposite score.
  double involvement = 0.391;
  int max_iterations = 100;
  /// Stop once the L-infinity change of (ti, tw) between iterations drops
  /// below this value.
  double epsilon = 1e-6;
  /// Starting value for every ti and tw.
  double initial_score = 1.0;
  /// Divide each score vector by its maximum after every iteration.
  bool normalize = true;

  void validate() const;
};

/// Trustingness (ti) and trustworthiness (tw) per node.
struct TrustScores {
  std::vector<double> trustingness;
  std::vector<double> trustworthiness;
  int iterations_run = 0;
  bool converged = false;
  double last_change = 0.0;

  std::size_t size() const { return trustingness.size(); }
};

/// One synchronous (Jacobi) sweep without normalization:
///   ti(v) = sum over out-edges v->x of w / (1 + tw_prev(x)^s)
///   tw(u) = sum over in-edges  x->u of w / (1 + ti_prev(x)^s)
void tsm_sweep(const DirectedGraph& g, double involvement, std::span<const double> ti_prev,
               std::span<const double> tw_prev, std::span<double> ti_next,
               std::span<double> tw_next);

/// Iterates tsm_sweep (plus optional max-normalization) until convergence or
/// the iteration cap. Throws NumericError if a score becomes NaN or infinite.
TrustScores compute_tsm(const DirectedGraph& g, const TsmConfig& cfg = {});

/// Per-edge believability tw(src) * ti(dst), indexed by edge id.
struct BelievabilityScores {
  std::vector<double> values;

  double at(std::size_t edge) const { return values.at(edge); }
  std::optional<double> find(const DirectedGraph& g, NodeId src, NodeId dst) const;
};

BelievabilityScores compute_believability(const DirectedGraph& g, const TrustScores& scores);

/// `node<TAB>ti<TAB>tw` keyed by external label.
void save_trust_scores(const DirectedGraph& g, const TrustScores& scores,
                       const std::filesystem::path& path);
TrustScores load_trust_scores(const DirectedGraph& g, const std::filesystem::path& path);

/// `src<TAB>dst<TAB>bel` keyed by external labels.
void save_believability(const DirectedGraph& g, const BelievabilityScores& bel,
                        const std::filesystem::path& path);
BelievabilityScores load_believability(const DirectedGraph& g, const std::filesystem::path& path);

}  // namespace trustsage
