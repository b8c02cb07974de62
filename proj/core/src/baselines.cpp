#include "trustsage/baselines.hpp"

#include <algorithm>
#include <tuple>

#include "trustsage/error.hpp"

namespace trustsage {

ThresholdSelector parse_threshold_selector(std::string_view text) {
  if (text == "trusting") return ThresholdSelector::trusting;
  if (text == "trusted") return ThresholdSelector::trusted;
  if (text == "interpolation" || text == "interpolated") return ThresholdSelector::interpolated;
  throw InputError("baseline must be trusting|trusted|interpolation, got '" + std::string(text) +
                   "'");
}

std::string_view to_string(ThresholdSelector s) {
  switch (s) {
    case ThresholdSelector::trusting: return "trusting";
    case ThresholdSelector::trusted: return "trusted";
    case ThresholdSelector::interpolated: return "interpolation";
  }
  return "trusting";
}

double ThresholdModel::score(std::span<const double> f) const {
  return (1.0 - alpha) * f[0] + alpha * f[1];
}

Label ThresholdModel::predict(std::span<const double> f) const {
  const double s = score(f);
  const bool hit = polarity == Polarity::above ? s > threshold : s < threshold;
  return hit ? Label::spreader : Label::non_spreader;
}

std::vector<double> interpolation_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(k / 20.0);
  return grid;
}

namespace {

struct Candidate {
  std::size_t correct = 0;
  double threshold = 0.0;
  double alpha = 0.0;
  ThresholdModel::Polarity polarity = ThresholdModel::Polarity::above;
};

/// True if `a` should replace the incumbent `b`.
bool better(const Candidate& a, const Candidate& b) {
  if (a.correct != b.correct) return a.correct > b.correct;
  if (a.threshold != b.threshold) return a.threshold < b.threshold;
  if (a.alpha != b.alpha) return a.alpha < b.alpha;
  return a.polarity == ThresholdModel::Polarity::above &&
         b.polarity == ThresholdModel::Polarity::below;
}

/// Best threshold for one alpha via a sorted sweep.
Candidate best_for_alpha(std::span<const LabeledExample> train, const FeatureMatrix& x,
                         double alpha) {
  ThresholdModel scorer;
  scorer.alpha = alpha;
  std::vector<std::pair<double, bool>> scored;  // (score, is spreader)
  scored.reserve(train.size());
  std::size_t total_pos = 0;
  for (const auto& ex : train) {
    const bool pos = ex.label == Label::spreader;
    total_pos += pos;
    scored.emplace_back(scorer.score(x.row(ex.node)), pos);
  }
  std::sort(scored.begin(), scored.end());
  const std::size_t n = scored.size();
  const std::size_t total_neg = n - total_pos;

  std::vector<double> thresholds;
  thresholds.push_back(scored.front().first - 1.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double lo = scored[i - 1].first;
    const double hi = scored[i].first;
    const double mid = lo + (hi - lo) / 2.0;
    // Adjacent doubles have no representable midpoint.
    if (lo < mid && mid < hi) thresholds.push_back(mid);
  }
  thresholds.push_back(scored.back().first + 1.0);

  Candidate best;
  bool have = false;
  std::size_t idx = 0, pos_below = 0, neg_below = 0;
  for (double t : thresholds) {
    while (idx < n && scored[idx].first <= t) {
      (scored[idx].second ? pos_below : neg_below)++;
      ++idx;
    }
    // above: spreader iff score > t; below: spreader iff score < t. No score
    // equals a midpoint, so "<= t" and "< t" split the same way.
    const std::size_t above_correct = (total_pos - pos_below) + neg_below;
    const std::size_t below_correct = pos_below + (total_neg - neg_below);
    Candidate a{above_correct, t, alpha, ThresholdModel::Polarity::above};
    Candidate b{below_correct, t, alpha, ThresholdModel::Polarity::below};
    if (!have || better(a, best)) best = a;
    have = true;
    if (better(b, best)) best = b;
  }
  return best;
}

}  // namespace

ThresholdModel fit_threshold(std::span<const LabeledExample> train, const FeatureMatrix& x,
                             ThresholdSelector selector) {
  std::size_t pos = 0;
  for (const auto& ex : train) pos += ex.label == Label::spreader;
  if (pos == 0 || pos == train.size()) {
    throw ContractError("threshold baseline needs both classes in the training set");
  }
  std::vector<double> alphas;
  switch (selector) {
    case ThresholdSelector::trusting: alphas = {0.0}; break;
    case ThresholdSelector::trusted: alphas = {1.0}; break;
    case ThresholdSelector::interpolated: alphas = interpolation_grid(); break;
  }
  Candidate best;
  bool have = false;
  for (double alpha : alphas) {
    Candidate c = best_for_alpha(train, x, alpha);
    if (!have || better(c, best)) best = c;
    have = true;
  }
  ThresholdModel model;
  model.selector = selector;
  model.alpha = best.alpha;
  model.threshold = best.threshold;
  model.polarity = best.polarity;
  model.training_accuracy = static_cast<double>(best.correct) / static_cast<double>(train.size());
  return model;
}

std::vector<Label> predict_threshold(const ThresholdModel& model, const FeatureMatrix& x,
                                     std::span<const NodeId> nodes) {
  std::vector<Label> labels;
  labels.reserve(nodes.size());
  for (NodeId v : nodes) {
    if (v >= x.rows()) throw InputError("node " + std::to_string(v) + " has no features");
    labels.push_back(model.predict(x.row(v)));
  }
  return labels;
}

}  // namespace trustsage
