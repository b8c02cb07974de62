#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "trustsage/features.hpp"
#include "trustsage/sage.hpp"

namespace trustsage {

/// Which trust feature a threshold model scores on. Column 0 of the feature
/// matrix is "trusting others", column 1 "trusted by others".
enum class ThresholdSelector { trusting, trusted, interpolated };

ThresholdSelector parse_threshold_selector(std::string_view text);
std::string_view to_string(ThresholdSelector s);

/// score = (1 - alpha) * trusting + alpha * trusted.
/// `above` polarity predicts spreader iff score > threshold, `below` iff
/// score < threshold; a score equal to the threshold is a non-spreader.
struct ThresholdModel {
  enum class Polarity { above, below };

  ThresholdSelector selector = ThresholdSelector::trusting;
  double alpha = 0.0;
  double threshold = 0.0;
  Polarity polarity = Polarity::above;
  double training_accuracy = 0.0;

  double score(std::span<const double> features) const;
  Label predict(std::span<const double> features) const;
};

/// The alpha grid searched for the interpolated model: 0, 0.05, ..., 1.
std::vector<double> interpolation_grid();

/// Accuracy-maximizing 1-D threshold. Candidates are midpoints between
/// consecutive distinct scores plus one threshold below the minimum and one
/// above the maximum; both polarities are tried. Ties prefer the smaller
/// threshold, then the smaller alpha, then `above`. Throws ContractError if
/// only one class is present.
ThresholdModel fit_threshold(std::span<const LabeledExample> train, const FeatureMatrix& x,
                             ThresholdSelector selector);

std::vector<Label> predict_threshold(const ThresholdModel& model, const FeatureMatrix& x,
                                     std::span<const NodeId> nodes);

}  // namespace trustsage
