#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "trustsage/community.hpp"
#include "trustsage/features.hpp"
#include "trustsage/sampler.hpp"

namespace trustsage {

/// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// How a node's own representation is combined with its sampled neighbours.
enum class Aggregator {
  concat,          ///< W * [h_self ; mean(h_neighbours)]
  inclusive_mean,  ///< W * mean({h_self} + h_neighbours)
};

Aggregator parse_aggregator(std::string_view text);
std::string_view to_string(Aggregator a);

/// Weight matrices of the K aggregation layers plus the 2-way classifier.
/// Layer k maps d_{k-1} (or 2 d_{k-1} for concat) inputs to `hidden_dim`.
struct SageParams {
  Aggregator aggregator = Aggregator::concat;
  std::size_t input_dim = FeatureMatrix::kDim;
  std::size_t hidden_dim = 128;
  std::vector<Matrix> layers;
  Matrix classifier;  ///< 2 x hidden_dim; row 0 scores "spreader"

  int depth() const { return static_cast<int>(layers.size()); }
  std::size_t parameter_count() const;

  /// All matrices zero, with the shapes implied by the arguments.
  static SageParams zeros(std::size_t input_dim, std::size_t hidden_dim, int depth,
                          Aggregator aggregator);
  /// Entries uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)).
  static SageParams random(std::size_t input_dim, std::size_t hidden_dim, int depth,
                           Aggregator aggregator, std::uint64_t seed);

  /// this += scale * other (shapes must match).
  void add_scaled(const SageParams& other, double scale);
  void validate() const;

  friend bool operator==(const SageParams&, const SageParams&) = default;
};

enum class Label : std::uint8_t { spreader, non_spreader };

std::string_view to_string(Label label);

struct LabeledExample {
  NodeId node = 0;
  Label label = Label::non_spreader;
  NodeRole role = NodeRole::boundary;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

/// Floor applied to probabilities inside the logarithm.
inline constexpr double kProbabilityFloor = 1e-12;

struct ForwardResult {
  std::vector<double> embedding;  ///< z, L2-normalized unless all zero
  std::array<double, 2> logits{};
  std::array<double, 2> probabilities{};  ///< [spreader, non-spreader]
};

ForwardResult forward(const SampledNeighborhood& nbh, const FeatureMatrix& x,
                      const SageParams& params);

/// -sum_i y_i log(max(p_i, floor)) for one example.
double example_loss(const std::array<double, 2>& probabilities, Label label);
/// Sum of example losses.
double cross_entropy(std::span<const std::array<double, 2>> probabilities,
                     std::span<const Label> labels);

/// Runs forward and backward for one example, adds d(loss)/d(params) into
/// `grad` and returns the example's loss.
double accumulate_gradient(const SampledNeighborhood& nbh, const FeatureMatrix& x,
                           const SageParams& params, Label label, SageParams& grad);

/// Summed loss and its gradient over a batch, accumulated in batch order.
double batch_gradient(std::span<const SampledNeighborhood> nbhs, std::span<const Label> labels,
                      const FeatureMatrix& x, const SageParams& params, SageParams& grad);

/// Summed loss over a batch without gradients.
double batch_loss(std::span<const SampledNeighborhood> nbhs, std::span<const Label> labels,
                  const FeatureMatrix& x, const SageParams& params);

struct TrainConfig {
  double learning_rate = 0.001;
  int epochs = 100;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;
  std::size_t hidden_dim = 128;
  int depth = 1;
  Aggregator aggregator = Aggregator::concat;
  std::size_t sample_size = 25;
  SamplerMode sampler_mode = SamplerMode::weighted;
  /// Draw fresh neighbourhoods every epoch; otherwise reuse the first draw.
  bool resample_each_epoch = true;
  /// Balance the classes of the training set before fitting.
  bool undersample = true;

  void validate() const;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;  ///< mean per-example loss on the (balanced) training set
  double val_loss = 0.0;    ///< mean per-example loss on the validation set, 0 if none
};

struct TrainResult {
  SageParams params;  ///< parameters from the selected epoch; initial params if epochs == 0
  std::vector<EpochLog> log;  ///< entry 0 is the untrained model
  int best_epoch = 0;
  std::size_t train_spreaders = 0;
  std::size_t train_non_spreaders = 0;
};

/// Drops majority-class examples at random until both classes have the same
/// size. Survivors keep their input order.
std::vector<LabeledExample> undersample(std::span<const LabeledExample> examples,
                                        std::uint64_t seed);

/// Minibatch SGD on the summed cross-entropy. Throws ContractError when
/// either class has fewer than two training examples (after balancing).
/// Model selection picks the trained epoch (1..epochs) with the lowest
/// validation loss, or training loss if `val` is empty.
TrainResult train(std::span<const LabeledExample> train_set, std::span<const LabeledExample> val,
                  const SamplingWeights& weights, const FeatureMatrix& x,
                  const TrainConfig& cfg);

struct Prediction {
  NodeId node = 0;
  double spreader_probability = 0.0;
  Label label = Label::non_spreader;  ///< spreader iff probability > 0.5
};

std::vector<Prediction> predict(std::span<const NodeId> nodes, const SamplingWeights& weights,
                                const FeatureMatrix& x, const SageParams& params,
                                const SamplerConfig& sampler);

/// Sampler settings used for evaluation passes of a trained model.
SamplerConfig evaluation_sampler(const TrainConfig& cfg);

/// Versioned JSON checkpoint: dims, row-major values and the training config.
void save_model(const SageParams& params, const TrainConfig& cfg,
                const std::filesystem::path& path);
SageParams load_model(const std::filesystem::path& path, TrainConfig* cfg = nullptr);

}  // namespace trustsage
