#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "trustsage/baselines.hpp"
#include "trustsage/community.hpp"
#include "trustsage/features.hpp"
#include "trustsage/sage.hpp"
#include "trustsage/synth.hpp"
#include "trustsage/tsm.hpp"

namespace trustsage {

// ---------------------------------------------------------------------------
// Splits

/// Rotating-decile cross-validation: examples are shuffled and cut into ten
/// deciles; fold f tests on decile 2f, validates on decile 2f+1 and trains on
/// the remaining eight.
struct SplitPlan {
  std::size_t folds = 5;
  std::uint64_t seed = 0;
};

/// Index sets into the example list.
struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

/// Throws ContractError with fewer than 10 examples or when some fold's
/// training set lacks a class.
std::vector<Fold> make_splits(std::span<const LabeledExample> examples, const SplitPlan& plan);

// ---------------------------------------------------------------------------
// Metrics (spreader = positive class)

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

struct Metrics {
  Confusion confusion;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

Metrics metrics_from_confusion(const Confusion& c);
Metrics compute_metrics(std::span<const Label> predicted, std::span<const Label> truth);

/// Per-fold metrics and their arithmetic means. The mean entry's confusion
/// counts are summed over folds.
struct MetricsReport {
  std::vector<Metrics> folds;
  Metrics mean;
};

MetricsReport summarize(std::vector<Metrics> folds);

nlohmann::json to_json(const Metrics& m);

// ---------------------------------------------------------------------------
// Configuration

/// Flat `key = value` file; '#' starts a comment. Later keys override
/// earlier ones.
class KeyValueConfig {
 public:
  static KeyValueConfig load(const std::filesystem::path& path);
  static KeyValueConfig parse(std::string_view text, const std::string& origin = "config");

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  bool contains(const std::string& key) const { return values_.count(key) > 0; }
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Where a model's sampling distribution comes from.
enum class SamplerSource { top, act, rand };

SamplerSource parse_sampler_source(std::string_view text);
std::string_view to_string(SamplerSource s);

/// One entry of the model matrix: a SAGE model (`sampler/features`, e.g.
/// "top/top", "rand/act") or a threshold baseline (`trusting`, `trusted`,
/// `interpolation`).
struct ModelSpec {
  bool is_baseline = false;
  SamplerSource sampler = SamplerSource::top;
  FeatureStrategy features = FeatureStrategy::top;
  ThresholdSelector baseline = ThresholdSelector::interpolated;

  static ModelSpec parse(std::string_view text);
  std::string name() const;
};

enum class Task { boundary, core };

Task parse_task(std::string_view text);
std::string_view to_string(Task t);

struct ExperimentConfig {
  // Real inputs. When `edges` is empty a synthetic network is generated.
  std::optional<std::filesystem::path> edges;
  std::optional<std::filesystem::path> trace;
  std::optional<std::filesystem::path> activity;
  std::optional<std::filesystem::path> retweets;

  // Synthetic network and cascade.
  std::size_t synth_communities = 20;
  std::size_t synth_community_size = 250;
  double synth_p_in = 0.06;
  double synth_p_out = 0.003;
  std::size_t cascade_seeds = 10;
  /// Fixed transmission scale; <= 0 calibrates beta so that the spreader
  /// fraction among the task's nodes lands in [target_low, target_high].
  double beta = 0.0;
  double target_low = 0.10;
  double target_high = 0.20;

  Task task = Task::boundary;
  std::vector<ModelSpec> models{ModelSpec::parse("top/top")};
  /// Feature set the threshold baselines score on.
  FeatureStrategy baseline_features = FeatureStrategy::top;

  TsmConfig tsm;
  double louvain_resolution = 1.0;
  NeighborDirection neighbor_direction = NeighborDirection::either;
  SampleDirection sample_direction = SampleDirection::out;
  TrainConfig train;
  std::size_t folds = 5;
  std::uint64_t master_seed = 1;

  /// Applies recognised keys; unknown keys raise InputError.
  static ExperimentConfig from_config(const KeyValueConfig& kv);
  nlohmann::json to_json() const;
};

/// Per-stage seeds fanned out from the master seed.
struct SeedSchedule {
  std::uint64_t sbm = 0;
  std::uint64_t cascade = 0;
  std::uint64_t louvain = 0;
  std::uint64_t split = 0;
  std::uint64_t train = 0;
  std::uint64_t activity = 0;

  static SeedSchedule from_master(std::uint64_t master);
  nlohmann::json to_json() const;
};

/// Everything upstream of model fitting: graph, trust scores, communities,
/// CHA roles, features, labels.
struct PreparedData {
  DirectedGraph graph;
  TrustScores scores;
  BelievabilityScores believability;
  CommunityPartition communities;
  std::optional<CommunityPartition> planted;
  ChaPartition cha;
  CascadeTrace trace;
  std::optional<ActivityTable> activity;
  FeatureMatrix top_features;
  std::optional<FeatureMatrix> act_features;
  LabeledDatasets datasets;
  double beta = 0.0;

  const FeatureMatrix& features(FeatureStrategy s) const;
  SamplingWeights sampling_weights(SamplerSource s, SampleDirection dir) const;
  const std::vector<LabeledExample>& examples(Task t) const;
};

/// Load (or synthesize) → TSM → believability → Louvain → CHA → features →
/// labels. Errors are rethrown with the failing stage prefixed.
PreparedData prepare(const ExperimentConfig& cfg);

struct ModelRun {
  std::string name;
  MetricsReport metrics;
  std::vector<nlohmann::json> fold_details;
};

struct ExperimentReport {
  nlohmann::json config;
  nlohmann::json seeds;
  nlohmann::json data;
  std::vector<ModelRun> models;
  double runtime_seconds = 0.0;
  std::string timestamp;

  nlohmann::json to_json() const;
  const ModelRun& model(std::string_view name) const;
};

/// Runs every configured model over the cross-validation folds.
ExperimentReport run_experiment(const ExperimentConfig& cfg);
ExperimentReport run_experiment(const ExperimentConfig& cfg, const PreparedData& data);

}  // namespace trustsage
