#include "trustsage/eval.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <numeric>
#include <sstream>

#include "trustsage/error.hpp"
#include "trustsage/rng.hpp"
#include "trustsage/tsv.hpp"

namespace trustsage {

std::vector<Fold> make_splits(std::span<const LabeledExample> examples, const SplitPlan& plan) {
  constexpr std::size_t kDeciles = 10;
  const std::size_t n = examples.size();
  if (n < kDeciles) {
    throw ContractError("cross-validation needs at least 10 examples, got " + std::to_string(n));
  }
  if (plan.folds < 1 || plan.folds > kDeciles / 2) {
    throw InputError("fold count must lie in [1, 5]");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(plan.seed);
  rng.shuffle(std::span<std::size_t>(order));

  auto decile = [&](std::size_t d) {
    return std::vector<std::size_t>(order.begin() + static_cast<std::ptrdiff_t>(d * n / kDeciles),
                                    order.begin() +
                                        static_cast<std::ptrdiff_t>((d + 1) * n / kDeciles));
  };
  std::vector<Fold> folds;
  for (std::size_t f = 0; f < plan.folds; ++f) {
    const std::size_t test_decile = 2 * f;
    const std::size_t val_decile = (test_decile + 1) % kDeciles;
    Fold fold;
    fold.test = decile(test_decile);
    fold.val = decile(val_decile);
    for (std::size_t d = 0; d < kDeciles; ++d) {
      if (d == test_decile || d == val_decile) continue;
      auto part = decile(d);
      fold.train.insert(fold.train.end(), part.begin(), part.end());
    }
    std::size_t pos = 0;
    for (auto i : fold.train) pos += examples[i].label == Label::spreader;
    if (pos == 0 || pos == fold.train.size()) {
      throw ContractError("fold " + std::to_string(f) + " has a single-class training set");
    }
    folds.push_back(std::move(fold));
  }
  return folds;
}

Metrics metrics_from_confusion(const Confusion& c) {
  Metrics m;
  m.confusion = c;
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.accuracy = ratio(c.tp + c.tn, c.total());
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

Metrics compute_metrics(std::span<const Label> predicted, std::span<const Label> truth) {
  if (predicted.size() != truth.size()) {
    throw InputError("predicted and true labels differ in length");
  }
  if (predicted.empty()) throw InputError("cannot score an empty prediction set");
  Confusion c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predicted[i] == Label::spreader;
    const bool t = truth[i] == Label::spreader;
    if (p && t) ++c.tp;
    else if (p && !t) ++c.fp;
    else if (!p && t) ++c.fn;
    else ++c.tn;
  }
  return metrics_from_confusion(c);
}

MetricsReport summarize(std::vector<Metrics> folds) {
  MetricsReport report;
  report.folds = std::move(folds);
  if (report.folds.empty()) return report;
  const double k = static_cast<double>(report.folds.size());
  for (const auto& m : report.folds) {
    report.mean.confusion.tp += m.confusion.tp;
    report.mean.confusion.fp += m.confusion.fp;
    report.mean.confusion.fn += m.confusion.fn;
    report.mean.confusion.tn += m.confusion.tn;
    report.mean.accuracy += m.accuracy / k;
    report.mean.precision += m.precision / k;
    report.mean.recall += m.recall / k;
    report.mean.f1 += m.f1 / k;
  }
  return report;
}

nlohmann::json to_json(const Metrics& m) {
  return {{"tp", m.confusion.tp},     {"fp", m.confusion.fp},   {"fn", m.confusion.fn},
          {"tn", m.confusion.tn},     {"accuracy", m.accuracy}, {"precision", m.precision},
          {"recall", m.recall},       {"f1", m.f1}};
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, const std::string& origin) {
  KeyValueConfig cfg;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::string content = trim(line);
    if (content.empty()) continue;
    auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw InputError(origin + ":" + std::to_string(line_number) + ": expected key = value");
    }
    std::string key = trim(std::string_view(content).substr(0, eq));
    if (key.empty()) throw InputError(origin + ":" + std::to_string(line_number) + ": empty key");
    cfg.set(key, trim(std::string_view(content).substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  auto in = tsv::open_input(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

SamplerSource parse_sampler_source(std::string_view text) {
  if (text == "top") return SamplerSource::top;
  if (text == "act") return SamplerSource::act;
  if (text == "rand") return SamplerSource::rand;
  throw InputError("sampler must be top|act|rand, got '" + std::string(text) + "'");
}

std::string_view to_string(SamplerSource s) {
  switch (s) {
    case SamplerSource::top: return "top";
    case SamplerSource::act: return "act";
    case SamplerSource::rand: return "rand";
  }
  return "top";
}

ModelSpec ModelSpec::parse(std::string_view text) {
  ModelSpec spec;
  auto sep = text.find_first_of("/x");
  if (sep == std::string_view::npos) {
    spec.is_baseline = true;
    spec.baseline = parse_threshold_selector(text);
    return spec;
  }
  spec.sampler = parse_sampler_source(text.substr(0, sep));
  spec.features = parse_feature_strategy(text.substr(sep + 1));
  return spec;
}

std::string ModelSpec::name() const {
  if (is_baseline) return std::string(to_string(baseline));
  return std::string(to_string(sampler)) + "/" + std::string(to_string(features));
}

Task parse_task(std::string_view text) {
  if (text == "boundary") return Task::boundary;
  if (text == "core") return Task::core;
  throw InputError("task must be boundary|core, got '" + std::string(text) + "'");
}

std::string_view to_string(Task t) { return t == Task::boundary ? "boundary" : "core"; }

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InputError(key + ": expected true|false, got '" + v + "'");
}

std::size_t parse_size(const std::string& v, const std::string& key) {
  long long x = tsv::parse_int(v, key);
  if (x < 0) throw InputError(key + ": must be nonnegative");
  return static_cast<std::size_t>(x);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_config(const KeyValueConfig& kv) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : kv.values()) {
    const std::string& v = value;
    if (key == "edges") cfg.edges = v;
    else if (key == "trace") cfg.trace = v;
    else if (key == "activity") cfg.activity = v;
    else if (key == "retweets") cfg.retweets = v;
    else if (key == "synth.communities") cfg.synth_communities = parse_size(v, key);
    else if (key == "synth.community_size") cfg.synth_community_size = parse_size(v, key);
    else if (key == "synth.p_in") cfg.synth_p_in = tsv::parse_double(v, key);
    else if (key == "synth.p_out") cfg.synth_p_out = tsv::parse_double(v, key);
    else if (key == "cascade.seeds") cfg.cascade_seeds = parse_size(v, key);
    else if (key == "cascade.beta") cfg.beta = tsv::parse_double(v, key);
    else if (key == "cascade.target_low") cfg.target_low = tsv::parse_double(v, key);
    else if (key == "cascade.target_high") cfg.target_high = tsv::parse_double(v, key);
    else if (key == "task") cfg.task = parse_task(v);
    else if (key == "models") {
      cfg.models.clear();
      for (auto part : tsv::split(v, ',')) {
        std::string name = trim(part);
        if (!name.empty()) cfg.models.push_back(ModelSpec::parse(name));
      }
      if (cfg.models.empty()) throw InputError("models: at least one model is required");
    }
    else if (key == "baseline.features") cfg.baseline_features = parse_feature_strategy(v);
    else if (key == "tsm.involvement") cfg.tsm.involvement = tsv::parse_double(v, key);
    else if (key == "tsm.max_iterations") cfg.tsm.max_iterations = static_cast<int>(parse_size(v, key));
    else if (key == "tsm.epsilon") cfg.tsm.epsilon = tsv::parse_double(v, key);
    else if (key == "tsm.initial_score") cfg.tsm.initial_score = tsv::parse_double(v, key);
    else if (key == "tsm.normalize") cfg.tsm.normalize = parse_bool(v, key);
    else if (key == "louvain.resolution") cfg.louvain_resolution = tsv::parse_double(v, key);
    else if (key == "cha.neighbor_direction") cfg.neighbor_direction = parse_neighbor_direction(v);
    else if (key == "sample.direction") cfg.sample_direction = parse_sample_direction(v);
    else if (key == "train.learning_rate") cfg.train.learning_rate = tsv::parse_double(v, key);
    else if (key == "train.epochs") cfg.train.epochs = static_cast<int>(parse_size(v, key));
    else if (key == "train.batch_size") cfg.train.batch_size = parse_size(v, key);
    else if (key == "train.hidden_dim") cfg.train.hidden_dim = parse_size(v, key);
    else if (key == "train.depth") cfg.train.depth = static_cast<int>(parse_size(v, key));
    else if (key == "train.aggregator") cfg.train.aggregator = parse_aggregator(v);
    else if (key == "train.sample_size") cfg.train.sample_size = parse_size(v, key);
    else if (key == "train.resample") cfg.train.resample_each_epoch = parse_bool(v, key);
    else if (key == "eval.folds") cfg.folds = parse_size(v, key);
    else if (key == "seed") cfg.master_seed = static_cast<std::uint64_t>(tsv::parse_int(v, key));
    else throw InputError("unknown configuration key '" + key + "'");
  }
  cfg.tsm.validate();
  cfg.train.validate();
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  auto path_or_null = [](const std::optional<std::filesystem::path>& p) {
    return p ? nlohmann::json(p->string()) : nlohmann::json(nullptr);
  };
  std::vector<std::string> names;
  for (const auto& m : models) names.push_back(m.name());
  return {
      {"edges", path_or_null(edges)},
      {"trace", path_or_null(trace)},
      {"activity", path_or_null(activity)},
      {"retweets", path_or_null(retweets)},
      {"synth.communities", synth_communities},
      {"synth.community_size", synth_community_size},
      {"synth.p_in", synth_p_in},
      {"synth.p_out", synth_p_out},
      {"cascade.seeds", cascade_seeds},
      {"cascade.beta", beta},
      {"cascade.target_low", target_low},
      {"cascade.target_high", target_high},
      {"task", std::string(to_string(task))},
      {"models", names},
      {"baseline.features", std::string(to_string(baseline_features))},
      {"tsm.involvement", tsm.involvement},
      {"tsm.max_iterations", tsm.max_iterations},
      {"tsm.epsilon", tsm.epsilon},
      {"tsm.initial_score", tsm.initial_score},
      {"tsm.normalize", tsm.normalize},
      {"louvain.resolution", louvain_resolution},
      {"cha.neighbor_direction", std::string(to_string(neighbor_direction))},
      {"sample.direction", sample_direction == SampleDirection::out ? "out" : "in"},
      {"train.learning_rate", train.learning_rate},
      {"train.epochs", train.epochs},
      {"train.batch_size", train.batch_size},
      {"train.hidden_dim", train.hidden_dim},
      {"train.depth", train.depth},
      {"train.aggregator", std::string(to_string(train.aggregator))},
      {"train.sample_size", train.sample_size},
      {"train.resample", train.resample_each_epoch},
      {"eval.folds", folds},
      {"seed", master_seed},
  };
}

SeedSchedule SeedSchedule::from_master(std::uint64_t master) {
  SeedSchedule s;
  s.sbm = mix_seed(master, 1);
  s.cascade = mix_seed(master, 2);
  s.louvain = mix_seed(master, 3);
  s.split = mix_seed(master, 4);
  s.train = mix_seed(master, 5);
  s.activity = mix_seed(master, 6);
  return s;
}

nlohmann::json SeedSchedule::to_json() const {
  return {{"sbm", sbm},     {"cascade", cascade}, {"louvain", louvain},
          {"split", split}, {"train", train},     {"activity", activity}};
}

// ---------------------------------------------------------------------------

const FeatureMatrix& PreparedData::features(FeatureStrategy s) const {
  if (s == FeatureStrategy::top) return top_features;
  if (!act_features) throw InputError("activity-based features need an activity file");
  return *act_features;
}

SamplingWeights PreparedData::sampling_weights(SamplerSource s, SampleDirection dir) const {
  switch (s) {
    case SamplerSource::top: return normalize_weights(graph, believability.values, dir);
    case SamplerSource::act: {
      if (!activity) throw InputError("activity-based sampling needs a retweet file");
      return normalize_weights(graph, retweet_edge_weights(graph, *activity), dir);
    }
    case SamplerSource::rand: {
      std::vector<double> ones(graph.edge_count(), 1.0);
      return normalize_weights(graph, ones, dir);
    }
  }
  throw InputError("unknown sampler source");
}

const std::vector<LabeledExample>& PreparedData::examples(Task t) const {
  return t == Task::boundary ? datasets.boundary : datasets.core;
}

namespace {

template <typename F>
auto staged(const std::string& stage, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ContractError& e) {
    throw ContractError(stage + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(stage + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(stage + ": " + e.what());
  }
}

std::vector<NodeId> task_nodes(const ChaPartition& cha, Task task) {
  const NodeRole want = task == Task::boundary ? NodeRole::boundary : NodeRole::core;
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < cha.role.size(); ++v) {
    if (cha.role[v] == want) nodes.push_back(v);
  }
  return nodes;
}

}  // namespace

PreparedData prepare(const ExperimentConfig& cfg) {
  const SeedSchedule seeds = SeedSchedule::from_master(cfg.master_seed);
  PreparedData data;
  const bool synthetic = !cfg.edges.has_value();

  if (synthetic) {
    auto sbm = staged("synth", [&] {
      return generate_sbm(SbmConfig::equal_blocks(cfg.synth_communities, cfg.synth_community_size,
                                                  cfg.synth_p_in, cfg.synth_p_out, seeds.sbm));
    });
    data.graph = std::move(sbm.graph);
    data.planted = std::move(sbm.planted);
  } else {
    if (!cfg.trace) throw InputError("load: a cascade trace file is required with real edges");
    data.graph = staged("load", [&] { return load_edge_list(*cfg.edges).graph; });
  }

  data.scores = staged("tsm", [&] { return compute_tsm(data.graph, cfg.tsm); });
  data.believability = staged("tsm", [&] { return compute_believability(data.graph, data.scores); });
  data.communities = staged("communities", [&] {
    LouvainConfig lc;
    lc.resolution = cfg.louvain_resolution;
    lc.seed = seeds.louvain;
    return louvain(data.graph, lc);
  });
  data.cha = staged("cha", [&] {
    return cha_partition(data.graph, data.communities, cfg.neighbor_direction);
  });

  if (synthetic) {
    staged("cascade", [&] {
      CascadeConfig cc;
      cc.seed_count = cfg.cascade_seeds;
      cc.seed = seeds.cascade;
      cc.seeds = pick_seeds(data.graph.node_count(), cfg.cascade_seeds,
                            mix_seed(seeds.cascade, 0x73656564ULL));
      if (cfg.beta > 0.0) {
        cc.beta = cfg.beta;
      } else {
        std::vector<NodeId> eligible;
        for (NodeId v : task_nodes(data.cha, cfg.task)) {
          if (!std::binary_search(cc.seeds.begin(), cc.seeds.end(), v)) eligible.push_back(v);
        }
        cc.beta = calibrate_beta(data.graph, data.believability, cc, eligible, cfg.target_low,
                                 cfg.target_high);
      }
      data.beta = cc.beta;
      data.trace = simulate_cascade(data.graph, data.believability, cc);
      data.activity = synthesize_activity(data.graph, data.scores, data.believability,
                                          data.trace, seeds.activity);
      return 0;
    });
  } else {
    data.trace = staged("load", [&] { return load_trace(data.graph, *cfg.trace); });
    if (cfg.activity) {
      data.activity = staged("load", [&] {
        return load_activity(data.graph, *cfg.activity, cfg.retweets);
      });
    }
  }

  staged("featurize", [&] {
    data.top_features = build_features(data.scores, nullptr, FeatureStrategy::top);
    if (data.activity) {
      data.act_features = build_features(data.scores, &*data.activity, FeatureStrategy::act);
    }
    return 0;
  });
  data.datasets = staged("label", [&] { return make_labeled_dataset(data.trace, data.cha); });
  return data;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  PreparedData data = prepare(cfg);
  ExperimentReport report = run_experiment(cfg, data);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const PreparedData& data) {
  const auto start = std::chrono::steady_clock::now();
  const SeedSchedule seeds = SeedSchedule::from_master(cfg.master_seed);
  ExperimentReport report;
  report.config = cfg.to_json();
  report.seeds = seeds.to_json();

  const auto& examples = data.examples(cfg.task);
  std::size_t spreaders = 0;
  for (const auto& ex : examples) spreaders += ex.label == Label::spreader;
  report.data = {
      {"nodes", data.graph.node_count()},
      {"edges", data.graph.edge_count()},
      {"communities", data.communities.community_count},
      {"modularity", data.communities.modularity},
      {"tsm_iterations", data.scores.iterations_run},
      {"tsm_converged", data.scores.converged},
      {"beta", data.beta},
      {"spreaders_total", data.trace.spreader_count()},
      {"boundary_examples", data.datasets.boundary.size()},
      {"core_examples", data.datasets.core.size()},
      {"task_examples", examples.size()},
      {"task_spreaders", spreaders},
  };
  if (data.planted) {
    report.data["planted_nmi"] = normalized_mutual_information(data.planted->assignment,
                                                               data.communities.assignment);
  }

  const auto folds = staged("split", [&] {
    return make_splits(examples, SplitPlan{cfg.folds, seeds.split});
  });
  auto pick = [&](const std::vector<std::size_t>& idx) {
    std::vector<LabeledExample> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(examples[i]);
    return out;
  };

  for (const auto& spec : cfg.models) {
    ModelRun run;
    run.name = spec.name();
    std::vector<Metrics> fold_metrics;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const auto train_ex = pick(folds[f].train);
      const auto val_ex = pick(folds[f].val);
      const auto test_ex = pick(folds[f].test);
      std::vector<NodeId> test_nodes;
      std::vector<Label> truth;
      for (const auto& ex : test_ex) {
        test_nodes.push_back(ex.node);
        truth.push_back(ex.label);
      }
      nlohmann::json detail = {{"fold", f},
                               {"train_size", train_ex.size()},
                               {"val_size", val_ex.size()},
                               {"test_size", test_ex.size()}};
      std::vector<Label> predicted;
      if (spec.is_baseline) {
        staged("baseline " + run.name, [&] {
          const auto& x = data.features(cfg.baseline_features);
          auto balanced = undersample(train_ex, mix_seed(seeds.train, f, 0x62617365ULL));
          auto model = fit_threshold(balanced, x, spec.baseline);
          predicted = predict_threshold(model, x, test_nodes);
          detail["alpha"] = model.alpha;
          detail["threshold"] = model.threshold;
          detail["polarity"] = model.polarity == ThresholdModel::Polarity::above ? "above" : "below";
          detail["training_accuracy"] = model.training_accuracy;
          return 0;
        });
      } else {
        staged("train " + run.name, [&] {
          const auto& x = data.features(spec.features);
          const auto weights = data.sampling_weights(spec.sampler, cfg.sample_direction);
          TrainConfig tc = cfg.train;
          tc.seed = mix_seed(seeds.train, f);
          tc.sampler_mode =
              spec.sampler == SamplerSource::rand ? SamplerMode::uniform : SamplerMode::weighted;
          auto trained = train(train_ex, val_ex, weights, x, tc);
          auto preds = predict(test_nodes, weights, x, trained.params, evaluation_sampler(tc));
          for (const auto& p : preds) predicted.push_back(p.label);
          detail["best_epoch"] = trained.best_epoch;
          detail["train_spreaders"] = trained.train_spreaders;
          detail["train_non_spreaders"] = trained.train_non_spreaders;
          detail["final_train_loss"] = trained.log.back().train_loss;
          detail["best_val_loss"] = trained.log[trained.best_epoch].val_loss;
          return 0;
        });
      }
      fold_metrics.push_back(compute_metrics(predicted, truth));
      run.fold_details.push_back(std::move(detail));
    }
    run.metrics = summarize(std::move(fold_metrics));
    report.models.push_back(std::move(run));
  }

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  report.timestamp = buf;
  return report;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["format"] = "trustsage-report";
  j["version"] = 1;
  j["config"] = config;
  j["seeds"] = seeds;
  j["data"] = data;
  j["models"] = nlohmann::json::array();
  for (const auto& run : models) {
    nlohmann::json m;
    m["name"] = run.name;
    m["folds"] = nlohmann::json::array();
    for (std::size_t f = 0; f < run.metrics.folds.size(); ++f) {
      nlohmann::json entry = trustsage::to_json(run.metrics.folds[f]);
      if (f < run.fold_details.size()) entry.update(run.fold_details[f]);
      m["folds"].push_back(std::move(entry));
    }
    m["mean"] = trustsage::to_json(run.metrics.mean);
    j["models"].push_back(std::move(m));
  }
  j["timestamp"] = timestamp;
  j["runtime_seconds"] = runtime_seconds;
  return j;
}

const ModelRun& ExperimentReport::model(std::string_view name) const {
  for (const auto& run : models) {
    if (run.name == name) return run;
  }
  throw InputError("report has no model named '" + std::string(name) + "'");
}

}  // namespace trustsage
