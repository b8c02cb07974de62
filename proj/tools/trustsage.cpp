// trustsage command-line front end.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trustsage/baselines.hpp"
#include "trustsage/community.hpp"
#include "trustsage/error.hpp"
#include "trustsage/eval.hpp"
#include "trustsage/features.hpp"
#include "trustsage/graph.hpp"
#include "trustsage/rng.hpp"
#include "trustsage/sage.hpp"
#include "trustsage/sampler.hpp"
#include "trustsage/synth.hpp"
#include "trustsage/tsm.hpp"
#include "trustsage/tsv.hpp"

namespace fs = std::filesystem;
using namespace trustsage;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::vector<std::string> overrides;  // key=value
};

ExperimentConfig load_config(const Globals& g) {
  KeyValueConfig kv;
  if (!g.config.empty()) kv = KeyValueConfig::load(g.config);
  for (const auto& item : g.overrides) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + item + "'");
    kv.set(item.substr(0, eq), item.substr(eq + 1));
  }
  if (g.seed) kv.set("seed", std::to_string(*g.seed));
  return ExperimentConfig::from_config(kv);
}

fs::path out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

void write_json(const nlohmann::json& j, const fs::path& path) {
  auto out = tsv::open_output(path);
  out << j.dump(2) << '\n';
  if (!out) throw InputError("write failure on " + path.string());
}

// Inputs shared by the model-facing subcommands.
struct ModelInputs {
  std::string edges;
  std::string trust;
  std::string believability;
  std::string activity;
  std::string retweets;
  std::string strategy = "top/top";
};

void add_model_inputs(CLI::App* cmd, ModelInputs& in) {
  cmd->add_option("--edges", in.edges, "edge list (src<TAB>dst[<TAB>weight])")
      ->required()->check(CLI::ExistingFile);
  cmd->add_option("--trust", in.trust, "trust_scores.tsv")->required()->check(CLI::ExistingFile);
  cmd->add_option("--believability", in.believability, "believability.tsv")
      ->required()->check(CLI::ExistingFile);
  cmd->add_option("--activity", in.activity, "activity CSV")->check(CLI::ExistingFile);
  cmd->add_option("--retweets", in.retweets, "pairwise retweet CSV")->check(CLI::ExistingFile);
  cmd->add_option("--strategy", in.strategy, "<sampler>/<features>, e.g. top/top, rand/act");
}

struct Loaded {
  DirectedGraph graph;
  TrustScores scores;
  BelievabilityScores bel;
  std::optional<ActivityTable> activity;
};

Loaded load_inputs(const ModelInputs& in) {
  Loaded l;
  l.graph = load_edge_list(in.edges).graph;
  l.scores = load_trust_scores(l.graph, in.trust);
  l.bel = load_believability(l.graph, in.believability);
  if (!in.activity.empty()) {
    l.activity = load_activity(l.graph, in.activity,
                               in.retweets.empty() ? std::nullopt
                                                   : std::optional<fs::path>(in.retweets));
  }
  return l;
}

FeatureMatrix features_for(const Loaded& l, FeatureStrategy s) {
  if (s == FeatureStrategy::act && !l.activity) throw InputError("act features need --activity");
  return build_features(l.scores, l.activity ? &*l.activity : nullptr, s);
}

SamplingWeights weights_for(const Loaded& l, SamplerSource s, SampleDirection dir) {
  switch (s) {
    case SamplerSource::top: return normalize_weights(l.graph, l.bel.values, dir);
    case SamplerSource::act:
      if (!l.activity) throw InputError("act sampling needs --activity and --retweets");
      return normalize_weights(l.graph, retweet_edge_weights(l.graph, *l.activity), dir);
    case SamplerSource::rand: break;
  }
  std::vector<double> ones(l.graph.edge_count(), 1.0);
  return normalize_weights(l.graph, ones, dir);
}

std::vector<LabeledExample> task_examples(const DirectedGraph& g, const std::string& trace_path,
                                          const std::string& communities_path,
                                          const ExperimentConfig& cfg) {
  auto trace = load_trace(g, trace_path);
  auto parts = load_communities(g, communities_path);
  auto cha = cha_partition(g, parts, cfg.neighbor_direction);
  auto sets = make_labeled_dataset(trace, cha);
  return cfg.task == Task::boundary ? sets.boundary : sets.core;
}

// ---------------------------------------------------------------------------

int cmd_tsm(const Globals& g, const std::string& edges) {
  const auto cfg = load_config(g);
  auto load = load_edge_list(edges);
  auto scores = compute_tsm(load.graph, cfg.tsm);
  auto bel = compute_believability(load.graph, scores);
  save_trust_scores(load.graph, scores, out_path(g, "trust_scores.tsv"));
  save_believability(load.graph, bel, out_path(g, "believability.tsv"));
  std::cout << "nodes " << load.graph.node_count() << " edges " << load.graph.edge_count()
            << " iterations " << scores.iterations_run << " converged "
            << (scores.converged ? "yes" : "no") << " last_change "
            << tsv::format_double(scores.last_change) << '\n';
  if (load.duplicate_edges || load.self_loops) {
    std::cerr << "dropped " << load.duplicate_edges << " duplicate edges and " << load.self_loops
              << " self-loops\n";
  }
  return 0;
}

int cmd_communities(const Globals& g, const std::string& edges) {
  const auto cfg = load_config(g);
  auto graph = load_edge_list(edges).graph;
  LouvainConfig lc;
  lc.resolution = cfg.louvain_resolution;
  lc.seed = SeedSchedule::from_master(cfg.master_seed).louvain;
  auto p = louvain(graph, lc);
  save_communities(graph, p, out_path(g, "communities.tsv"));
  std::cout << "communities " << p.community_count << " modularity "
            << tsv::format_double(p.modularity) << '\n';
  return 0;
}

int cmd_cha(const Globals& g, const std::string& edges, const std::string& communities,
            const std::string& direction) {
  auto cfg = load_config(g);
  if (!direction.empty()) cfg.neighbor_direction = parse_neighbor_direction(direction);
  auto graph = load_edge_list(edges).graph;
  auto p = load_communities(graph, communities);
  auto cha = cha_partition(graph, p, cfg.neighbor_direction);
  save_cha(graph, cha, out_path(g, "cha.tsv"));
  std::size_t boundary = 0, core = 0;
  for (auto r : cha.role) (r == NodeRole::boundary ? boundary : core)++;
  std::cout << "communities " << cha.communities.size() << " boundary " << boundary << " core "
            << core << '\n';
  return 0;
}

int cmd_featurize(const Globals& g, const ModelInputs& in) {
  const auto cfg = load_config(g);
  auto spec = ModelSpec::parse(in.strategy);
  if (spec.is_baseline) throw InputError("--strategy must be <sampler>/<features>");
  auto l = load_inputs(in);
  auto x = features_for(l, spec.features);
  auto w = weights_for(l, spec.sampler, cfg.sample_direction);
  save_features(l.graph, x, out_path(g, "features.tsv"));
  save_sampling_weights(l.graph, w, out_path(g, "sampling_weights.tsv"));
  std::cout << "features " << to_string(spec.features) << " rows " << x.rows() << " flagged "
            << x.flagged_nodes << " sampler " << to_string(spec.sampler)
            << " nodes_without_targets " << w.flagged_nodes << '\n';
  return 0;
}

int cmd_sample(const Globals& g, const std::string& edges, const std::string& weights_path,
               const std::string& root, const std::string& mode) {
  const auto cfg = load_config(g);
  auto graph = load_edge_list(edges).graph;
  auto w = load_sampling_weights(graph, weights_path, cfg.sample_direction);
  SamplerConfig sc;
  sc.depth = cfg.train.depth;
  sc.sample_size = cfg.train.sample_size;
  sc.mode = parse_sampler_mode(mode);
  sc.seed = cfg.master_seed;
  auto nbh = sample(resolve_node(graph, root), w, sc);
  for (int k = 0; k < static_cast<int>(nbh.hops.size()); ++k) {
    std::cout << "hop " << k << ':';
    for (NodeId v : nbh.hops[k]) std::cout << ' ' << graph.label(v);
    std::cout << '\n';
  }
  return 0;
}

int cmd_synth(const Globals& g) {
  auto cfg = load_config(g);
  cfg.edges.reset();
  auto data = prepare(cfg);
  save_edge_list(data.graph, out_path(g, "edges.tsv"));
  if (data.planted) save_communities(data.graph, *data.planted, out_path(g, "planted.tsv"));
  save_communities(data.graph, data.communities, out_path(g, "communities.tsv"));
  save_cha(data.graph, data.cha, out_path(g, "cha.tsv"));
  save_trust_scores(data.graph, data.scores, out_path(g, "trust_scores.tsv"));
  save_believability(data.graph, data.believability, out_path(g, "believability.tsv"));
  save_trace(data.graph, data.trace, out_path(g, "trace.tsv"));
  save_activity(data.graph, *data.activity, out_path(g, "activity.csv"),
                out_path(g, "retweets.csv"));
  std::size_t spreaders = 0;
  for (const auto& ex : data.examples(cfg.task)) spreaders += ex.label == Label::spreader;
  std::cout << "nodes " << data.graph.node_count() << " edges " << data.graph.edge_count()
            << " beta " << tsv::format_double(data.beta) << " spreaders "
            << data.trace.spreader_count() << " " << to_string(cfg.task) << "_examples "
            << data.examples(cfg.task).size() << " " << to_string(cfg.task) << "_spreaders "
            << spreaders << '\n';
  return 0;
}

int cmd_train(const Globals& g, const ModelInputs& in, const std::string& trace,
              const std::string& communities, const std::string& model_out) {
  const auto cfg = load_config(g);
  auto spec = ModelSpec::parse(in.strategy);
  if (spec.is_baseline) throw InputError("use the baseline subcommand for threshold models");
  auto l = load_inputs(in);
  auto examples = task_examples(l.graph, trace, communities, cfg);
  // one decile held out for model selection
  const auto seeds = SeedSchedule::from_master(cfg.master_seed);
  auto fold = make_splits(examples, SplitPlan{1, seeds.split}).front();
  std::vector<LabeledExample> train_set, val;
  for (auto i : fold.train) train_set.push_back(examples[i]);
  for (auto i : fold.test) train_set.push_back(examples[i]);
  for (auto i : fold.val) val.push_back(examples[i]);

  TrainConfig tc = cfg.train;
  tc.seed = seeds.train;
  tc.sampler_mode = spec.sampler == SamplerSource::rand ? SamplerMode::uniform
                                                        : SamplerMode::weighted;
  auto x = features_for(l, spec.features);
  auto w = weights_for(l, spec.sampler, cfg.sample_direction);
  auto result = train(train_set, val, w, x, tc);
  const fs::path path = model_out.empty() ? out_path(g, "model.json") : fs::path(model_out);
  save_model(result.params, tc, path);
  for (const auto& e : result.log) {
    std::cout << "epoch " << e.epoch << " train_loss " << tsv::format_double(e.train_loss)
              << " val_loss " << tsv::format_double(e.val_loss) << '\n';
  }
  std::cout << "best_epoch " << result.best_epoch << " model " << path.string() << '\n';
  return 0;
}

int cmd_predict(const Globals& g, const ModelInputs& in, const std::string& model,
                const std::string& nodes_file) {
  const auto cfg = load_config(g);
  auto spec = ModelSpec::parse(in.strategy);
  if (spec.is_baseline) throw InputError("--strategy must be <sampler>/<features>");
  auto l = load_inputs(in);
  TrainConfig tc;
  auto params = load_model(model, &tc);
  tc.sampler_mode = spec.sampler == SamplerSource::rand ? SamplerMode::uniform
                                                        : SamplerMode::weighted;
  auto x = features_for(l, spec.features);
  auto w = weights_for(l, spec.sampler, cfg.sample_direction);
  std::vector<NodeId> nodes;
  if (nodes_file.empty()) {
    for (NodeId v = 0; v < l.graph.node_count(); ++v) nodes.push_back(v);
  } else {
    tsv::for_each_row(nodes_file, '\t', [&](const auto& f, std::size_t) {
      nodes.push_back(resolve_node(l.graph, f.at(0)));
    });
  }
  auto preds = predict(nodes, w, x, params, evaluation_sampler(tc));
  auto out = tsv::open_output(out_path(g, "predictions.tsv"));
  for (const auto& p : preds) {
    out << l.graph.label(p.node) << '\t' << tsv::format_double(p.spreader_probability) << '\t'
        << (p.label == Label::spreader ? "spreader" : "non_spreader") << '\n';
  }
  std::cout << "predicted " << preds.size() << " nodes\n";
  return 0;
}

int cmd_baseline(const Globals& g, const ModelInputs& in, const std::string& trace,
                 const std::string& communities, const std::string& selector) {
  const auto cfg = load_config(g);
  auto l = load_inputs(in);
  auto examples = task_examples(l.graph, trace, communities, cfg);
  auto x = features_for(l, cfg.baseline_features);
  auto balanced = undersample(examples, SeedSchedule::from_master(cfg.master_seed).train);
  auto model = fit_threshold(balanced, x, parse_threshold_selector(selector));
  nlohmann::json j = {
      {"selector", std::string(to_string(model.selector))},
      {"alpha", model.alpha},
      {"threshold", model.threshold},
      {"polarity", model.polarity == ThresholdModel::Polarity::above ? "above" : "below"},
      {"training_accuracy", model.training_accuracy},
      {"features", std::string(to_string(cfg.baseline_features))},
  };
  write_json(j, out_path(g, "baseline.json"));
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_evaluate(const Globals& g, const std::string& edges, const std::string& predictions,
                 const std::string& trace) {
  auto graph = load_edge_list(edges).graph;
  auto t = load_trace(graph, trace);
  std::vector<Label> predicted, truth;
  tsv::for_each_row(predictions, '\t', [&](const auto& f, std::size_t line) {
    if (f.size() < 3) {
      throw InputError(predictions + ":" + std::to_string(line) +
                       ": expected node<TAB>probability<TAB>label");
    }
    NodeId v = resolve_node(graph, f[0]);
    predicted.push_back(f[2] == "spreader" ? Label::spreader : Label::non_spreader);
    truth.push_back(t.status[v] == CascadeStatus::spreader ? Label::spreader
                                                           : Label::non_spreader);
  });
  auto m = compute_metrics(predicted, truth);
  auto j = to_json(m);
  write_json(j, out_path(g, "metrics.json"));
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_pipeline(const Globals& g) {
  const auto cfg = load_config(g);
  auto report = run_experiment(cfg);
  auto j = report.to_json();
  const auto path = out_path(g, "report.json");
  write_json(j, path);
  for (const auto& run : report.models) {
    const auto& m = run.metrics.mean;
    std::cout << run.name << " accuracy " << tsv::format_double(m.accuracy) << " precision "
              << tsv::format_double(m.precision) << " recall " << tsv::format_double(m.recall)
              << " f1 " << tsv::format_double(m.f1) << '\n';
  }
  std::cout << "report " << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trust-aware spreader prediction on community boundaries"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--config", globals.config, "flat key = value configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", globals.seed, "master seed (overrides the config)");
  app.add_option("--out-dir", globals.out_dir, "directory for output files");
  app.add_option("--set", globals.overrides, "config override key=value (repeatable)");

  std::string edges, communities, direction, weights, root, mode = "weighted";
  std::string trace, model, nodes_file, selector = "interpolation", predictions;
  ModelInputs inputs;

  auto* tsm = app.add_subcommand("tsm", "trust scores and believability");
  tsm->add_option("--edges", edges)->required()->check(CLI::ExistingFile);

  auto* comm = app.add_subcommand("communities", "Louvain communities");
  comm->add_option("--edges", edges)->required()->check(CLI::ExistingFile);

  auto* cha = app.add_subcommand("cha", "neighbor / boundary / core roles");
  cha->add_option("--edges", edges)->required()->check(CLI::ExistingFile);
  cha->add_option("--communities", communities)->required()->check(CLI::ExistingFile);
  cha->add_option("--direction", direction, "either|in|out");

  auto* feat = app.add_subcommand("featurize", "feature matrix and sampling weights");
  add_model_inputs(feat, inputs);

  auto* smp = app.add_subcommand("sample", "print a sampled neighbourhood");
  smp->add_option("--edges", edges)->required()->check(CLI::ExistingFile);
  smp->add_option("--weights", weights, "sampling_weights.tsv")
      ->required()->check(CLI::ExistingFile);
  smp->add_option("--root", root, "node label or id")->required();
  smp->add_option("--mode", mode, "weighted|uniform");

  auto* syn = app.add_subcommand("synth", "synthetic network, cascade and activity");

  auto* trn = app.add_subcommand("train", "train a SAGE model");
  add_model_inputs(trn, inputs);
  trn->add_option("--trace", trace)->required()->check(CLI::ExistingFile);
  trn->add_option("--communities", communities)->required()->check(CLI::ExistingFile);
  trn->add_option("--model", model, "checkpoint path (default <out-dir>/model.json)");

  auto* prd = app.add_subcommand("predict", "spreader probabilities from a checkpoint");
  add_model_inputs(prd, inputs);
  prd->add_option("--model", model)->required()->check(CLI::ExistingFile);
  prd->add_option("--nodes", nodes_file, "one node per line (default: all)")
      ->check(CLI::ExistingFile);

  auto* bas = app.add_subcommand("baseline", "fit a threshold baseline");
  add_model_inputs(bas, inputs);
  bas->add_option("--trace", trace)->required()->check(CLI::ExistingFile);
  bas->add_option("--communities", communities)->required()->check(CLI::ExistingFile);
  bas->add_option("--selector", selector, "trusting|trusted|interpolation");

  auto* evl = app.add_subcommand("evaluate", "score predictions against a trace");
  evl->add_option("--edges", edges)->required()->check(CLI::ExistingFile);
  evl->add_option("--predictions", predictions)->required()->check(CLI::ExistingFile);
  evl->add_option("--trace", trace)->required()->check(CLI::ExistingFile);

  auto* pip = app.add_subcommand("pipeline", "full cross-validated experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*tsm) return cmd_tsm(globals, edges);
    if (*comm) return cmd_communities(globals, edges);
    if (*cha) return cmd_cha(globals, edges, communities, direction);
    if (*feat) return cmd_featurize(globals, inputs);
    if (*smp) return cmd_sample(globals, edges, weights, root, mode);
    if (*syn) return cmd_synth(globals);
    if (*trn) return cmd_train(globals, inputs, trace, communities, model);
    if (*prd) return cmd_predict(globals, inputs, model, nodes_file);
    if (*bas) return cmd_baseline(globals, inputs, trace, communities, selector);
    if (*evl) return cmd_evaluate(globals, edges, predictions, trace);
    if (*pip) return cmd_pipeline(globals);
  } catch (const ContractError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 3;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
