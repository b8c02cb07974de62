#include "trustsage/sage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "trustsage/error.hpp"
#include "trustsage/rng.hpp"
#include "trustsage/tsv.hpp"

namespace trustsage {

Aggregator parse_aggregator(std::string_view text) {
  if (text == "concat") return Aggregator::concat;
  if (text == "inclusive_mean" || text == "mean") return Aggregator::inclusive_mean;
  throw InputError("aggregator must be concat|inclusive_mean, got '" + std::string(text) + "'");
}

std::string_view to_string(Aggregator a) {
  return a == Aggregator::concat ? "concat" : "inclusive_mean";
}

std::string_view to_string(Label label) {
  return label == Label::spreader ? "spreader" : "non_spreader";
}

namespace {

std::size_t layer_input_dim(Aggregator a, std::size_t in) {
  return a == Aggregator::concat ? 2 * in : in;
}

std::size_t class_index(Label label) { return label == Label::spreader ? 0 : 1; }

}  // namespace

std::size_t SageParams::parameter_count() const {
  std::size_t count = classifier.data.size();
  for (const auto& w : layers) count += w.data.size();
  return count;
}

SageParams SageParams::zeros(std::size_t input_dim, std::size_t hidden_dim, int depth,
                             Aggregator aggregator) {
  if (depth < 1 || hidden_dim < 1 || input_dim < 1) {
    throw InputError("model needs depth >= 1 and positive dimensions");
  }
  SageParams p;
  p.aggregator = aggregator;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  std::size_t in = input_dim;
  for (int k = 0; k < depth; ++k) {
    p.layers.emplace_back(hidden_dim, layer_input_dim(aggregator, in));
    in = hidden_dim;
  }
  p.classifier = Matrix(2, hidden_dim);
  return p;
}

SageParams SageParams::random(std::size_t input_dim, std::size_t hidden_dim, int depth,
                              Aggregator aggregator, std::uint64_t seed) {
  SageParams p = zeros(input_dim, hidden_dim, depth, aggregator);
  Rng rng(seed);
  auto fill = [&rng](Matrix& m) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(m.cols));
    for (double& v : m.data) v = (2.0 * rng.uniform() - 1.0) * bound;
  };
  for (auto& w : p.layers) fill(w);
  fill(p.classifier);
  return p;
}

void SageParams::add_scaled(const SageParams& other, double scale) {
  if (other.layers.size() != layers.size()) throw InputError("parameter shapes differ");
  auto axpy = [scale](Matrix& dst, const Matrix& src) {
    if (dst.rows != src.rows || dst.cols != src.cols) throw InputError("parameter shapes differ");
    for (std::size_t i = 0; i < dst.data.size(); ++i) dst.data[i] += scale * src.data[i];
  };
  for (std::size_t k = 0; k < layers.size(); ++k) axpy(layers[k], other.layers[k]);
  axpy(classifier, other.classifier);
}

void SageParams::validate() const {
  if (layers.empty()) throw InputError("model has no aggregation layers");
  std::size_t in = input_dim;
  for (const auto& w : layers) {
    if (w.rows != hidden_dim || w.cols != layer_input_dim(aggregator, in) ||
        w.data.size() != w.rows * w.cols) {
      throw InputError("aggregation layer has inconsistent dimensions");
    }
    in = hidden_dim;
  }
  if (classifier.rows != 2 || classifier.cols != hidden_dim ||
      classifier.data.size() != 2 * hidden_dim) {
    throw InputError("classifier has inconsistent dimensions");
  }
  auto finite = [](const Matrix& m) {
    return std::all_of(m.data.begin(), m.data.end(), [](double v) { return std::isfinite(v); });
  };
  if (!finite(classifier) || !std::all_of(layers.begin(), layers.end(), finite)) {
    throw NumericError("model parameters contain NaN or infinity");
  }
}

namespace {

struct LayerTape {
  std::span<const NodeId> nodes;  // nodes whose representation this layer computes
  std::size_t in_dim = 0;
  std::vector<double> input;  // aggregated input per node
  std::vector<double> pre;    // W * input
  std::vector<double> out;    // relu(pre)
};

struct Tape {
  std::vector<double> h0;
  std::vector<LayerTape> layers;
  std::vector<double> hidden;  // h^K of the root, before normalization
  double norm = 0.0;
  ForwardResult result;
};

std::size_t position(std::span<const NodeId> sorted, NodeId v) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
  return static_cast<std::size_t>(it - sorted.begin());
}

void run_forward(const SampledNeighborhood& nbh, const FeatureMatrix& x, const SageParams& params,
                 Tape& tape) {
  const int depth = params.depth();
  if (nbh.depth() != depth) {
    throw InputError("neighbourhood sampled to depth " + std::to_string(nbh.depth()) +
                     " but model has " + std::to_string(depth) + " layers");
  }
  if (x.dim() != params.input_dim) throw InputError("feature dimension does not match model");
  const std::size_t d0 = params.input_dim;
  const std::size_t hidden = params.hidden_dim;

  const auto& leaves = nbh.hops[depth];
  tape.h0.resize(leaves.size() * d0);
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i] >= x.rows()) throw InputError("feature matrix is missing sampled nodes");
    auto row = x.row(leaves[i]);
    std::copy(row.begin(), row.end(), tape.h0.begin() + i * d0);
  }

  tape.layers.assign(depth, {});
  std::span<const NodeId> prev_nodes = leaves;
  const std::vector<double>* prev_values = &tape.h0;
  std::size_t prev_dim = d0;
  for (int k = 1; k <= depth; ++k) {
    auto& layer = tape.layers[k - 1];
    const Matrix& w = params.layers[k - 1];
    layer.nodes = nbh.hops[depth - k];
    layer.in_dim = w.cols;
    layer.input.assign(layer.nodes.size() * w.cols, 0.0);
    layer.pre.assign(layer.nodes.size() * hidden, 0.0);
    layer.out.assign(layer.nodes.size() * hidden, 0.0);
    for (std::size_t i = 0; i < layer.nodes.size(); ++i) {
      const NodeId u = layer.nodes[i];
      double* in = layer.input.data() + i * w.cols;
      const double* self = prev_values->data() + position(prev_nodes, u) * prev_dim;
      auto drawn = nbh.drawn_for(depth - k + 1, u);
      std::vector<NodeId> neighbours(drawn.begin(), drawn.end());
      std::sort(neighbours.begin(), neighbours.end());
      double* mean = params.aggregator == Aggregator::concat ? in + prev_dim : in;
      for (NodeId n : neighbours) {
        const double* h = prev_values->data() + position(prev_nodes, n) * prev_dim;
        for (std::size_t j = 0; j < prev_dim; ++j) mean[j] += h[j];
      }
      if (params.aggregator == Aggregator::concat) {
        std::copy(self, self + prev_dim, in);
        if (!neighbours.empty()) {
          const double count = static_cast<double>(neighbours.size());
          for (std::size_t j = 0; j < prev_dim; ++j) mean[j] /= count;
        }
      } else {
        const double count = static_cast<double>(neighbours.size() + 1);
        for (std::size_t j = 0; j < prev_dim; ++j) mean[j] = (mean[j] + self[j]) / count;
      }
      double* pre = layer.pre.data() + i * hidden;
      double* out = layer.out.data() + i * hidden;
      for (std::size_t r = 0; r < hidden; ++r) {
        double acc = 0.0;
        const double* wrow = w.data.data() + r * w.cols;
        for (std::size_t c = 0; c < w.cols; ++c) acc += wrow[c] * in[c];
        pre[r] = acc;
        out[r] = acc > 0.0 ? acc : 0.0;
      }
    }
    prev_nodes = layer.nodes;
    prev_values = &layer.out;
    prev_dim = hidden;
  }

  // The last layer's node set is {root}.
  tape.hidden.assign(tape.layers.back().out.begin(), tape.layers.back().out.end());
  double sq = 0.0;
  for (double v : tape.hidden) sq += v * v;
  tape.norm = std::sqrt(sq);
  auto& res = tape.result;
  res.embedding = tape.hidden;
  if (tape.norm > 0.0) {
    for (double& v : res.embedding) v /= tape.norm;
  }
  for (std::size_t c = 0; c < 2; ++c) {
    double acc = 0.0;
    for (std::size_t j = 0; j < hidden; ++j) acc += params.classifier(c, j) * res.embedding[j];
    res.logits[c] = acc;
  }
  const double top = std::max(res.logits[0], res.logits[1]);
  const double e0 = std::exp(res.logits[0] - top);
  const double e1 = std::exp(res.logits[1] - top);
  res.probabilities = {e0 / (e0 + e1), e1 / (e0 + e1)};
  if (!std::isfinite(res.probabilities[0]) || !std::isfinite(res.probabilities[1])) {
    throw NumericError("forward pass produced non-finite probabilities");
  }
}

void check_grad_shape(const SageParams& params, const SageParams& grad) {
  if (grad.layers.size() != params.layers.size() || grad.classifier.rows != 2 ||
      grad.classifier.cols != params.hidden_dim) {
    throw InputError("gradient buffer shape does not match model");
  }
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    if (grad.layers[k].rows != params.layers[k].rows ||
        grad.layers[k].cols != params.layers[k].cols) {
      throw InputError("gradient buffer shape does not match model");
    }
  }
}

}  // namespace

ForwardResult forward(const SampledNeighborhood& nbh, const FeatureMatrix& x,
                      const SageParams& params) {
  Tape tape;
  run_forward(nbh, x, params, tape);
  return std::move(tape.result);
}

double example_loss(const std::array<double, 2>& probabilities, Label label) {
  return -std::log(std::max(probabilities[class_index(label)], kProbabilityFloor));
}

double cross_entropy(std::span<const std::array<double, 2>> probabilities,
                     std::span<const Label> labels) {
  if (probabilities.size() != labels.size()) {
    throw InputError("probabilities and labels differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) total += example_loss(probabilities[i], labels[i]);
  return total;
}

double accumulate_gradient(const SampledNeighborhood& nbh, const FeatureMatrix& x,
                           const SageParams& params, Label label, SageParams& grad) {
  check_grad_shape(params, grad);
  Tape tape;
  run_forward(nbh, x, params, tape);
  const auto& res = tape.result;
  const std::size_t hidden = params.hidden_dim;
  const std::size_t truth = class_index(label);
  const double loss = example_loss(res.probabilities, label);
  // Below the floor the clamped loss is flat.
  if (res.probabilities[truth] <= kProbabilityFloor) return loss;

  // Softmax + cross-entropy: dL/dlogit = p - y.
  std::array<double, 2> dlogits = res.probabilities;
  dlogits[truth] -= 1.0;

  std::vector<double> dz(hidden, 0.0);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < hidden; ++j) {
      grad.classifier(c, j) += dlogits[c] * res.embedding[j];
      dz[j] += params.classifier(c, j) * dlogits[c];
    }
  }

  // z = h / |h|  =>  dh = (dz - z (z . dz)) / |h|; identity at h = 0.
  std::vector<double> dh(hidden);
  if (tape.norm > 0.0) {
    double dot = 0.0;
    for (std::size_t j = 0; j < hidden; ++j) dot += res.embedding[j] * dz[j];
    for (std::size_t j = 0; j < hidden; ++j) dh[j] = (dz[j] - res.embedding[j] * dot) / tape.norm;
  } else {
    dh = dz;
  }

  const int depth = params.depth();
  std::vector<double> dout = std::move(dh);  // gradient wrt this layer's outputs
  for (int k = depth; k >= 1; --k) {
    const auto& layer = tape.layers[k - 1];
    const Matrix& w = params.layers[k - 1];
    Matrix& gw = grad.layers[k - 1];
    std::span<const NodeId> prev_nodes = nbh.hops[depth - k + 1];
    const std::size_t prev_dim = k == 1 ? params.input_dim : hidden;
    std::vector<double> dprev(prev_nodes.size() * prev_dim, 0.0);
    std::vector<double> dpre(hidden);
    std::vector<double> din(w.cols);

    for (std::size_t i = 0; i < layer.nodes.size(); ++i) {
      const double* pre = layer.pre.data() + i * hidden;
      const double* g_out = dout.data() + i * hidden;
      bool any = false;
      for (std::size_t r = 0; r < hidden; ++r) {
        dpre[r] = pre[r] > 0.0 ? g_out[r] : 0.0;
        any = any || dpre[r] != 0.0;
      }
      if (!any) continue;
      const double* in = layer.input.data() + i * w.cols;
      std::fill(din.begin(), din.end(), 0.0);
      for (std::size_t r = 0; r < hidden; ++r) {
        if (dpre[r] == 0.0) continue;
        double* grow = gw.data.data() + r * w.cols;
        const double* wrow = w.data.data() + r * w.cols;
        for (std::size_t c = 0; c < w.cols; ++c) {
          grow[c] += dpre[r] * in[c];
          din[c] += wrow[c] * dpre[r];
        }
      }
      if (k == 1) continue;  // no gradient needed for input features

      const NodeId u = layer.nodes[i];
      auto neighbours = nbh.drawn_for(depth - k + 1, u);
      double* dself = dprev.data() + position(prev_nodes, u) * prev_dim;
      if (params.aggregator == Aggregator::concat) {
        for (std::size_t j = 0; j < prev_dim; ++j) dself[j] += din[j];
        if (!neighbours.empty()) {
          const double count = static_cast<double>(neighbours.size());
          for (NodeId n : neighbours) {
            double* dn = dprev.data() + position(prev_nodes, n) * prev_dim;
            for (std::size_t j = 0; j < prev_dim; ++j) dn[j] += din[prev_dim + j] / count;
          }
        }
      } else {
        const double count = static_cast<double>(neighbours.size() + 1);
        for (std::size_t j = 0; j < prev_dim; ++j) dself[j] += din[j] / count;
        for (NodeId n : neighbours) {
          double* dn = dprev.data() + position(prev_nodes, n) * prev_dim;
          for (std::size_t j = 0; j < prev_dim; ++j) dn[j] += din[j] / count;
        }
      }
    }
    dout = std::move(dprev);
  }
  return loss;
}

double batch_gradient(std::span<const SampledNeighborhood> nbhs, std::span<const Label> labels,
                      const FeatureMatrix& x, const SageParams& params, SageParams& grad) {
  if (nbhs.size() != labels.size()) throw InputError("batch sizes differ");
  double total = 0.0;
  for (std::size_t i = 0; i < nbhs.size(); ++i) {
    total += accumulate_gradient(nbhs[i], x, params, labels[i], grad);
  }
  return total;
}

double batch_loss(std::span<const SampledNeighborhood> nbhs, std::span<const Label> labels,
                  const FeatureMatrix& x, const SageParams& params) {
  if (nbhs.size() != labels.size()) throw InputError("batch sizes differ");
  double total = 0.0;
  for (std::size_t i = 0; i < nbhs.size(); ++i) {
    total += example_loss(forward(nbhs[i], x, params).probabilities, labels[i]);
  }
  return total;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InputError("learning rate must be positive");
  if (epochs < 0) throw InputError("epochs must be nonnegative");
  if (batch_size < 1) throw InputError("batch size must be at least 1");
  if (hidden_dim < 1) throw InputError("hidden dimension must be at least 1");
  if (depth < 1) throw InputError("depth must be at least 1");
  if (sample_size < 1) throw InputError("sample size must be at least 1");
}

std::vector<LabeledExample> undersample(std::span<const LabeledExample> examples,
                                        std::uint64_t seed) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    (examples[i].label == Label::spreader ? pos : neg).push_back(i);
  }
  auto& majority = pos.size() > neg.size() ? pos : neg;
  const std::size_t keep = std::min(pos.size(), neg.size());
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(majority));
  majority.resize(keep);
  std::vector<std::size_t> kept(pos);
  kept.insert(kept.end(), neg.begin(), neg.end());
  std::sort(kept.begin(), kept.end());
  std::vector<LabeledExample> result;
  result.reserve(kept.size());
  for (auto i : kept) result.push_back(examples[i]);
  return result;
}

SamplerConfig evaluation_sampler(const TrainConfig& cfg) {
  SamplerConfig s;
  s.depth = cfg.depth;
  s.sample_size = cfg.sample_size;
  s.mode = cfg.sampler_mode;
  s.seed = mix_seed(cfg.seed, 0x65766131ULL);
  return s;
}

namespace {

std::vector<SampledNeighborhood> sample_all(std::span<const LabeledExample> examples,
                                            const SamplingWeights& weights,
                                            const SamplerConfig& cfg) {
  std::vector<SampledNeighborhood> result;
  result.reserve(examples.size());
  for (const auto& ex : examples) result.push_back(sample(ex.node, weights, cfg));
  return result;
}

std::vector<Label> labels_of(std::span<const LabeledExample> examples) {
  std::vector<Label> labels;
  labels.reserve(examples.size());
  for (const auto& ex : examples) labels.push_back(ex.label);
  return labels;
}

}  // namespace

TrainResult train(std::span<const LabeledExample> train_set, std::span<const LabeledExample> val,
                  const SamplingWeights& weights, const FeatureMatrix& x,
                  const TrainConfig& cfg) {
  cfg.validate();
  std::vector<LabeledExample> examples =
      cfg.undersample ? undersample(train_set, mix_seed(cfg.seed, 0x756e6472ULL))
                      : std::vector<LabeledExample>(train_set.begin(), train_set.end());
  TrainResult result;
  for (const auto& ex : examples) {
    (ex.label == Label::spreader ? result.train_spreaders : result.train_non_spreaders)++;
  }
  if (result.train_spreaders < 2 || result.train_non_spreaders < 2) {
    throw ContractError("training set has " + std::to_string(result.train_spreaders) +
                        " spreaders and " + std::to_string(result.train_non_spreaders) +
                        " non-spreaders; at least 2 of each are required");
  }

  SageParams params = SageParams::random(x.dim(), cfg.hidden_dim, cfg.depth, cfg.aggregator,
                                         mix_seed(cfg.seed, 0x696e6974ULL));
  const SamplerConfig eval_cfg = evaluation_sampler(cfg);
  const auto eval_train = sample_all(examples, weights, eval_cfg);
  const auto eval_val = sample_all(val, weights, eval_cfg);
  const auto train_labels = labels_of(examples);
  const auto val_labels = labels_of(val);

  auto evaluate = [&](int epoch) {
    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = batch_loss(eval_train, train_labels, x, params) /
                       static_cast<double>(examples.size());
    if (!val.empty()) {
      entry.val_loss =
          batch_loss(eval_val, val_labels, x, params) / static_cast<double>(val.size());
    }
    return entry;
  };
  auto selection = [&](const EpochLog& e) { return val.empty() ? e.train_loss : e.val_loss; };

  result.log.push_back(evaluate(0));
  result.params = params;
  double best = selection(result.log.back());

  SamplerConfig train_sampler = eval_cfg;
  std::vector<SampledNeighborhood> fixed;
  if (!cfg.resample_each_epoch) {
    train_sampler.seed = mix_seed(cfg.seed, 0x66697864ULL);
    fixed = sample_all(examples, weights, train_sampler);
  }
  std::vector<std::size_t> order(examples.size());
  SageParams grad = SageParams::zeros(x.dim(), cfg.hidden_dim, cfg.depth, cfg.aggregator);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(mix_seed(cfg.seed, 0x73687566ULL, static_cast<std::uint64_t>(epoch)));
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    train_sampler.seed = mix_seed(cfg.seed, 0x65706f63ULL, static_cast<std::uint64_t>(epoch));

    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      for (auto& m : grad.layers) std::fill(m.data.begin(), m.data.end(), 0.0);
      std::fill(grad.classifier.data.begin(), grad.classifier.data.end(), 0.0);
      for (std::size_t b = start; b < end; ++b) {
        const auto& ex = examples[order[b]];
        if (cfg.resample_each_epoch) {
          accumulate_gradient(sample(ex.node, weights, train_sampler), x, params, ex.label, grad);
        } else {
          accumulate_gradient(fixed[order[b]], x, params, ex.label, grad);
        }
      }
      params.add_scaled(grad, -cfg.learning_rate);
    }
    params.validate();

    result.log.push_back(evaluate(epoch));
    const double score = selection(result.log.back());
    // the untrained params only survive when epochs == 0
    if (epoch == 1 || score < best) {
      best = score;
      result.best_epoch = epoch;
      result.params = params;
    }
  }
  return result;
}

std::vector<Prediction> predict(std::span<const NodeId> nodes, const SamplingWeights& weights,
                                const FeatureMatrix& x, const SageParams& params,
                                const SamplerConfig& sampler) {
  std::vector<Prediction> result;
  result.reserve(nodes.size());
  for (NodeId v : nodes) {
    auto out = forward(sample(v, weights, sampler), x, params);
    Prediction p;
    p.node = v;
    p.spreader_probability = out.probabilities[0];
    p.label = p.spreader_probability > 0.5 ? Label::spreader : Label::non_spreader;
    result.push_back(p);
  }
  return result;
}

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows}, {"cols", m.cols}, {"values", m.data}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  m.data = j.at("values").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols) throw InputError("checkpoint matrix has wrong size");
  return m;
}

constexpr int kCheckpointVersion = 1;

}  // namespace

void save_model(const SageParams& params, const TrainConfig& cfg,
                const std::filesystem::path& path) {
  nlohmann::json j;
  j["format"] = "trustsage-model";
  j["version"] = kCheckpointVersion;
  j["config"] = {
      {"learning_rate", cfg.learning_rate},
      {"epochs", cfg.epochs},
      {"batch_size", cfg.batch_size},
      {"seed", cfg.seed},
      {"hidden_dim", cfg.hidden_dim},
      {"depth", cfg.depth},
      {"aggregator", std::string(to_string(cfg.aggregator))},
      {"sample_size", cfg.sample_size},
      {"sampler_mode", cfg.sampler_mode == SamplerMode::weighted ? "weighted" : "uniform"},
      {"resample_each_epoch", cfg.resample_each_epoch},
      {"undersample", cfg.undersample},
  };
  j["input_dim"] = params.input_dim;
  j["hidden_dim"] = params.hidden_dim;
  j["aggregator"] = std::string(to_string(params.aggregator));
  j["layers"] = nlohmann::json::array();
  for (const auto& w : params.layers) j["layers"].push_back(matrix_to_json(w));
  j["classifier"] = matrix_to_json(params.classifier);
  auto out = tsv::open_output(path);
  out << j.dump(1) << '\n';
  if (!out) throw InputError("write failure on " + path.string());
}

SageParams load_model(const std::filesystem::path& path, TrainConfig* cfg) {
  auto in = tsv::open_input(path);
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("format") != "trustsage-model") throw InputError("not a trustsage model file");
    if (j.at("version").get<int>() != kCheckpointVersion) {
      throw InputError("unsupported checkpoint version " + j.at("version").dump());
    }
    SageParams p;
    p.input_dim = j.at("input_dim").get<std::size_t>();
    p.hidden_dim = j.at("hidden_dim").get<std::size_t>();
    p.aggregator = parse_aggregator(j.at("aggregator").get<std::string>());
    for (const auto& layer : j.at("layers")) p.layers.push_back(matrix_from_json(layer));
    p.classifier = matrix_from_json(j.at("classifier"));
    p.validate();
    if (cfg != nullptr) {
      const auto& c = j.at("config");
      cfg->learning_rate = c.at("learning_rate").get<double>();
      cfg->epochs = c.at("epochs").get<int>();
      cfg->batch_size = c.at("batch_size").get<std::size_t>();
      cfg->seed = c.at("seed").get<std::uint64_t>();
      cfg->hidden_dim = c.at("hidden_dim").get<std::size_t>();
      cfg->depth = c.at("depth").get<int>();
      cfg->aggregator = parse_aggregator(c.at("aggregator").get<std::string>());
      cfg->sample_size = c.at("sample_size").get<std::size_t>();
      cfg->sampler_mode = parse_sampler_mode(c.at("sampler_mode").get<std::string>());
      cfg->resample_each_epoch = c.at("resample_each_epoch").get<bool>();
      cfg->undersample = c.at("undersample").get<bool>();
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": malformed model checkpoint (" + e.what() + ")");
  }
}

}  // namespace trustsage
