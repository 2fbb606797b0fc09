// Copyright 2026 The LTM Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ltm/neural.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "binary_io.h"

namespace ltm {
namespace {

double activate(Activation a, double x) {
  return a == Activation::kRelu ? (x > 0.0 ? x : 0.0) : std::tanh(x);
}

// Derivative expressed through the pre-activation x and output y.
double activate_grad(Activation a, double x, double y) {
  return a == Activation::kRelu ? (x > 0.0 ? 1.0 : 0.0) : 1.0 - y * y;
}

// out[b][j] = bias[j] + sum_i in[b][i] * w[i][j] for a batch of `rows`.
void dense_forward(const DenseLayer& layer, const double* in, int rows,
                   double* out) {
  const int n_in = layer.in;
  const int n_out = layer.out;
  const double* w = layer.weights.data();
  for (int b = 0; b < rows; ++b) {
    double* o = out + static_cast<size_t>(b) * n_out;
    std::copy(layer.biases.begin(), layer.biases.end(), o);
    const double* x = in + static_cast<size_t>(b) * n_in;
    for (int i = 0; i < n_in; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      const double* wi = w + static_cast<size_t>(i) * n_out;
      for (int j = 0; j < n_out; ++j) o[j] += xi * wi[j];
    }
  }
}

// Loss of one example and its gradient with respect to the logits.
double output_loss(const double* z, int classes, const LabelMask& labels,
                   LossKind kind, double* dz) {
  const double zmax = *std::max_element(z, z + classes);
  double total = 0.0;
  for (int j = 0; j < classes; ++j) {
    dz[j] = std::exp(z[j] - zmax);
    total += dz[j];
  }
  // dz temporarily holds the softmax probabilities.
  double pos = 0.0;
  double neg = 0.0;
  for (int j = 0; j < classes; ++j) {
    dz[j] /= total;
    (labels.test(j) ? pos : neg) += dz[j];
  }
  if (kind == LossKind::kMaskedMse) {
    // loss = neg^2 with neg = 1 - pos; d pos / d z_j = pi_j (s_j - pos).
    for (int j = 0; j < classes; ++j) {
      const double s_minus_pos = labels.test(j) ? neg : -pos;
      dz[j] = -2.0 * neg * dz[j] * s_minus_pos;
    }
    return neg * neg;
  }
  // Cross-entropy through log-sum-exp of the labeled logits.
  double zpos_max = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < classes; ++j) {
    if (labels.test(j)) zpos_max = std::max(zpos_max, z[j]);
  }
  double pos_total = 0.0;
  for (int j = 0; j < classes; ++j) {
    if (labels.test(j)) pos_total += std::exp(z[j] - zpos_max);
  }
  const double lse_pos = zpos_max + std::log(pos_total);
  const double lse_all = zmax + std::log(total);
  const double log_p = lse_pos - lse_all;
  if (log_p < std::log(kBceFloor)) {
    std::fill(dz, dz + classes, 0.0);
    return -std::log(kBceFloor);
  }
  for (int j = 0; j < classes; ++j) {
    if (labels.test(j)) dz[j] -= std::exp(z[j] - lse_pos);
  }
  return -log_p;
}

}  // namespace

// -------------------------------------------------------------- NetConfig

void NetConfig::validate() const {
  if (input_dim < 1) throw std::invalid_argument("input_dim must be >= 1");
  if (output_dim < 1) throw std::invalid_argument("output_dim must be >= 1");
  if (hidden.size() > 3) {
    throw std::invalid_argument("at most three hidden layers");
  }
  for (int w : hidden) {
    if (w < 1) throw std::invalid_argument("hidden widths must be >= 1");
  }
}

std::string NetConfig::hidden_label() const {
  if (hidden.empty()) return "linear";
  std::string out;
  for (size_t i = 0; i < hidden.size(); ++i) {
    if (i > 0) out += 'x';
    out += std::to_string(hidden[i]);
  }
  return out;
}

std::optional<std::vector<int>> parse_hidden(std::string_view text) {
  if (text == "linear") return std::vector<int>{};
  std::vector<int> widths;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('x', start);
    if (end == std::string_view::npos) end = text.size();
    const auto token = text.substr(start, end - start);
    int w = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), w);
    if (token.empty() || ec != std::errc() ||
        ptr != token.data() + token.size() || w < 1) {
      return std::nullopt;
    }
    widths.push_back(w);
    start = end + 1;
  }
  if (widths.size() > 3) return std::nullopt;
  return widths;
}

// -------------------------------------------------------------------- Mlp

Mlp::Mlp(NetConfig config, std::vector<DenseLayer> layers)
    : config_(std::move(config)), layers_(std::move(layers)) {
  config_.validate();
  if (layers_.size() != config_.hidden.size() + 1) {
    throw std::invalid_argument("layer count does not match config");
  }
  int in = config_.input_dim;
  for (size_t l = 0; l < layers_.size(); ++l) {
    const int out =
        l < config_.hidden.size() ? config_.hidden[l] : config_.output_dim;
    const DenseLayer& layer = layers_[l];
    if (layer.in != in || layer.out != out ||
        layer.weights.size() != static_cast<size_t>(in) * out ||
        layer.biases.size() != static_cast<size_t>(out)) {
      throw std::invalid_argument("layer " + std::to_string(l) +
                                  " has the wrong shape");
    }
    in = out;
  }
}

int64_t Mlp::parameter_count() const {
  int64_t total = 0;
  for (const DenseLayer& l : layers_) {
    total += static_cast<int64_t>(l.weights.size() + l.biases.size());
  }
  return total;
}

std::vector<double> Mlp::logits(std::span<const double> features) const {
  if (static_cast<int>(features.size()) != config_.input_dim) {
    throw std::invalid_argument(
        "feature length " + std::to_string(features.size()) +
        " does not match input_dim " + std::to_string(config_.input_dim));
  }
  std::vector<double> x(features.begin(), features.end());
  std::vector<double> y;
  for (size_t l = 0; l < layers_.size(); ++l) {
    y.assign(layers_[l].out, 0.0);
    dense_forward(layers_[l], x.data(), 1, y.data());
    if (l + 1 < layers_.size()) {
      for (double& v : y) v = activate(config_.activation, v);
    }
    x.swap(y);
  }
  return x;
}

std::vector<double> Mlp::forward(std::span<const double> features) const {
  return softmax(logits(features));
}

int Mlp::argmax(std::span<const double> features) const {
  return argmax_index(forward(features));
}

Mlp init_net(const NetConfig& config) {
  config.validate();
  RandomStream stream(config.init_seed);
  std::vector<DenseLayer> layers;
  int in = config.input_dim;
  for (size_t l = 0; l <= config.hidden.size(); ++l) {
    const int out =
        l < config.hidden.size() ? config.hidden[l] : config.output_dim;
    DenseLayer layer{in, out, std::vector<double>(static_cast<size_t>(in) * out),
                     std::vector<double>(out)};
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    for (double& w : layer.weights) w = (2.0 * stream.uniform01() - 1.0) * bound;
    for (double& b : layer.biases) b = (2.0 * stream.uniform01() - 1.0) * bound;
    layers.push_back(std::move(layer));
    in = out;
  }
  return Mlp(config, std::move(layers));
}

Mlp zero_net(const NetConfig& config) {
  Mlp net = init_net(config);
  for (DenseLayer& layer : net.mutable_layers()) {
    std::fill(layer.weights.begin(), layer.weights.end(), 0.0);
    std::fill(layer.biases.begin(), layer.biases.end(), 0.0);
  }
  return net;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double zmax = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - zmax);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

int argmax_index(std::span<const double> values) {
  return static_cast<int>(std::max_element(values.begin(), values.end()) -
                          values.begin());
}

// ------------------------------------------------------------------- loss

std::string_view loss_name(LossKind kind) {
  return kind == LossKind::kMaskedMse ? "masked_mse" : "masked_bce";
}

std::optional<LossKind> parse_loss(std::string_view text) {
  if (text == "masked_mse" || text == "mse") return LossKind::kMaskedMse;
  if (text == "masked_bce" || text == "bce") return LossKind::kMaskedBce;
  return std::nullopt;
}

double masked_loss(std::span<const double> dist, const LabelMask& labels,
                   LossKind kind) {
  if (!labels.any()) throw InvariantError("masked_loss: empty label mask");
  if (static_cast<int>(dist.size()) != labels.size()) {
    throw std::invalid_argument("distribution and mask sizes differ");
  }
  double pos = 0.0;
  double neg = 0.0;
  for (int k = 0; k < labels.size(); ++k) {
    (labels.test(k) ? pos : neg) += dist[k];
  }
  if (kind == LossKind::kMaskedMse) {
    // ((pos - 1)^2 + (neg - 0)^2) / 2 with pos + neg = 1.
    return neg * neg;
  }
  return -std::log(std::max(pos, kBceFloor));
}

Gradients Gradients::zeros_like(const Mlp& net) {
  Gradients g;
  for (const DenseLayer& l : net.layers()) {
    g.weights.emplace_back(l.weights.size(), 0.0);
    g.biases.emplace_back(l.biases.size(), 0.0);
  }
  return g;
}

double batch_loss(const Mlp& net, std::span<const LabeledInstance> data,
                  std::span<const int> indices, LossKind kind,
                  Gradients* grads) {
  const auto layers = net.layers();
  const int depth = static_cast<int>(layers.size());
  const int rows = static_cast<int>(indices.size());
  if (rows == 0) throw std::invalid_argument("empty batch");
  const Activation act = net.config().activation;

  // acts[0] is the input batch; pre[l] holds layer l's pre-activations and
  // acts[l + 1] its activations (logits for the last layer).
  std::vector<std::vector<double>> pre(depth);
  std::vector<std::vector<double>> acts(depth + 1);
  const int in_dim = net.config().input_dim;
  acts[0].resize(static_cast<size_t>(rows) * in_dim);
  for (int b = 0; b < rows; ++b) {
    const LabeledInstance& ex = data[indices[b]];
    if (static_cast<int>(ex.features.size()) != in_dim) {
      throw std::invalid_argument("instance feature length mismatch");
    }
    std::copy(ex.features.begin(), ex.features.end(),
              acts[0].begin() + static_cast<ptrdiff_t>(b) * in_dim);
  }
  for (int l = 0; l < depth; ++l) {
    pre[l].assign(static_cast<size_t>(rows) * layers[l].out, 0.0);
    dense_forward(layers[l], acts[l].data(), rows, pre[l].data());
    if (l + 1 < depth) {
      acts[l + 1].resize(pre[l].size());
      for (size_t k = 0; k < pre[l].size(); ++k) {
        acts[l + 1][k] = activate(act, pre[l][k]);
      }
    }
  }

  const int classes = layers[depth - 1].out;
  std::vector<double> delta(static_cast<size_t>(rows) * classes);
  double loss = 0.0;
  for (int b = 0; b < rows; ++b) {
    const LabelMask& labels = data[indices[b]].labels;
    if (labels.size() != classes) {
      throw std::invalid_argument("label mask size mismatch");
    }
    if (!labels.any()) throw InvariantError("instance with empty label mask");
    loss += output_loss(pre[depth - 1].data() + static_cast<size_t>(b) * classes,
                        classes, labels, kind,
                        delta.data() + static_cast<size_t>(b) * classes);
  }
  loss /= rows;
  if (grads == nullptr) return loss;

  *grads = Gradients::zeros_like(net);
  const double scale = 1.0 / rows;
  for (double& d : delta) d *= scale;

  std::vector<double> prev_delta;
  for (int l = depth - 1; l >= 0; --l) {
    const DenseLayer& layer = layers[l];
    const int n_in = layer.in;
    const int n_out = layer.out;
    const std::vector<double>& input = acts[l];
    double* gw = grads->weights[l].data();
    double* gb = grads->biases[l].data();
    for (int b = 0; b < rows; ++b) {
      const double* d = delta.data() + static_cast<size_t>(b) * n_out;
      const double* x = input.data() + static_cast<size_t>(b) * n_in;
      for (int j = 0; j < n_out; ++j) gb[j] += d[j];
      for (int i = 0; i < n_in; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        double* gwi = gw + static_cast<size_t>(i) * n_out;
        for (int j = 0; j < n_out; ++j) gwi[j] += xi * d[j];
      }
    }
    if (l == 0) break;
    prev_delta.assign(static_cast<size_t>(rows) * n_in, 0.0);
    const double* w = layer.weights.data();
    for (int b = 0; b < rows; ++b) {
      const double* d = delta.data() + static_cast<size_t>(b) * n_out;
      double* pd = prev_delta.data() + static_cast<size_t>(b) * n_in;
      const double* x_pre = pre[l - 1].data() + static_cast<size_t>(b) * n_in;
      const double* x_act = input.data() + static_cast<size_t>(b) * n_in;
      for (int i = 0; i < n_in; ++i) {
        const double g = activate_grad(act, x_pre[i], x_act[i]);
        if (g == 0.0) continue;
        const double* wi = w + static_cast<size_t>(i) * n_out;
        double sum = 0.0;
        for (int j = 0; j < n_out; ++j) sum += wi[j] * d[j];
        pd[i] = sum * g;
      }
    }
    delta.swap(prev_delta);
  }
  return loss;
}

// ------------------------------------------------------------------- Adam

AdamOptimizer::AdamOptimizer(const Mlp& net, double learning_rate,
                             AdamConfig config)
    : learning_rate_(learning_rate),
      config_(config),
      first_(Gradients::zeros_like(net)),
      second_(Gradients::zeros_like(net)) {}

void AdamOptimizer::step(Mlp& net, const Gradients& grads) {
  ++steps_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  auto update = [&](std::vector<double>& params, const std::vector<double>& g,
                    std::vector<double>& m, std::vector<double>& v) {
    for (size_t k = 0; k < params.size(); ++k) {
      m[k] = b1 * m[k] + (1.0 - b1) * g[k];
      v[k] = b2 * v[k] + (1.0 - b2) * g[k] * g[k];
      const double m_hat = m[k] / c1;
      const double v_hat = v[k] / c2;
      params[k] -= learning_rate_ * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  };
  auto layers = net.mutable_layers();
  for (size_t l = 0; l < layers.size(); ++l) {
    update(layers[l].weights, grads.weights[l], first_.weights[l],
           second_.weights[l]);
    update(layers[l].biases, grads.biases[l], first_.biases[l],
           second_.biases[l]);
  }
}

// --------------------------------------------------------------- training

void TrainConfig::validate() const {
  if (batch_size < 1 || !(learning_rate > 0.0) || min_iterations < 0 ||
      validate_every < 1 || patience < 1 || min_improvement < 0.0 ||
      validation_size < 1 || max_iterations < 1) {
    throw std::invalid_argument("invalid training configuration");
  }
}

ValidationSet ValidationSet::build(MethodId method, InfoType info,
                                   const ProbModel& model, int n, int m,
                                   int count, RandomStream& stream,
                                   const FeatureOptions& options) {
  if (count < 1) throw std::invalid_argument("empty validation set");
  ValidationSet set;
  set.size_ = count;
  set.input_dim_ = m + info_length(info, m);
  set.num_classes_ = static_cast<int>(factorial(m));
  set.features_.reserve(static_cast<size_t>(count) * set.input_dim_);
  set.profit_.reserve(static_cast<size_t>(count) * set.num_classes_);
  for (int e = 0; e < count; ++e) {
    const UtilityProfile u = sample_profile(model, n, m, stream);
    const Profile sincere = induced_profile(u);
    const auto x = build_features(u, sincere, 0, info, method, options);
    set.features_.insert(set.features_.end(), x.begin(), x.end());
    const ResponseTable table = response_table(method, u, sincere, 0);
    for (int k = 0; k < table.num_rankings(); ++k) {
      set.profit_.push_back(table.profitability(k));
    }
  }
  return set;
}

double ValidationSet::mean_profitability(const Mlp& net) const {
  if (net.config().input_dim != input_dim_ ||
      net.config().output_dim != num_classes_) {
    throw std::invalid_argument("network does not fit the validation set");
  }
  double total = 0.0;
  for (int e = 0; e < size_; ++e) {
    const std::span<const double> x(
        features_.data() + static_cast<size_t>(e) * input_dim_, input_dim_);
    const int choice = net.argmax(x);
    total += profit_[static_cast<size_t>(e) * num_classes_ + choice];
  }
  return total / size_;
}

TrainResult train(Mlp net, std::span<const LabeledInstance> data,
                  const ValidationSet& validation, const TrainConfig& config,
                  RandomStream& stream) {
  config.validate();
  if (data.empty()) throw std::invalid_argument("empty training set");
  if (validation.size() == 0) {
    throw std::invalid_argument("empty validation set");
  }

  AdamOptimizer optimizer(net, config.learning_rate, config.adam);
  Gradients grads = Gradients::zeros_like(net);
  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  size_t cursor = order.size();  // forces a shuffle before the first batch
  std::vector<int> batch(config.batch_size);

  TrainResult result{net, {}, 0, -std::numeric_limits<double>::infinity(),
                     false};
  int stale = 0;
  double loss_sum = 0.0;
  int loss_count = 0;
  for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
    for (int& slot : batch) {
      if (cursor == order.size()) {
        for (size_t i = order.size() - 1; i > 0; --i) {
          std::swap(order[i], order[stream.uniform_int(i + 1)]);
        }
        cursor = 0;
      }
      slot = order[cursor++];
    }
    loss_sum += batch_loss(net, data, batch, config.loss, &grads);
    ++loss_count;
    optimizer.step(net, grads);
    result.iterations = iteration;

    if (iteration % config.validate_every != 0) continue;
    const double score = validation.mean_profitability(net);
    result.log.push_back({iteration, loss_sum / loss_count, score});
    loss_sum = 0.0;
    loss_count = 0;
    if (score >= result.best_validation + config.min_improvement) {
      result.best_validation = score;
      stale = 0;
    } else {
      ++stale;
    }
    if (iteration >= config.min_iterations && stale >= config.patience) {
      result.early_stopped = true;
      break;
    }
  }
  result.net = std::move(net);
  return result;
}

// ------------------------------------------------------------- checkpoint

std::vector<uint8_t> encode_checkpoint(const Mlp& net) {
  const NetConfig& c = net.config();
  io::ByteWriter w;
  w.tag("LTMW");
  w.u16(kCheckpointVersion);
  w.u32(static_cast<uint32_t>(c.input_dim));
  w.u8(static_cast<uint8_t>(c.hidden.size()));
  for (int width : c.hidden) w.u32(static_cast<uint32_t>(width));
  w.u32(static_cast<uint32_t>(c.output_dim));
  w.u8(static_cast<uint8_t>(c.activation));
  w.u64(c.init_seed);
  for (const DenseLayer& layer : net.layers()) {
    for (double x : layer.weights) w.f64(x);
    for (double x : layer.biases) w.f64(x);
  }
  return std::move(w.buffer());
}

Mlp decode_checkpoint(std::span<const uint8_t> bytes) {
  io::ByteReader r(bytes);
  try {
    if (!r.tag("LTMW")) throw std::runtime_error("not a checkpoint (magic)");
    const uint16_t version = r.u16();
    if (version != kCheckpointVersion) {
      throw std::runtime_error("unsupported checkpoint version " +
                               std::to_string(version));
    }
    NetConfig c;
    c.input_dim = static_cast<int>(r.u32());
    const int depth = r.u8();
    if (depth > 3) throw std::runtime_error("checkpoint has > 3 hidden layers");
    for (int l = 0; l < depth; ++l) c.hidden.push_back(static_cast<int>(r.u32()));
    c.output_dim = static_cast<int>(r.u32());
    const uint8_t act = r.u8();
    if (act > 1) throw std::runtime_error("unknown activation code");
    c.activation = static_cast<Activation>(act);
    c.init_seed = r.u64();
    c.validate();
    std::vector<DenseLayer> layers;
    int in = c.input_dim;
    for (size_t l = 0; l <= c.hidden.size(); ++l) {
      const int out = l < c.hidden.size() ? c.hidden[l] : c.output_dim;
      DenseLayer layer{in, out, std::vector<double>(static_cast<size_t>(in) * out),
                       std::vector<double>(out)};
      for (double& x : layer.weights) x = r.f64();
      for (double& x : layer.biases) x = r.f64();
      layers.push_back(std::move(layer));
      in = out;
    }
    if (r.remaining() != 0) throw std::runtime_error("trailing checkpoint bytes");
    return Mlp(std::move(c), std::move(layers));
  } catch (const io::TruncatedError&) {
    throw std::runtime_error("truncated checkpoint");
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("bad checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Mlp& net, const std::filesystem::path& path) {
  io::write_file_atomic(path, encode_checkpoint(net));
}

Mlp load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(io::read_file(path));
}

}  // namespace ltm
