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

// Small multilayer perceptrons that map a feature vector to a distribution
// over the m! ballots a manipulator can submit, trained on masked labels.
//
// Everything runs in double precision on one thread; a training run is a
// pure function of (initial weights, data, config, shuffle seed).

#ifndef LTM_NEURAL_H_
#define LTM_NEURAL_H_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ltm/information.h"
#include "ltm/oracle.h"
#include "ltm/random.h"
#include "ltm/samplers.h"

namespace ltm {

enum class Activation : uint8_t {
  kRelu = 0,
  kTanh = 1,
};

struct NetConfig {
  int input_dim = 0;
  // Up to three hidden layer widths.
  std::vector<int> hidden;
  // m! for the election size.
  int output_dim = 0;
  Activation activation = Activation::kRelu;
  uint64_t init_seed = 0;

  // Throws std::invalid_argument on non-positive widths or > 3 layers.
  void validate() const;
  // "128" or "64x64"; "linear" when there are no hidden layers.
  std::string hidden_label() const;

  friend bool operator==(const NetConfig&, const NetConfig&) = default;
};

// Parses "128", "64x64" or "linear" into widths.
std::optional<std::vector<int>> parse_hidden(std::string_view text);

// Fully connected layer. weights[i * out + j] connects input i to unit j.
struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> weights;
  std::vector<double> biases;

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

class Mlp {
 public:
  // Throws std::invalid_argument if layer shapes disagree with config.
  Mlp(NetConfig config, std::vector<DenseLayer> layers);

  const NetConfig& config() const { return config_; }
  std::span<const DenseLayer> layers() const { return layers_; }
  std::span<DenseLayer> mutable_layers() { return layers_; }
  int64_t parameter_count() const;

  // Output-layer pre-activations. Throws std::invalid_argument on a length
  // mismatch.
  std::vector<double> logits(std::span<const double> features) const;
  // Softmax of the logits: the policy's distribution over rankings.
  std::vector<double> forward(std::span<const double> features) const;
  // Most probable ranking index, lowest index on ties.
  int argmax(std::span<const double> features) const;

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  NetConfig config_;
  std::vector<DenseLayer> layers_;
};

// Weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), drawn layer by
// layer from init_seed.
Mlp init_net(const NetConfig& config);
// All-zero parameters; the policy is uniform.
Mlp zero_net(const NetConfig& config);

std::vector<double> softmax(std::span<const double> logits);
// Lowest index among the maxima.
int argmax_index(std::span<const double> values);

enum class LossKind : uint8_t {
  kMaskedMse = 0,
  kMaskedBce = 1,
};

std::string_view loss_name(LossKind kind);
std::optional<LossKind> parse_loss(std::string_view text);

// Probability floor for the cross-entropy variant.
inline constexpr double kBceFloor = 1e-12;

// Reduces `dist` to the mass on labeled rankings, p. Masked MSE is the mean
// squared error of (p, 1 - p) against (1, 0), i.e. (1 - p)^2; masked BCE is
// -ln(max(p, kBceFloor)). Throws InvariantError on an empty mask.
double masked_loss(std::span<const double> dist, const LabelMask& labels,
                   LossKind kind);

// Per-parameter gradients shaped like Mlp::layers().
struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  static Gradients zeros_like(const Mlp& net);
};

// Mean masked loss over data[indices]; fills `grads` (if non-null) with its
// exact gradient.
double batch_loss(const Mlp& net, std::span<const LabeledInstance> data,
                  std::span<const int> indices, LossKind kind,
                  Gradients* grads = nullptr);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamOptimizer {
 public:
  AdamOptimizer(const Mlp& net, double learning_rate, AdamConfig config = {});
  void step(Mlp& net, const Gradients& grads);
  int64_t steps() const { return steps_; }

 private:
  double learning_rate_;
  AdamConfig config_;
  int64_t steps_ = 0;
  Gradients first_;
  Gradients second_;
};

struct TrainConfig {
  int batch_size = 512;
  double learning_rate = 6e-3;
  int min_iterations = 220;
  int validate_every = 20;
  int patience = 10;
  double min_improvement = 0.001;
  int validation_size = 4096;
  LossKind loss = LossKind::kMaskedMse;
  AdamConfig adam;
  // Hard stop in case validation keeps creeping upward.
  int max_iterations = 20000;

  void validate() const;
};

// Pre-computed validation elections: features and the profitability of
// every ballot, so scoring a network needs no method evaluations.
class ValidationSet {
 public:
  ValidationSet() = default;
  static ValidationSet build(MethodId method, InfoType info,
                             const ProbModel& model, int n, int m, int count,
                             RandomStream& stream,
                             const FeatureOptions& options = {});

  int size() const { return size_; }
  int input_dim() const { return input_dim_; }
  int num_classes() const { return num_classes_; }
  // Mean profitability of the network's argmax ballot.
  double mean_profitability(const Mlp& net) const;

 private:
  int size_ = 0;
  int input_dim_ = 0;
  int num_classes_ = 0;
  std::vector<double> features_;
  std::vector<double> profit_;
};

struct TrainLogRow {
  int iteration = 0;
  // Mean minibatch loss since the previous validation.
  double train_loss = 0.0;
  double validation_profitability = 0.0;

  friend bool operator==(const TrainLogRow&, const TrainLogRow&) = default;
};

struct TrainResult {
  Mlp net;
  std::vector<TrainLogRow> log;
  int iterations = 0;
  double best_validation = -std::numeric_limits<double>::infinity();
  bool early_stopped = false;
};

// Minibatch Adam on reshuffled epochs with validation-based early stopping:
// at least min_iterations steps; stop once `patience` consecutive
// validations fail to beat the best so far by min_improvement. Returns the
// final weights. Throws std::invalid_argument on empty data.
TrainResult train(Mlp net, std::span<const LabeledInstance> data,
                  const ValidationSet& validation, const TrainConfig& config,
                  RandomStream& stream);

// Checkpoint file: "LTMW", u16 version, NetConfig, then per layer the
// row-major weights followed by the biases, all little-endian f64.
inline constexpr uint16_t kCheckpointVersion = 1;
std::vector<uint8_t> encode_checkpoint(const Mlp& net);
// Throws std::runtime_error on a malformed buffer.
Mlp decode_checkpoint(std::span<const uint8_t> bytes);
void save_checkpoint(const Mlp& net, const std::filesystem::path& path);
Mlp load_checkpoint(const std::filesystem::path& path);

}  // namespace ltm

#endif  // LTM_NEURAL_H_
