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

// Experiment orchestration: configuration, seed derivation, the
// generate / train / evaluate pipeline and its on-disk manifest.
//
// Output layout under ExperimentConfig::out_dir:
//   datasets/<cell>.ltmd   nets/<run>.ltmw   logs/<run>.csv
//   results/<run>.csv      report/*.csv      manifest.json

#ifndef LTM_EXPERIMENT_H_
#define LTM_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ltm/dataset.h"
#include "ltm/evaluation.h"
#include "ltm/information.h"
#include "ltm/neural.h"
#include "ltm/oracle.h"
#include "ltm/report.h"
#include "ltm/samplers.h"
#include "ltm/voting_methods.h"

namespace ltm {

// Environment variable naming the default output root.
inline constexpr const char* kOutDirEnv = "LTM_OUT_DIR";

// Library version, echoed into manifests.
std::string_view code_version();

// One (method, model, n, m, info, labeling) cell of one generation.
struct CellKey {
  MethodId method = MethodId::kPlurality;
  ProbModel model;
  int n = 0;
  int m = 0;
  InfoType info = InfoType::kMajorityMatrix;
  Labeling labeling = Labeling::kOptimizing;
  // Generation seed.
  uint64_t seed = 0;

  // File-name-safe identifier, e.g. "borda.uniform.n11.m3.majority_matrix.
  // optimizing.s0".
  std::string id() const;

  friend bool operator==(const CellKey&, const CellKey&) = default;
};

// Streams used by one generation for elections of a given (model, n, m).
// None depends on the method, info type or network, so every network of a
// generation sees the same profiles and every architecture the same
// initial weights.
struct SeedPlan {
  uint64_t train_data = 0;
  uint64_t validation = 0;
  uint64_t evaluation = 0;
  uint64_t shuffle = 0;
  uint64_t init = 0;
};
SeedPlan seed_plan(uint64_t seed, const ProbModel& model, int n, int m);

// The default 26 network sizes: one hidden layer of width 4..2048 and two
// or three layers of width 4..512, all powers of two.
std::vector<std::vector<int>> default_hidden_grid();

// The eight methods of the main study (all but simultaneous-elimination IRV).
std::vector<MethodId> default_methods();

struct ExperimentConfig {
  std::vector<MethodId> methods = default_methods();
  std::vector<ProbModel> models = {ProbModel::uniform()};
  std::vector<int> voters = {5, 6, 10, 11, 20, 21};
  std::vector<int> candidates = {3, 4, 5, 6};
  std::vector<InfoType> infos = {std::begin(kAllInfoTypes),
                                 std::end(kAllInfoTypes)};
  Labeling labeling = Labeling::kOptimizing;
  std::vector<std::vector<int>> hidden = default_hidden_grid();
  Activation activation = Activation::kRelu;
  TrainConfig train;
  EvalConfig eval;
  int train_size = 131072;
  FeatureOptions features;
  std::vector<uint64_t> seeds = {0};
  std::filesystem::path out_dir = "ltm_out";
  // Size of the task pool used by gen/train/eval/baseline.
  int workers = 1;

  // Throws std::invalid_argument on empty lists, m outside [2, 6], n < 1 or
  // invalid nested configs.
  void validate() const;
  // Cartesian product in (seed, model, n, m, method, info) order.
  std::vector<CellKey> cells() const;
};

// Output root: $LTM_OUT_DIR if set, otherwise "ltm_out".
std::filesystem::path default_out_dir();

// JSON round trip. Missing keys keep the values of `base`; unknown keys
// throw std::invalid_argument.
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(std::string_view text,
                                  const ExperimentConfig& base = {});
ExperimentConfig load_config(const std::filesystem::path& path,
                             const ExperimentConfig& base = {});

// Everything needed to reproduce one trained network and its evaluation.
struct RunSpec {
  CellKey cell;
  std::vector<int> hidden;
  Activation activation = Activation::kRelu;
  TrainConfig train;
  EvalConfig eval;
  int train_size = 131072;
  FeatureOptions features;

  NetConfig net_config() const;
  // cell.id() + ".h" + hidden label.
  std::string id() const;
};

std::vector<RunSpec> run_specs(const ExperimentConfig& config);
std::string run_spec_to_json(const RunSpec& spec);
RunSpec run_spec_from_json(std::string_view text);

// Training data for a cell: `count` elections drawn from the cell's
// train_data stream and labeled by the oracle.
Dataset generate_dataset(const CellKey& cell, int count,
                         const FeatureOptions& options = {});

TrainResult train_run(const RunSpec& spec,
                      std::span<const LabeledInstance> data);
EvalResult evaluate_run(const RunSpec& spec, const Mlp& net);

struct RunOutcome {
  TrainResult training;
  EvalResult evaluation;
};
// generate_dataset -> train_run -> evaluate_run, in memory.
RunOutcome run_single(const RunSpec& spec);

// Training-log CSV: iteration,train_loss,validation_profitability.
std::string format_train_log(std::span<const TrainLogRow> log);

// Persisted record of completed runs under one output directory.
class RunManifest {
 public:
  struct Entry {
    RunSpec spec;
    SeedPlan seeds;
    std::string checkpoint;  // relative to the output directory
    std::string log;
    std::string started;
    std::string finished;
    int iterations = 0;
    bool early_stopped = false;
    double best_validation = 0.0;
  };

  // Loads out_dir/manifest.json, or starts empty when absent.
  static RunManifest open(const std::filesystem::path& out_dir);
  static RunManifest parse(std::string_view text,
                           const std::filesystem::path& out_dir);

  // Records the resolved config; throws std::runtime_error if the manifest
  // already holds a different one.
  void set_config(const ExperimentConfig& config);
  const std::optional<std::string>& config_json() const { return config_; }

  bool completed(const std::string& run_id) const;
  const Entry* find(const std::string& run_id) const;
  const std::vector<Entry>& entries() const { return entries_; }
  void add(Entry entry);

  std::string to_json() const;
  // Atomic rewrite of out_dir/manifest.json.
  void save() const;
  const std::filesystem::path& out_dir() const { return out_dir_; }

 private:
  std::filesystem::path out_dir_;
  std::optional<std::string> config_;
  std::string created_;
  std::vector<Entry> entries_;
};

struct StageSummary {
  int done = 0;
  int skipped = 0;
  std::vector<std::filesystem::path> files;
};

std::filesystem::path dataset_path(const ExperimentConfig& config,
                                   const CellKey& cell);

// Writes one dataset per cell; skips files whose header already matches.
StageSummary gen_data(const ExperimentConfig& config);
// Trains each cell x size not yet in the manifest. Throws
// std::runtime_error naming the cell when its dataset is missing.
StageSummary train_grid(const ExperimentConfig& config);
// Evaluates every manifest run that belongs to the config's grid.
StageSummary eval_grid(const ExperimentConfig& config);

enum class BaselineKind { kIdeal, kSincere };
// One results file per (seed, model, n, m, method) and baseline kind.
StageSummary baseline_grid(const ExperimentConfig& config,
                           const std::vector<BaselineKind>& kinds);

// Regenerates a manifest run from its spec alone (no files read besides the
// manifest) and returns the fresh outcome.
RunOutcome replay_run(const std::filesystem::path& out_dir,
                      const std::string& run_id);

}  // namespace ltm

#endif  // LTM_EXPERIMENT_H_
