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

#include "ltm/experiment.h"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "binary_io.h"

#ifndef LTM_VERSION
#define LTM_VERSION "unknown"
#endif

namespace ltm {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kManifestFormat = 1;

// --------------------------------------------------------------- helpers

std::string utc_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string file_safe(std::string text) {
  for (char& c : text) {
    if (c == ':' || c == '/' || c == '\\') c = '-';
  }
  return text;
}

std::string_view activation_name(Activation a) {
  return a == Activation::kTanh ? "tanh" : "relu";
}

Activation parse_activation(std::string_view text) {
  if (text == "relu") return Activation::kRelu;
  if (text == "tanh") return Activation::kTanh;
  throw std::invalid_argument("unknown activation '" + std::string(text) + "'");
}

std::string hidden_label(const std::vector<int>& hidden) {
  NetConfig c;
  c.hidden = hidden;
  return c.hidden_label();
}

template <typename T, typename Parse>
T parse_or_throw(const std::string& text, Parse parse, const char* what) {
  const auto value = parse(text);
  if (!value) {
    throw std::invalid_argument(std::string("unknown ") + what + " '" + text +
                                "'");
  }
  return *value;
}

std::vector<int> parse_hidden_or_throw(const std::string& text) {
  return parse_or_throw<std::vector<int>>(text, parse_hidden, "hidden size");
}

// Rejects keys outside `allowed`.
void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const char* where) {
  if (!obj.is_object()) {
    throw std::invalid_argument(std::string(where) + " must be an object");
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto key : allowed) known = known || item.key() == key;
    if (!known) {
      throw std::invalid_argument(std::string("unknown key '") + item.key() +
                                  "' in " + where);
    }
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

// ------------------------------------------------------ nested sections

json train_to_json(const TrainConfig& t) {
  return {{"batch_size", t.batch_size},
          {"learning_rate", t.learning_rate},
          {"min_iterations", t.min_iterations},
          {"validate_every", t.validate_every},
          {"patience", t.patience},
          {"min_improvement", t.min_improvement},
          {"validation_size", t.validation_size},
          {"loss", std::string(loss_name(t.loss))},
          {"max_iterations", t.max_iterations},
          {"adam",
           {{"beta1", t.adam.beta1},
            {"beta2", t.adam.beta2},
            {"epsilon", t.adam.epsilon}}}};
}

void train_from_json(const json& j, TrainConfig& t) {
  check_keys(j,
             {"batch_size", "learning_rate", "min_iterations",
              "validate_every", "patience", "min_improvement",
              "validation_size", "loss", "max_iterations", "adam"},
             "train");
  read_opt(j, "batch_size", t.batch_size);
  read_opt(j, "learning_rate", t.learning_rate);
  read_opt(j, "min_iterations", t.min_iterations);
  read_opt(j, "validate_every", t.validate_every);
  read_opt(j, "patience", t.patience);
  read_opt(j, "min_improvement", t.min_improvement);
  read_opt(j, "validation_size", t.validation_size);
  read_opt(j, "max_iterations", t.max_iterations);
  if (j.contains("loss")) {
    t.loss = parse_or_throw<LossKind>(j.at("loss").get<std::string>(),
                                      parse_loss, "loss");
  }
  if (j.contains("adam")) {
    const json& a = j.at("adam");
    check_keys(a, {"beta1", "beta2", "epsilon"}, "train.adam");
    read_opt(a, "beta1", t.adam.beta1);
    read_opt(a, "beta2", t.adam.beta2);
    read_opt(a, "epsilon", t.adam.epsilon);
  }
}

json eval_to_json(const EvalConfig& e) {
  return {{"min_samples", e.min_samples},
          {"sem_target", e.sem_target},
          {"max_samples", e.max_samples},
          {"block_size", e.block_size},
          {"workers", e.workers}};
}

void eval_from_json(const json& j, EvalConfig& e) {
  check_keys(j,
             {"min_samples", "sem_target", "max_samples", "block_size",
              "workers"},
             "eval");
  read_opt(j, "min_samples", e.min_samples);
  read_opt(j, "sem_target", e.sem_target);
  read_opt(j, "max_samples", e.max_samples);
  read_opt(j, "block_size", e.block_size);
  read_opt(j, "workers", e.workers);
}

json cell_to_json(const CellKey& c) {
  return {{"method", std::string(method_name(c.method))},
          {"model", model_label(c.model)},
          {"n", c.n},
          {"m", c.m},
          {"info", std::string(info_name(c.info))},
          {"labeling", std::string(labeling_name(c.labeling))},
          {"seed", c.seed}};
}

CellKey cell_from_json(const json& j) {
  check_keys(j, {"method", "model", "n", "m", "info", "labeling", "seed"},
             "cell");
  CellKey c;
  c.method = parse_or_throw<MethodId>(j.at("method").get<std::string>(),
                                      parse_method, "method");
  c.model = parse_or_throw<ProbModel>(j.at("model").get<std::string>(),
                                      parse_model, "model");
  c.n = j.at("n").get<int>();
  c.m = j.at("m").get<int>();
  c.info = parse_or_throw<InfoType>(j.at("info").get<std::string>(),
                                    parse_info, "info type");
  c.labeling = parse_or_throw<Labeling>(j.at("labeling").get<std::string>(),
                                        parse_labeling, "labeling");
  c.seed = j.at("seed").get<uint64_t>();
  return c;
}

json spec_to_json(const RunSpec& s) {
  return {{"cell", cell_to_json(s.cell)},
          {"hidden", hidden_label(s.hidden)},
          {"activation", std::string(activation_name(s.activation))},
          {"train", train_to_json(s.train)},
          {"eval", eval_to_json(s.eval)},
          {"train_size", s.train_size},
          {"features", {{"normalize", s.features.normalize}}}};
}

RunSpec spec_from_json(const json& j) {
  check_keys(j,
             {"cell", "hidden", "activation", "train", "eval", "train_size",
              "features"},
             "run spec");
  RunSpec s;
  s.cell = cell_from_json(j.at("cell"));
  s.hidden = parse_hidden_or_throw(j.at("hidden").get<std::string>());
  s.activation = parse_activation(j.at("activation").get<std::string>());
  train_from_json(j.at("train"), s.train);
  eval_from_json(j.at("eval"), s.eval);
  s.train_size = j.at("train_size").get<int>();
  const json& f = j.at("features");
  check_keys(f, {"normalize"}, "features");
  read_opt(f, "normalize", s.features.normalize);
  return s;
}

json seeds_to_json(const SeedPlan& p) {
  return {{"train_data", p.train_data},
          {"validation", p.validation},
          {"evaluation", p.evaluation},
          {"shuffle", p.shuffle},
          {"init", p.init}};
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

// Runs task(i) for i in [0, count) on `workers` threads. The first
// exception is rethrown after all threads finish.
void parallel_for(size_t count, int workers,
                  const std::function<void(size_t)>& task) {
  if (workers <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> threads;
  const size_t n = std::min(count, static_cast<size_t>(workers));
  for (size_t w = 0; w < n; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

void write_results(const fs::path& path, const ResultRow& row) {
  io::write_file_atomic(path,
                        results_csv_header() + "\n" + format_result_row(row) + "\n");
}

std::string baseline_name(BaselineKind kind) {
  return kind == BaselineKind::kIdeal ? "ideal" : "sincere";
}

}  // namespace

// ------------------------------------------------------------ basics

std::string_view code_version() { return LTM_VERSION; }

std::string CellKey::id() const {
  std::ostringstream out;
  out << method_name(method) << '.' << file_safe(model_label(model)) << ".n"
      << n << ".m" << m << '.' << info_name(info) << '.'
      << labeling_name(labeling) << ".s" << seed;
  return out.str();
}

SeedPlan seed_plan(uint64_t seed, const ProbModel& model, int n, int m) {
  const std::string scope = model_label(model) + "/" + std::to_string(n) +
                            "/" + std::to_string(m);
  const uint64_t base = derive_seed(seed, scope);
  SeedPlan plan;
  plan.train_data = derive_seed(base, "train_data");
  plan.validation = derive_seed(base, "validation");
  plan.evaluation = derive_seed(base, "evaluation");
  plan.shuffle = derive_seed(base, "shuffle");
  plan.init = derive_seed(base, "init");
  return plan;
}

std::vector<std::vector<int>> default_hidden_grid() {
  std::vector<std::vector<int>> grid;
  for (int w = 4; w <= 2048; w *= 2) grid.push_back({w});
  for (int w = 4; w <= 512; w *= 2) grid.push_back({w, w});
  for (int w = 4; w <= 512; w *= 2) grid.push_back({w, w, w});
  return grid;
}

std::vector<MethodId> default_methods() {
  std::vector<MethodId> out;
  for (MethodId id : kAllMethods) {
    if (id != MethodId::kIrvSimultaneous) out.push_back(id);
  }
  return out;
}

fs::path default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return (env != nullptr && *env != '\0') ? fs::path(env) : fs::path("ltm_out");
}

void ExperimentConfig::validate() const {
  if (methods.empty() || models.empty() || voters.empty() ||
      candidates.empty() || infos.empty() || hidden.empty() || seeds.empty()) {
    throw std::invalid_argument("experiment lists must be nonempty");
  }
  for (int n : voters) {
    if (n < 1 || n > 65535) throw std::invalid_argument("invalid voter count");
  }
  for (int m : candidates) {
    if (m < 2 || m > kMaxOracleCandidates) {
      throw std::invalid_argument("candidate counts must lie in [2, 6]");
    }
  }
  for (const auto& h : hidden) {
    NetConfig c;
    c.input_dim = 1;
    c.output_dim = 1;
    c.hidden = h;
    c.validate();
  }
  if (train_size < 1) throw std::invalid_argument("train_size must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  train.validate();
  eval.validate();
}

std::vector<CellKey> ExperimentConfig::cells() const {
  std::vector<CellKey> out;
  for (uint64_t seed : seeds) {
    for (const ProbModel& model : models) {
      for (int n : voters) {
        for (int m : candidates) {
          for (MethodId method : methods) {
            for (InfoType info : infos) {
              out.push_back({method, model, n, m, info, labeling, seed});
            }
          }
        }
      }
    }
  }
  return out;
}

// ------------------------------------------------------------ config I/O

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  json methods = json::array();
  for (MethodId id : c.methods) methods.push_back(std::string(method_name(id)));
  json models = json::array();
  for (const ProbModel& p : c.models) models.push_back(model_label(p));
  json infos = json::array();
  for (InfoType t : c.infos) infos.push_back(std::string(info_name(t)));
  json hidden = json::array();
  for (const auto& h : c.hidden) hidden.push_back(hidden_label(h));
  j["methods"] = methods;
  j["models"] = models;
  j["voters"] = c.voters;
  j["candidates"] = c.candidates;
  j["infos"] = infos;
  j["labeling"] = std::string(labeling_name(c.labeling));
  j["hidden"] = hidden;
  j["activation"] = std::string(activation_name(c.activation));
  j["train"] = train_to_json(c.train);
  j["eval"] = eval_to_json(c.eval);
  j["train_size"] = c.train_size;
  j["features"] = {{"normalize", c.features.normalize}};
  j["seeds"] = c.seeds;
  j["out"] = c.out_dir.string();
  j["workers"] = c.workers;
  return j.dump(2);
}

ExperimentConfig config_from_json(std::string_view text,
                                  const ExperimentConfig& base) {
  const json j = parse_json(text, "config");
  ExperimentConfig c = base;
  try {
    check_keys(j,
               {"methods", "models", "voters", "candidates", "infos",
                "labeling", "hidden", "activation", "train", "eval",
                "train_size", "features", "seeds", "out", "workers"},
               "config");
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& v : j.at("methods")) {
        c.methods.push_back(
            parse_or_throw<MethodId>(v.get<std::string>(), parse_method, "method"));
      }
    }
    if (j.contains("models")) {
      c.models.clear();
      for (const auto& v : j.at("models")) {
        c.models.push_back(
            parse_or_throw<ProbModel>(v.get<std::string>(), parse_model, "model"));
      }
    }
    read_opt(j, "voters", c.voters);
    read_opt(j, "candidates", c.candidates);
    if (j.contains("infos")) {
      c.infos.clear();
      for (const auto& v : j.at("infos")) {
        c.infos.push_back(
            parse_or_throw<InfoType>(v.get<std::string>(), parse_info, "info type"));
      }
    }
    if (j.contains("labeling")) {
      c.labeling = parse_or_throw<Labeling>(j.at("labeling").get<std::string>(),
                                            parse_labeling, "labeling");
    }
    if (j.contains("hidden")) {
      c.hidden.clear();
      for (const auto& v : j.at("hidden")) {
        c.hidden.push_back(parse_hidden_or_throw(v.get<std::string>()));
      }
    }
    if (j.contains("activation")) {
      c.activation = parse_activation(j.at("activation").get<std::string>());
    }
    if (j.contains("train")) train_from_json(j.at("train"), c.train);
    if (j.contains("eval")) eval_from_json(j.at("eval"), c.eval);
    read_opt(j, "train_size", c.train_size);
    if (j.contains("features")) {
      check_keys(j.at("features"), {"normalize"}, "features");
      read_opt(j.at("features"), "normalize", c.features.normalize);
    }
    read_opt(j, "seeds", c.seeds);
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    read_opt(j, "workers", c.workers);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path,
                             const ExperimentConfig& base) {
  const auto bytes = io::read_file(path);
  return config_from_json(
      std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
      base);
}

// -------------------------------------------------------------- RunSpec

NetConfig RunSpec::net_config() const {
  NetConfig c;
  c.input_dim = cell.m + info_length(cell.info, cell.m);
  c.hidden = hidden;
  c.output_dim = static_cast<int>(factorial(cell.m));
  c.activation = activation;
  c.init_seed = seed_plan(cell.seed, cell.model, cell.n, cell.m).init;
  return c;
}

std::string RunSpec::id() const {
  return cell.id() + ".h" + hidden_label(hidden);
}

std::vector<RunSpec> run_specs(const ExperimentConfig& config) {
  std::vector<RunSpec> out;
  for (const CellKey& cell : config.cells()) {
    for (const auto& hidden : config.hidden) {
      RunSpec s;
      s.cell = cell;
      s.hidden = hidden;
      s.activation = config.activation;
      s.train = config.train;
      s.eval = config.eval;
      s.eval.workers = 1;
      s.train_size = config.train_size;
      s.features = config.features;
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::string run_spec_to_json(const RunSpec& spec) {
  return spec_to_json(spec).dump(2);
}

RunSpec run_spec_from_json(std::string_view text) {
  try {
    return spec_from_json(parse_json(text, "run spec"));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("run spec: ") + e.what());
  }
}

// ------------------------------------------------------------- pipeline

Dataset generate_dataset(const CellKey& cell, int count,
                         const FeatureOptions& options) {
  if (cell.m < 2 || cell.m > kMaxOracleCandidates) {
    throw std::invalid_argument("datasets need 2 <= m <= 6");
  }
  if (count < 0) throw std::invalid_argument("negative dataset size");
  RandomStream stream(seed_plan(cell.seed, cell.model, cell.n, cell.m).train_data);
  Dataset d;
  d.header = DatasetHeader::for_cell(cell.method, cell.info, cell.model.kind,
                                     cell.n, cell.m, cell.labeling,
                                     static_cast<uint64_t>(count));
  d.instances.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) {
    const UtilityProfile u = sample_profile(cell.model, cell.n, cell.m, stream);
    d.instances.push_back(
        make_instance(cell.method, u, 0, cell.info, cell.labeling, options));
  }
  return d;
}

TrainResult train_run(const RunSpec& spec,
                      std::span<const LabeledInstance> data) {
  const CellKey& c = spec.cell;
  const SeedPlan plan = seed_plan(c.seed, c.model, c.n, c.m);
  RandomStream validation_stream(plan.validation);
  const ValidationSet validation =
      ValidationSet::build(c.method, c.info, c.model, c.n, c.m,
                           spec.train.validation_size, validation_stream,
                           spec.features);
  RandomStream shuffle(plan.shuffle);
  return train(init_net(spec.net_config()), data, validation, spec.train,
               shuffle);
}

EvalResult evaluate_run(const RunSpec& spec, const Mlp& net) {
  const CellKey& c = spec.cell;
  const SeedPlan plan = seed_plan(c.seed, c.model, c.n, c.m);
  NetPolicy policy{std::make_shared<const Mlp>(net), c.info, spec.features};
  EvalResult result = evaluate(policy, c.method, c.model, c.n, c.m,
                               plan.evaluation, spec.eval);
  result.seed = c.seed;
  return result;
}

RunOutcome run_single(const RunSpec& spec) {
  const Dataset data =
      generate_dataset(spec.cell, spec.train_size, spec.features);
  TrainResult training = train_run(spec, data.instances);
  EvalResult evaluation = evaluate_run(spec, training.net);
  return {std::move(training), std::move(evaluation)};
}

std::string format_train_log(std::span<const TrainLogRow> log) {
  std::ostringstream out;
  out << "iteration,train_loss,validation_profitability\n";
  char buf[64];
  for (const TrainLogRow& row : log) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", row.iteration,
                  row.train_loss, row.validation_profitability);
    out << buf;
  }
  return out.str();
}

// ------------------------------------------------------------ manifest

RunManifest RunManifest::open(const fs::path& out_dir) {
  const fs::path path = out_dir / "manifest.json";
  if (!fs::exists(path)) {
    RunManifest m;
    m.out_dir_ = out_dir;
    m.created_ = utc_now();
    return m;
  }
  const auto bytes = io::read_file(path);
  return parse(
      std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
      out_dir);
}

RunManifest RunManifest::parse(std::string_view text, const fs::path& out_dir) {
  const json j = parse_json(text, "manifest");
  RunManifest m;
  m.out_dir_ = out_dir;
  try {
    if (j.at("format").get<int>() != kManifestFormat) {
      throw std::runtime_error("unsupported manifest format");
    }
    m.created_ = j.value("created", "");
    if (j.contains("config") && !j.at("config").is_null()) {
      m.config_ = j.at("config").dump(2);
    }
    for (const json& r : j.at("runs")) {
      Entry e;
      e.spec = spec_from_json(r.at("spec"));
      const json& s = r.at("seeds");
      e.seeds = {s.at("train_data").get<uint64_t>(),
                 s.at("validation").get<uint64_t>(),
                 s.at("evaluation").get<uint64_t>(),
                 s.at("shuffle").get<uint64_t>(), s.at("init").get<uint64_t>()};
      e.checkpoint = r.at("checkpoint").get<std::string>();
      e.log = r.at("log").get<std::string>();
      e.started = r.value("started", "");
      e.finished = r.value("finished", "");
      e.iterations = r.at("iterations").get<int>();
      e.early_stopped = r.at("early_stopped").get<bool>();
      e.best_validation = r.at("best_validation").get<double>();
      m.entries_.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("manifest: ") + e.what());
  }
  return m;
}

void RunManifest::set_config(const ExperimentConfig& config) {
  // Output paths and pool size do not affect results.
  ExperimentConfig canonical = config;
  canonical.out_dir = ".";
  canonical.workers = 1;
  canonical.eval.workers = 1;
  const std::string text = json::parse(config_to_json(canonical)).dump(2);
  if (config_ && *config_ != text) {
    throw std::runtime_error(
        "output directory already holds a manifest for a different config");
  }
  config_ = text;
}

bool RunManifest::completed(const std::string& run_id) const {
  const Entry* e = find(run_id);
  return e != nullptr && fs::exists(out_dir_ / e->checkpoint);
}

const RunManifest::Entry* RunManifest::find(const std::string& run_id) const {
  for (const Entry& e : entries_) {
    if (e.spec.id() == run_id) return &e;
  }
  return nullptr;
}

void RunManifest::add(Entry entry) {
  const std::string id = entry.spec.id();
  for (Entry& e : entries_) {
    if (e.spec.id() == id) {
      e = std::move(entry);
      return;
    }
  }
  entries_.push_back(std::move(entry));
}

std::string RunManifest::to_json() const {
  json j;
  j["format"] = kManifestFormat;
  j["code_version"] = std::string(code_version());
  j["created"] = created_;
  j["updated"] = utc_now();
  j["config"] = config_ ? json::parse(*config_) : json(nullptr);
  json runs = json::array();
  for (const Entry& e : entries_) {
    runs.push_back({{"id", e.spec.id()},
                    {"spec", spec_to_json(e.spec)},
                    {"seeds", seeds_to_json(e.seeds)},
                    {"checkpoint", e.checkpoint},
                    {"log", e.log},
                    {"started", e.started},
                    {"finished", e.finished},
                    {"iterations", e.iterations},
                    {"early_stopped", e.early_stopped},
                    {"best_validation", e.best_validation}});
  }
  j["runs"] = runs;
  return j.dump(2);
}

void RunManifest::save() const {
  fs::create_directories(out_dir_);
  io::write_file_atomic(out_dir_ / "manifest.json", to_json() + "\n");
}

// --------------------------------------------------------------- stages

fs::path dataset_path(const ExperimentConfig& config, const CellKey& cell) {
  return config.out_dir / "datasets" / (cell.id() + ".ltmd");
}

StageSummary gen_data(const ExperimentConfig& config) {
  config.validate();
  const auto cells = config.cells();
  fs::create_directories(config.out_dir / "datasets");
  StageSummary summary;
  std::vector<char> skipped(cells.size(), 0);
  parallel_for(cells.size(), config.workers, [&](size_t i) {
    const CellKey& cell = cells[i];
    const fs::path path = dataset_path(config, cell);
    const DatasetHeader want = DatasetHeader::for_cell(
        cell.method, cell.info, cell.model.kind, cell.n, cell.m, cell.labeling,
        static_cast<uint64_t>(config.train_size));
    if (fs::exists(path)) {
      try {
        if (read_dataset_header(path) == want) {
          skipped[i] = 1;
          return;
        }
      } catch (const DatasetError&) {
        // Unreadable: regenerate below.
      }
    }
    write_dataset(path, generate_dataset(cell, config.train_size, config.features));
  });
  for (size_t i = 0; i < cells.size(); ++i) {
    (skipped[i] ? summary.skipped : summary.done) += 1;
    summary.files.push_back(dataset_path(config, cells[i]));
  }
  return summary;
}

StageSummary train_grid(const ExperimentConfig& config) {
  config.validate();
  RunManifest manifest = RunManifest::open(config.out_dir);
  manifest.set_config(config);
  manifest.save();
  fs::create_directories(config.out_dir / "nets");
  fs::create_directories(config.out_dir / "logs");

  const auto specs = run_specs(config);
  const size_t per_cell = config.hidden.size();
  const size_t num_cells = specs.size() / per_cell;
  std::mutex mu;
  StageSummary summary;

  parallel_for(num_cells, config.workers, [&](size_t c) {
    std::vector<const RunSpec*> todo;
    for (size_t h = 0; h < per_cell; ++h) {
      const RunSpec& spec = specs[c * per_cell + h];
      std::lock_guard lock(mu);
      if (manifest.completed(spec.id())) {
        ++summary.skipped;
        summary.files.push_back(config.out_dir / manifest.find(spec.id())->checkpoint);
      } else {
        todo.push_back(&spec);
      }
    }
    if (todo.empty()) return;

    const CellKey& cell = todo.front()->cell;
    const fs::path path = dataset_path(config, cell);
    if (!fs::exists(path)) {
      throw std::runtime_error("missing dataset for cell " + cell.id() +
                               " (run gen first)");
    }
    const Dataset data = read_dataset(path);
    if (data.header.count != static_cast<uint64_t>(config.train_size)) {
      throw std::runtime_error("dataset for cell " + cell.id() + " has " +
                               std::to_string(data.header.count) +
                               " records, expected " +
                               std::to_string(config.train_size));
    }
    for (const RunSpec* spec : todo) {
      RunManifest::Entry entry;
      entry.spec = *spec;
      entry.seeds = seed_plan(cell.seed, cell.model, cell.n, cell.m);
      entry.checkpoint = "nets/" + spec->id() + ".ltmw";
      entry.log = "logs/" + spec->id() + ".csv";
      entry.started = utc_now();
      const TrainResult result = train_run(*spec, data.instances);
      save_checkpoint(result.net, config.out_dir / entry.checkpoint);
      io::write_file_atomic(config.out_dir / entry.log,
                            format_train_log(result.log));
      entry.finished = utc_now();
      entry.iterations = result.iterations;
      entry.early_stopped = result.early_stopped;
      entry.best_validation = result.best_validation;

      std::lock_guard lock(mu);
      summary.files.push_back(config.out_dir / entry.checkpoint);
      manifest.add(std::move(entry));
      manifest.save();
      ++summary.done;
    }
  });
  return summary;
}

StageSummary eval_grid(const ExperimentConfig& config) {
  config.validate();
  const RunManifest manifest = RunManifest::open(config.out_dir);
  fs::create_directories(config.out_dir / "results");
  std::vector<const RunManifest::Entry*> runs;
  for (const RunSpec& spec : run_specs(config)) {
    if (const auto* e = manifest.find(spec.id())) runs.push_back(e);
  }
  StageSummary summary;
  std::vector<char> skipped(runs.size(), 0);
  parallel_for(runs.size(), config.workers, [&](size_t i) {
    const RunManifest::Entry& e = *runs[i];
    const fs::path out = config.out_dir / "results" / (e.spec.id() + ".csv");
    if (fs::exists(out)) {
      skipped[i] = 1;
      return;
    }
    const Mlp net = load_checkpoint(config.out_dir / e.checkpoint);
    const EvalResult result = evaluate_run(e.spec, net);
    write_results(out, make_result_row(result, e.spec.cell.labeling,
                                       hidden_label(e.spec.hidden)));
  });
  for (size_t i = 0; i < runs.size(); ++i) {
    (skipped[i] ? summary.skipped : summary.done) += 1;
    summary.files.push_back(config.out_dir / "results" /
                            (runs[i]->spec.id() + ".csv"));
  }
  return summary;
}

StageSummary baseline_grid(const ExperimentConfig& config,
                           const std::vector<BaselineKind>& kinds) {
  config.validate();
  struct Task {
    BaselineKind kind;
    MethodId method;
    ProbModel model;
    int n, m;
    uint64_t seed;
    fs::path out;
  };
  std::vector<Task> tasks;
  for (BaselineKind kind : kinds) {
    for (uint64_t seed : config.seeds) {
      for (const ProbModel& model : config.models) {
        for (int n : config.voters) {
          for (int m : config.candidates) {
            for (MethodId method : config.methods) {
              std::ostringstream name;
              name << baseline_name(kind) << '.' << method_name(method) << '.'
                   << file_safe(model_label(model)) << ".n" << n << ".m" << m
                   << ".s" << seed << ".csv";
              tasks.push_back({kind, method, model, n, m, seed,
                               config.out_dir / "results" / name.str()});
            }
          }
        }
      }
    }
  }
  fs::create_directories(config.out_dir / "results");
  EvalConfig eval = config.eval;
  eval.workers = 1;
  std::vector<char> skipped(tasks.size(), 0);
  parallel_for(tasks.size(), config.workers, [&](size_t i) {
    const Task& t = tasks[i];
    if (fs::exists(t.out)) {
      skipped[i] = 1;
      return;
    }
    const uint64_t seed = seed_plan(t.seed, t.model, t.n, t.m).evaluation;
    const Policy policy = t.kind == BaselineKind::kIdeal ? Policy(IdealPolicy{})
                                                         : Policy(SincerePolicy{});
    EvalResult result = evaluate(policy, t.method, t.model, t.n, t.m, seed, eval);
    result.seed = t.seed;
    write_results(t.out,
                  make_result_row(result, std::nullopt, baseline_name(t.kind)));
  });
  StageSummary summary;
  for (size_t i = 0; i < tasks.size(); ++i) {
    (skipped[i] ? summary.skipped : summary.done) += 1;
    summary.files.push_back(tasks[i].out);
  }
  return summary;
}

RunOutcome replay_run(const fs::path& out_dir, const std::string& run_id) {
  const RunManifest manifest = RunManifest::open(out_dir);
  const RunManifest::Entry* e = manifest.find(run_id);
  if (e == nullptr) {
    throw std::runtime_error("run '" + run_id + "' is not in the manifest");
  }
  return run_single(e->spec);
}

}  // namespace ltm
