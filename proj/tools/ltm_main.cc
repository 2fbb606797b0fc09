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

// ltm: generate datasets, train manipulator networks, evaluate them and
// summarize the results.
//
//   ltm gen --method borda --candidates 3 --voters 11 --info majority_matrix
//   ltm train --hidden 128x128 ...
//   ltm eval ... && ltm baseline ... && ltm report

#include <cstdint>
#include <cstdio>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ltm/experiment.h"
#include "ltm/report.h"

namespace {

struct Flags {
  std::string config;
  std::vector<std::string> methods;
  std::vector<std::string> models;
  std::vector<int> voters;
  std::vector<int> candidates;
  std::vector<std::string> infos;
  std::string labeling;
  std::vector<std::string> hidden;
  std::vector<uint64_t> seeds;
  int workers = 0;
  int train_size = 0;
  std::string out;
};

template <typename T, typename Parse>
std::vector<T> parse_list(const std::vector<std::string>& items, Parse parse,
                          const char* what) {
  std::vector<T> out;
  for (const std::string& item : items) {
    const auto value = parse(item);
    if (!value) {
      throw CLI::ValidationError(std::string("unknown ") + what + ": " + item);
    }
    out.push_back(*value);
  }
  return out;
}

bool is_all(const std::vector<std::string>& items) {
  return items.size() == 1 && items.front() == "all";
}

// Defaults, then the config file, then command-line flags.
ltm::ExperimentConfig resolve(const Flags& f) {
  ltm::ExperimentConfig base;
  base.out_dir = ltm::default_out_dir();
  ltm::ExperimentConfig c =
      f.config.empty() ? base : ltm::load_config(f.config, base);

  if (is_all(f.methods)) {
    c.methods.assign(ltm::kAllMethods.begin(), ltm::kAllMethods.end());
  } else if (!f.methods.empty()) {
    c.methods = parse_list<ltm::MethodId>(f.methods, ltm::parse_method, "method");
  }
  if (!f.models.empty()) {
    c.models = parse_list<ltm::ProbModel>(f.models, ltm::parse_model, "model");
  }
  if (!f.voters.empty()) c.voters = f.voters;
  if (!f.candidates.empty()) c.candidates = f.candidates;
  if (is_all(f.infos)) {
    c.infos.assign(ltm::kAllInfoTypes.begin(), ltm::kAllInfoTypes.end());
  } else if (!f.infos.empty()) {
    c.infos = parse_list<ltm::InfoType>(f.infos, ltm::parse_info, "info type");
  }
  if (!f.labeling.empty()) {
    c.labeling = parse_list<ltm::Labeling>({f.labeling}, ltm::parse_labeling,
                                           "labeling")
                     .front();
  }
  if (f.hidden.size() == 1 && f.hidden.front() == "default") {
    c.hidden = ltm::default_hidden_grid();
  } else if (!f.hidden.empty()) {
    c.hidden = parse_list<std::vector<int>>(f.hidden, ltm::parse_hidden,
                                            "hidden size");
  }
  if (!f.seeds.empty()) c.seeds = f.seeds;
  if (f.workers > 0) c.workers = f.workers;
  if (f.train_size > 0) c.train_size = f.train_size;
  if (!f.out.empty()) c.out_dir = f.out;
  c.validate();
  return c;
}

void print_stage(const char* stage, const ltm::StageSummary& s) {
  std::printf("%s: %d done, %d skipped\n", stage, s.done, s.skipped);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-voter manipulation workbench for preferential voting methods"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  app.add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--method", f.methods, "Voting methods, comma separated, or 'all'")
      ->delimiter(',');
  app.add_option("--model", f.models, "uniform, spatial2d or mallows[:rel_phi]")
      ->delimiter(',');
  app.add_option("--voters", f.voters, "Voter counts")->delimiter(',');
  app.add_option("--candidates", f.candidates, "Candidate counts (2..6)")
      ->delimiter(',');
  app.add_option("--info", f.infos, "Information types, or 'all'")->delimiter(',');
  app.add_option("--labeling", f.labeling, "optimizing or satisficing");
  app.add_option("--hidden", f.hidden,
                 "Network sizes such as 128,64x64, or 'default' for the grid")
      ->delimiter(',');
  app.add_option("--seed", f.seeds, "Generation seeds")->delimiter(',');
  app.add_option("--workers", f.workers, "Task pool size")->check(CLI::PositiveNumber);
  app.add_option("--train-size", f.train_size, "Training instances per cell")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", f.out, "Output root (default $LTM_OUT_DIR or ltm_out)");

  auto* gen = app.add_subcommand("gen", "Write labeled training datasets");
  auto* train = app.add_subcommand("train", "Train one network per cell and size");
  auto* eval = app.add_subcommand("eval", "Evaluate trained networks");
  auto* baseline = app.add_subcommand("baseline", "Evaluate reference policies");
  std::string policy = "ideal";
  baseline->add_option("--policy", policy, "ideal, sincere or both")
      ->check(CLI::IsMember({"ideal", "sincere", "both"}));
  auto* report = app.add_subcommand("report", "Aggregate results into CSV tables");
  auto* replay = app.add_subcommand("replay", "Re-run one manifest entry from scratch");
  std::string run_id;
  replay->add_option("--run", run_id, "Run id from manifest.json")->required();
  auto* show = app.add_subcommand("config", "Print the resolved config as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    const ltm::ExperimentConfig config = resolve(f);
    if (*gen) {
      print_stage("gen", ltm::gen_data(config));
    } else if (*train) {
      print_stage("train", ltm::train_grid(config));
    } else if (*eval) {
      print_stage("eval", ltm::eval_grid(config));
    } else if (*baseline) {
      std::vector<ltm::BaselineKind> kinds;
      if (policy != "sincere") kinds.push_back(ltm::BaselineKind::kIdeal);
      if (policy != "ideal") kinds.push_back(ltm::BaselineKind::kSincere);
      print_stage("baseline", ltm::baseline_grid(config, kinds));
    } else if (*report) {
      const auto r = ltm::write_report(config.out_dir / "results",
                                       config.out_dir / "report");
      std::printf("report: %zu summary rows written to %s\n", r.summary.size(),
                  (config.out_dir / "report").c_str());
    } else if (*replay) {
      const auto manifest = ltm::RunManifest::open(config.out_dir);
      const auto* entry = manifest.find(run_id);
      if (entry == nullptr) throw std::runtime_error("unknown run " + run_id);
      const auto outcome = ltm::run_single(entry->spec);
      const auto row = ltm::make_result_row(
          outcome.evaluation, entry->spec.cell.labeling,
          entry->spec.net_config().hidden_label());
      std::printf("%s\n%s\n", ltm::results_csv_header().c_str(),
                  ltm::format_result_row(row).c_str());
    } else if (*show) {
      std::printf("%s\n", ltm::config_to_json(config).c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ltm: %s\n", e.what());
    return 1;
  }
  return 0;
}
