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

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "ltm/report.h"
#include "test_support.h"

namespace ltm {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// One cell, two small nets, loose evaluation target: seconds, not minutes.
ExperimentConfig tiny_config(const fs::path& out) {
  ExperimentConfig c;
  c.methods = {MethodId::kBorda};
  c.voters = {5};
  c.candidates = {3};
  c.infos = {InfoType::kMajorityMatrix};
  c.hidden = {{8}, {4, 4}};
  c.train.batch_size = 64;
  c.train.min_iterations = 40;
  c.train.validate_every = 20;
  c.train.patience = 2;
  c.train.validation_size = 256;
  c.train.max_iterations = 200;
  c.eval.min_samples = 512;
  c.eval.sem_target = 2e-2;
  c.train_size = 512;
  c.seeds = {5};
  c.out_dir = out;
  return c;
}

ResultRow row(const std::string& method, const std::string& hidden,
              double mean, const std::string& info = "majority_matrix") {
  ResultRow r;
  r.method = method;
  r.model = "uniform";
  r.n = 11;
  r.m = 3;
  const bool baseline = hidden == "ideal" || hidden == "sincere";
  r.info = baseline ? std::string(kNotApplicable) : info;
  r.labeling = baseline ? std::string(kNotApplicable) : "optimizing";
  r.hidden_config = hidden;
  r.mean_profitability = mean;
  r.sem = 1e-4;
  r.samples = 4096;
  r.flag = "ok";
  return r;
}

TEST(ConfigTest, DefaultsMatchTheStudy) {
  const ExperimentConfig c;
  EXPECT_EQ(c.voters, (std::vector<int>{5, 6, 10, 11, 20, 21}));
  EXPECT_EQ(c.candidates, (std::vector<int>{3, 4, 5, 6}));
  EXPECT_EQ(c.methods.size(), 8u);
  EXPECT_EQ(c.infos.size(), 6u);
  EXPECT_EQ(c.train.batch_size, 512);
  EXPECT_EQ(c.train.learning_rate, 6e-3);
  EXPECT_NO_THROW(c.validate());
  ExperimentConfig bad;
  bad.candidates = {7};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(ConfigTest, HiddenGridHas26DistinctSizes) {
  const auto grid = default_hidden_grid();
  EXPECT_EQ(grid.size(), 26u);
  std::set<std::vector<int>> distinct(grid.begin(), grid.end());
  EXPECT_EQ(distinct.size(), 26u);
  int depth1 = 0, depth2 = 0, depth3 = 0;
  for (const auto& h : grid) {
    depth1 += h.size() == 1;
    depth2 += h.size() == 2;
    depth3 += h.size() == 3;
    for (int w : h) EXPECT_EQ(w & (w - 1), 0);
  }
  EXPECT_EQ(depth1, 10);
  EXPECT_EQ(depth2, 8);
  EXPECT_EQ(depth3, 8);
}

TEST(ConfigTest, JsonRoundTripAndOverlay) {
  ExperimentConfig c = tiny_config("somewhere");
  c.models = {ProbModel::mallows(0.5), ProbModel::spatial2d()};
  c.labeling = Labeling::kSatisficing;
  c.features.normalize = true;
  const std::string text = config_to_json(c);
  EXPECT_EQ(config_to_json(config_from_json(text)), text);

  const ExperimentConfig overlaid =
      config_from_json(R"({"voters": [7], "train": {"patience": 3}})", c);
  EXPECT_EQ(overlaid.voters, (std::vector<int>{7}));
  EXPECT_EQ(overlaid.train.patience, 3);
  EXPECT_EQ(overlaid.train.batch_size, 64);
  EXPECT_EQ(overlaid.candidates, c.candidates);

  EXPECT_THROW(config_from_json(R"({"voterz": [7]})"), std::invalid_argument);
  EXPECT_THROW(config_from_json(R"({"train": {"lr": 1}})"), std::invalid_argument);
  EXPECT_THROW(config_from_json("{not json"), std::invalid_argument);
}

TEST(ConfigTest, OutDirFollowsTheEnvironment) {
  ::setenv(kOutDirEnv, "/tmp/ltm_env_root", 1);
  EXPECT_EQ(default_out_dir(), fs::path("/tmp/ltm_env_root"));
  ::unsetenv(kOutDirEnv);
  EXPECT_EQ(default_out_dir(), fs::path("ltm_out"));
}

TEST(CellTest, IdsAndSeedSharing) {
  CellKey cell;
  cell.method = MethodId::kBorda;
  cell.model = ProbModel::uniform();
  cell.n = 11;
  cell.m = 3;
  cell.info = InfoType::kMajorityMatrix;
  EXPECT_EQ(cell.id(), "borda.uniform.n11.m3.majority_matrix.optimizing.s0");
  cell.model = ProbModel::mallows(0.5);
  EXPECT_EQ(cell.id().find(':'), std::string::npos);

  const SeedPlan a = seed_plan(0, ProbModel::uniform(), 11, 3);
  const SeedPlan b = seed_plan(1, ProbModel::uniform(), 11, 3);
  const SeedPlan c = seed_plan(0, ProbModel::uniform(), 11, 4);
  std::set<uint64_t> streams = {a.train_data, a.validation, a.evaluation,
                                a.shuffle, a.init};
  EXPECT_EQ(streams.size(), 5u);
  EXPECT_NE(a.train_data, b.train_data);
  EXPECT_NE(a.init, c.init);

  ExperimentConfig config;
  config.voters = {11};
  config.candidates = {3};
  EXPECT_EQ(config.cells().size(), 8u * 6u);
  const auto specs = run_specs(config);
  EXPECT_EQ(specs.size(), 8u * 6u * 26u);
  EXPECT_EQ(specs[0].net_config().init_seed, a.init);
  EXPECT_EQ(specs.back().net_config().init_seed, a.init);
}

TEST(RunSpecTest, JsonRoundTrip) {
  ExperimentConfig config = tiny_config("x");
  const RunSpec spec = run_specs(config).back();
  const RunSpec back = run_spec_from_json(run_spec_to_json(spec));
  EXPECT_EQ(back.id(), spec.id());
  EXPECT_EQ(back.cell, spec.cell);
  EXPECT_EQ(back.hidden, spec.hidden);
  EXPECT_EQ(back.train.patience, spec.train.patience);
  EXPECT_EQ(back.eval.sem_target, spec.eval.sem_target);
  EXPECT_EQ(run_spec_to_json(back), run_spec_to_json(spec));
}

TEST(PipelineTest, MissingDatasetNamesTheCell) {
  const ExperimentConfig config = tiny_config(testing::scratch_dir("missing"));
  try {
    train_grid(config);
    FAIL() << "train_grid succeeded without datasets";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(config.cells()[0].id()), std::string::npos)
        << e.what();
  }
}

TEST(PipelineTest, EndToEndResumeReportAndReplay) {
  const fs::path out = testing::scratch_dir("pipeline");
  const ExperimentConfig config = tiny_config(out);

  StageSummary s = gen_data(config);
  EXPECT_EQ(s.done, 1);
  EXPECT_EQ(gen_data(config).skipped, 1);
  EXPECT_EQ(read_dataset_header(s.files.at(0)).count, 512u);

  s = train_grid(config);
  EXPECT_EQ(s.done, 2);
  for (const fs::path& f : s.files) EXPECT_TRUE(fs::exists(f)) << f;
  s = train_grid(config);
  EXPECT_EQ(s.done, 0);
  EXPECT_EQ(s.skipped, 2);

  const RunManifest manifest = RunManifest::open(out);
  ASSERT_EQ(manifest.entries().size(), 2u);
  for (const auto& entry : manifest.entries()) {
    std::istringstream log(slurp(out / entry.log));
    std::string line;
    std::getline(log, line);
    EXPECT_EQ(line, "iteration,train_loss,validation_profitability");
    int last = 0;
    int rows = 0;
    while (std::getline(log, line)) {
      const int it = std::stoi(line.substr(0, line.find(',')));
      EXPECT_GT(it, last);
      last = it;
      ++rows;
    }
    EXPECT_GT(rows, 0);
    EXPECT_EQ(last, entry.iterations);
  }

  EXPECT_EQ(eval_grid(config).done, 2);
  EXPECT_EQ(eval_grid(config).skipped, 2);
  EXPECT_EQ(baseline_grid(config, {BaselineKind::kIdeal, BaselineKind::kSincere}).done, 2);

  const Report report = write_report(out / "results", out / "report");
  ASSERT_EQ(report.sincere.size(), 1u);
  EXPECT_EQ(report.sincere[0].mean_profitability, 0.0);
  EXPECT_EQ(report.sizes.size(), 2u);
  ASSERT_EQ(report.summary.size(), 1u);
  ASSERT_TRUE(report.summary[0].ideal_mean.has_value());
  EXPECT_GT(*report.summary[0].ideal_mean, 0.0);
  for (const char* f : {"summary.csv", "plot_sizes.csv", "plot_ideal.csv", "sincere.csv"}) {
    EXPECT_TRUE(fs::exists(out / "report" / f)) << f;
  }

  // Replay from the manifest alone reproduces the stored result bit for bit.
  const auto& entry = manifest.entries().front();
  const auto stored = parse_results_csv(slurp(out / "results" / (entry.spec.id() + ".csv")));
  ASSERT_EQ(stored.size(), 1u);
  const RunOutcome again = replay_run(out, entry.spec.id());
  EXPECT_EQ(again.evaluation.mean_profitability, stored[0].mean_profitability);
  EXPECT_EQ(again.evaluation.sem, stored[0].sem);
  EXPECT_EQ(again.evaluation.samples, stored[0].samples);
  EXPECT_EQ(again.training.net, load_checkpoint(out / entry.checkpoint));
  EXPECT_THROW(replay_run(out, "no.such.run"), std::runtime_error);
}

TEST(ManifestTest, RefusesADifferentConfig) {
  const fs::path out = testing::scratch_dir("manifest");
  RunManifest m = RunManifest::open(out);
  m.set_config(tiny_config(out));
  m.save();
  RunManifest reopened = RunManifest::open(out);
  EXPECT_NO_THROW(reopened.set_config(tiny_config(out)));
  ExperimentConfig other = tiny_config(out);
  other.train.patience = 9;
  EXPECT_THROW(reopened.set_config(other), std::runtime_error);
  // Output location and pool size are not part of the experiment.
  ExperimentConfig moved = tiny_config("/elsewhere");
  moved.workers = 4;
  EXPECT_NO_THROW(reopened.set_config(moved));
}

TEST(ReportTest, RatioAndSentinel) {
  const Report r = build_report({row("borda", "ideal", 0.04),
                                 row("borda", "64", 0.01),
                                 row("borda", "128", 0.02),
                                 row("split_cycle", "ideal", 0.0),
                                 row("split_cycle", "64", 0.0),
                                 row("nanson", "64", 0.01),
                                 row("borda", "sincere", 0.0)});
  ASSERT_EQ(r.summary.size(), 3u);
  for (const SummaryRow& s : r.summary) {
    if (s.method == "borda") {
      EXPECT_EQ(s.best_hidden, "128");
      EXPECT_DOUBLE_EQ(*s.ratio, 0.5);
    } else {
      EXPECT_FALSE(s.ratio.has_value()) << s.method;
    }
  }
  EXPECT_EQ(r.sincere.size(), 1u);
  EXPECT_EQ(r.ideal.size(), 2u);
  EXPECT_THROW(build_report({}), std::invalid_argument);

  const fs::path dir = testing::scratch_dir("report");
  std::ofstream(dir / "results.csv")
      << results_csv_header() << '\n'
      << format_result_row(row("split_cycle", "ideal", 0.0)) << '\n'
      << format_result_row(row("split_cycle", "64", 0.0)) << '\n';
  write_report(dir, dir / "out");
  const std::string summary = slurp(dir / "out" / "summary.csv");
  EXPECT_NE(summary.find(",NA\n"), std::string::npos) << summary;

  const fs::path empty = testing::scratch_dir("report_empty");
  EXPECT_THROW(write_report(empty, empty / "out"), std::runtime_error);
}

TEST(ReportTest, CsvRoundTripsDoublesExactly) {
  ResultRow r = row("minimax", "32x32", 0.1 + 0.2);
  r.sem = 1.0 / 3.0;
  const std::string text = results_csv_header() + "\n" + format_result_row(r) + "\n";
  const auto back = parse_results_csv(text);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], r);
  EXPECT_THROW(parse_results_csv("bad,header\n"), std::runtime_error);
}

}  // namespace
}  // namespace ltm
