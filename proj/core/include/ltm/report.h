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

// Result rows in CSV form and their aggregation into plot-ready tables.

#ifndef LTM_REPORT_H_
#define LTM_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ltm/evaluation.h"
#include "ltm/oracle.h"

namespace ltm {

// Placeholder in the info/labeling columns of baseline rows.
inline constexpr std::string_view kNotApplicable = "none";
// Written in the ratio column when the ideal mean is too small to divide by.
inline constexpr std::string_view kRatioSentinel = "NA";
inline constexpr double kRatioThreshold = 1e-6;

// One line of a results CSV.
struct ResultRow {
  std::string method;
  std::string model;
  int n = 0;
  int m = 0;
  std::string info;
  std::string labeling;
  // "64x64" for networks, "ideal" or "sincere" for baselines.
  std::string hidden_config;
  uint64_t seed = 0;
  double mean_profitability = 0.0;
  double sem = 0.0;
  int64_t samples = 0;
  // "ok", or "capped" when the sample cap was hit before the SEM target.
  std::string flag;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

// Row for an evaluated policy. Baselines get kNotApplicable for info and
// labeling and their policy kind as hidden_config.
ResultRow make_result_row(const EvalResult& result,
                          std::optional<Labeling> labeling,
                          const std::string& hidden_config);

std::string results_csv_header();
// Doubles are printed with 17 significant digits so they round-trip.
std::string format_result_row(const ResultRow& row);
// Parses a CSV with the header line; throws std::runtime_error on bad input.
std::vector<ResultRow> parse_results_csv(std::string_view text);
// Every *.csv under `dir`, sorted by file name.
std::vector<ResultRow> read_results_dir(const std::filesystem::path& dir);

// Mean over seeds of one network size in one cell.
struct SizeRow {
  std::string method, model, info, labeling, hidden_config;
  int n = 0;
  int m = 0;
  double mean_profitability = 0.0;
  int seeds = 0;
};

struct SummaryRow {
  std::string method, model, info, labeling;
  int n = 0;
  int m = 0;
  std::string best_hidden;
  double best_mean = 0.0;
  std::optional<double> ideal_mean;
  // best_mean / ideal_mean, absent when ideal_mean < kRatioThreshold or no
  // ideal row exists.
  std::optional<double> ratio;
};

struct IdealRow {
  std::string method, model;
  int n = 0;
  int m = 0;
  double mean_profitability = 0.0;
  double sem = 0.0;
  int seeds = 0;
};

struct Report {
  std::vector<SizeRow> sizes;
  std::vector<SummaryRow> summary;
  std::vector<IdealRow> ideal;
  // Baseline rows for the sincere policy, passed through unchanged.
  std::vector<ResultRow> sincere;
};

// Throws std::invalid_argument on an empty input.
Report build_report(const std::vector<ResultRow>& rows);

// Writes summary.csv, plot_sizes.csv, plot_ideal.csv and sincere.csv into
// `out_dir`. Throws std::runtime_error if `results_dir` holds no rows.
Report write_report(const std::filesystem::path& results_dir,
                    const std::filesystem::path& out_dir);

}  // namespace ltm

#endif  // LTM_REPORT_H_
