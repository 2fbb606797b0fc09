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

#include "ltm/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "binary_io.h"

namespace ltm {
namespace {

constexpr int kColumns = 12;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t end = line.find(sep, start);
    if (end == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

template <typename T>
T parse_number(std::string_view field, int line) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::runtime_error("results line " + std::to_string(line) +
                             ": bad number '" + std::string(field) + "'");
  }
  return value;
}

bool is_baseline(const ResultRow& row) {
  return row.hidden_config == "ideal" || row.hidden_config == "sincere";
}

}  // namespace

ResultRow make_result_row(const EvalResult& result,
                          std::optional<Labeling> labeling,
                          const std::string& hidden_config) {
  ResultRow row;
  row.method = std::string(method_name(result.method));
  row.model = model_label(result.model);
  row.n = result.n;
  row.m = result.m;
  row.info = result.info ? std::string(info_name(*result.info))
                         : std::string(kNotApplicable);
  row.labeling = labeling ? std::string(labeling_name(*labeling))
                          : std::string(kNotApplicable);
  row.hidden_config = hidden_config;
  row.seed = result.seed;
  row.mean_profitability = result.mean_profitability;
  row.sem = result.sem;
  row.samples = result.samples;
  row.flag = result.capped ? "capped" : "ok";
  return row;
}

std::string results_csv_header() {
  return "method,model,n,m,info,labeling,hidden_config,seed,"
         "mean_profitability,sem,samples,flag";
}

std::string format_result_row(const ResultRow& row) {
  std::ostringstream out;
  out << row.method << ',' << row.model << ',' << row.n << ',' << row.m << ','
      << row.info << ',' << row.labeling << ',' << row.hidden_config << ','
      << row.seed << ',' << format_double(row.mean_profitability) << ','
      << format_double(row.sem) << ',' << row.samples << ',' << row.flag;
  return out.str();
}

std::vector<ResultRow> parse_results_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  int line_no = 0;
  bool header_seen = false;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != results_csv_header()) {
        throw std::runtime_error("results csv: unexpected header");
      }
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != kColumns) {
      throw std::runtime_error("results line " + std::to_string(line_no) +
                               ": expected 12 columns");
    }
    ResultRow row;
    row.method = f[0];
    row.model = f[1];
    row.n = parse_number<int>(f[2], line_no);
    row.m = parse_number<int>(f[3], line_no);
    row.info = f[4];
    row.labeling = f[5];
    row.hidden_config = f[6];
    row.seed = parse_number<uint64_t>(f[7], line_no);
    row.mean_profitability = parse_number<double>(f[8], line_no);
    row.sem = parse_number<double>(f[9], line_no);
    row.samples = parse_number<int64_t>(f[10], line_no);
    row.flag = f[11];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> read_results_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        files.push_back(entry.path());
      }
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ResultRow> rows;
  for (const auto& file : files) {
    const auto bytes = io::read_file(file);
    auto part = parse_results_csv(
        std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

Report build_report(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("no result rows to report");

  using CellKey = std::tuple<std::string, std::string, int, int, std::string,
                             std::string>;  // method, model, n, m, info, labeling
  using BaseKey = std::tuple<std::string, std::string, int, int>;
  struct Sum {
    double total = 0.0;
    double var = 0.0;
    int count = 0;
  };
  std::map<std::pair<CellKey, std::string>, Sum> by_size;
  std::map<BaseKey, Sum> ideal;
  Report report;

  for (const ResultRow& row : rows) {
    if (row.hidden_config == "sincere") {
      report.sincere.push_back(row);
    } else if (row.hidden_config == "ideal") {
      Sum& s = ideal[{row.method, row.model, row.n, row.m}];
      s.total += row.mean_profitability;
      s.var += row.sem * row.sem;
      ++s.count;
    } else if (!is_baseline(row)) {
      Sum& s = by_size[{{row.method, row.model, row.n, row.m, row.info,
                         row.labeling},
                        row.hidden_config}];
      s.total += row.mean_profitability;
      ++s.count;
    }
  }

  for (const auto& [key, s] : ideal) {
    const auto& [method, model, n, m] = key;
    report.ideal.push_back({method, model, n, m, s.total / s.count,
                            std::sqrt(s.var) / s.count, s.count});
  }

  std::map<CellKey, SummaryRow> best;
  for (const auto& [key, s] : by_size) {
    const auto& [cell, hidden] = key;
    const auto& [method, model, n, m, info, labeling] = cell;
    const double mean = s.total / s.count;
    report.sizes.push_back(
        {method, model, info, labeling, hidden, n, m, mean, s.count});
    auto [it, inserted] = best.try_emplace(cell);
    SummaryRow& row = it->second;
    if (inserted || mean > row.best_mean) {
      row.method = method;
      row.model = model;
      row.info = info;
      row.labeling = labeling;
      row.n = n;
      row.m = m;
      row.best_hidden = hidden;
      row.best_mean = mean;
    }
  }
  for (auto& [cell, row] : best) {
    const auto it = ideal.find({row.method, row.model, row.n, row.m});
    if (it != ideal.end()) {
      row.ideal_mean = it->second.total / it->second.count;
      if (*row.ideal_mean >= kRatioThreshold) {
        row.ratio = row.best_mean / *row.ideal_mean;
      }
    }
    report.summary.push_back(row);
  }
  return report;
}

Report write_report(const std::filesystem::path& results_dir,
                    const std::filesystem::path& out_dir) {
  const auto rows = read_results_dir(results_dir);
  if (rows.empty()) {
    throw std::runtime_error("no results found in " + results_dir.string());
  }
  Report report = build_report(rows);
  std::filesystem::create_directories(out_dir);

  std::ostringstream summary;
  summary << "method,model,n,m,info,labeling,best_hidden,best_mean,"
             "ideal_mean,ratio\n";
  for (const SummaryRow& r : report.summary) {
    summary << r.method << ',' << r.model << ',' << r.n << ',' << r.m << ','
            << r.info << ',' << r.labeling << ',' << r.best_hidden << ','
            << format_double(r.best_mean) << ','
            << (r.ideal_mean ? format_double(*r.ideal_mean)
                             : std::string(kRatioSentinel))
            << ','
            << (r.ratio ? format_double(*r.ratio) : std::string(kRatioSentinel))
            << '\n';
  }
  io::write_file_atomic(out_dir / "summary.csv", summary.str());

  std::ostringstream sizes;
  sizes << "method,model,n,m,info,labeling,hidden_config,mean_profitability,"
           "seeds\n";
  for (const SizeRow& r : report.sizes) {
    sizes << r.method << ',' << r.model << ',' << r.n << ',' << r.m << ','
          << r.info << ',' << r.labeling << ',' << r.hidden_config << ','
          << format_double(r.mean_profitability) << ',' << r.seeds << '\n';
  }
  io::write_file_atomic(out_dir / "plot_sizes.csv", sizes.str());

  std::ostringstream ideal;
  ideal << "method,model,n,m,mean_profitability,sem,seeds\n";
  for (const IdealRow& r : report.ideal) {
    ideal << r.method << ',' << r.model << ',' << r.n << ',' << r.m << ','
          << format_double(r.mean_profitability) << ',' << format_double(r.sem)
          << ',' << r.seeds << '\n';
  }
  io::write_file_atomic(out_dir / "plot_ideal.csv", ideal.str());

  std::ostringstream sincere;
  sincere << results_csv_header() << '\n';
  for (const ResultRow& r : report.sincere) {
    sincere << format_result_row(r) << '\n';
  }
  io::write_file_atomic(out_dir / "sincere.csv", sincere.str());
  return report;
}

}  // namespace ltm
