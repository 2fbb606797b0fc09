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

#include "ltm/samplers.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

namespace ltm {
namespace {

constexpr int kMaxRedraws = 1000;

void check_shape(int n, int m) {
  if (n < 1) throw std::invalid_argument("need at least one voter");
  if (m < 2 || m > kMaxCandidates) {
    throw std::invalid_argument("candidate count out of range");
  }
}

// Fills `row` with draw() until its values are pairwise distinct.
void draw_distinct_row(std::span<double> row,
                       const std::function<void(std::span<double>)>& draw,
                       SampleStats* stats) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    draw(row);
    if (UtilityProfile::has_distinct_values(row)) {
      if (stats != nullptr) ++stats->rows;
      return;
    }
    if (stats != nullptr) ++stats->row_redraws;
  }
  throw std::runtime_error("could not draw a row without utility ties");
}

}  // namespace

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kUniform:
      return "uniform";
    case ModelKind::kSpatial2D:
      return "spatial2d";
    case ModelKind::kMallows:
      return "mallows";
  }
  return "?";
}

std::optional<ProbModel> parse_model(std::string_view text) {
  if (text == "uniform" || text == "0") return ProbModel::uniform();
  if (text == "spatial2d" || text == "1") return ProbModel::spatial2d();
  if (text == "mallows" || text == "2") return ProbModel::mallows();
  for (std::string_view prefix : {"mallows:", "2:"}) {
    if (text.starts_with(prefix)) {
      const std::string value(text.substr(prefix.size()));
      char* end = nullptr;
      const double rel_phi = std::strtod(value.c_str(), &end);
      if (end == value.c_str() || *end != '\0' || !(rel_phi > 0.0) ||
          rel_phi > 1.0) {
        return std::nullopt;
      }
      return ProbModel::mallows(rel_phi);
    }
  }
  return std::nullopt;
}

std::string model_label(const ProbModel& model) {
  std::string out(model_name(model.kind));
  if (model.kind == ModelKind::kMallows && model.rel_phi != 0.8) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), ":%.17g", model.rel_phi);
    out += buf;
  }
  return out;
}

UtilityProfile sample_uniform(int n, int m, RandomStream& stream,
                              SampleStats* stats) {
  check_shape(n, m);
  std::vector<double> values(static_cast<size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    draw_distinct_row(
        std::span<double>(values).subspan(static_cast<size_t>(i) * m, m),
        [&](std::span<double> row) {
          for (double& u : row) u = stream.uniform01();
        },
        stats);
  }
  return UtilityProfile(n, m, std::move(values));
}

UtilityProfile sample_spatial2d(int n, int m, RandomStream& stream,
                                SampleStats* stats) {
  check_shape(n, m);
  std::vector<double> cx(m), cy(m);
  for (int c = 0; c < m; ++c) {
    cx[c] = stream.normal();
    cy[c] = stream.normal();
  }
  std::vector<double> values(static_cast<size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    draw_distinct_row(
        std::span<double>(values).subspan(static_cast<size_t>(i) * m, m),
        [&](std::span<double> row) {
          const double vx = stream.normal();
          const double vy = stream.normal();
          for (int c = 0; c < m; ++c) {
            const double dx = vx - cx[c];
            const double dy = vy - cy[c];
            row[c] = -(dx * dx + dy * dy);
          }
        },
        stats);
  }
  return UtilityProfile(n, m, std::move(values));
}

double mallows_expected_swaps(int m, double phi) {
  if (!(phi >= 0.0) || phi > 1.0) {
    throw std::invalid_argument("Mallows phi must lie in [0, 1]");
  }
  // Inserting the j-th reference item adds d inversions w.p. phi^d / Z_j.
  double total = 0.0;
  for (int j = 1; j <= m; ++j) {
    double weighted = 0.0;
    double z = 0.0;
    double power = 1.0;
    for (int d = 0; d < j; ++d) {
      weighted += d * power;
      z += power;
      power *= phi;
    }
    total += weighted / z;
  }
  return total;
}

double mallows_phi_from_rel_phi(int m, double rel_phi) {
  if (!(rel_phi > 0.0) || rel_phi > 1.0) {
    throw std::invalid_argument("rel_phi must lie in (0, 1]");
  }
  if (rel_phi == 1.0) return 1.0;
  const double target = rel_phi * m * (m - 1) / 4.0;
  double lo = 0.0;
  double hi = 1.0;
  double mid = 0.5;
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double gap = mallows_expected_swaps(m, mid) - target;
    if (std::abs(gap) <= 1e-10) break;
    (gap < 0.0 ? lo : hi) = mid;
  }
  return mid;
}

Ranking sample_mallows_ranking(int m, double phi, RandomStream& stream) {
  std::vector<int> order;
  order.reserve(m);
  std::vector<double> weights(m);
  for (int item = 0; item < m; ++item) {
    // Position p (0 = top) among the `item` already placed creates
    // item - p inversions.
    double z = 0.0;
    for (int p = 0; p <= item; ++p) {
      weights[p] = std::pow(phi, item - p);
      z += weights[p];
    }
    double u = stream.uniform01() * z;
    int p = item;
    for (int q = 0; q <= item; ++q) {
      if (u < weights[q]) {
        p = q;
        break;
      }
      u -= weights[q];
    }
    order.insert(order.begin() + p, item);
  }
  return Ranking::from_order(order);
}

UtilityProfile sample_mallows(int n, int m, double rel_phi,
                              RandomStream& stream, SampleStats* stats) {
  check_shape(n, m);
  const double phi = mallows_phi_from_rel_phi(m, rel_phi);
  std::vector<double> values(static_cast<size_t>(n) * m);
  std::vector<double> sorted(m);
  for (int i = 0; i < n; ++i) {
    const Ranking ballot = sample_mallows_ranking(m, phi, stream);
    draw_distinct_row(
        sorted,
        [&](std::span<double> row) {
          for (double& u : row) u = stream.uniform01();
        },
        stats);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (int pos = 0; pos < m; ++pos) {
      values[static_cast<size_t>(i) * m + ballot.at(pos)] = sorted[pos];
    }
  }
  return UtilityProfile(n, m, std::move(values));
}

UtilityProfile sample_profile(const ProbModel& model, int n, int m,
                              RandomStream& stream, SampleStats* stats) {
  switch (model.kind) {
    case ModelKind::kUniform:
      return sample_uniform(n, m, stream, stats);
    case ModelKind::kSpatial2D:
      return sample_spatial2d(n, m, stream, stats);
    case ModelKind::kMallows:
      return sample_mallows(n, m, model.rel_phi, stream, stats);
  }
  throw std::invalid_argument("unknown probability model");
}

}  // namespace ltm
