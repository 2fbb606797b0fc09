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

// Probability models over utility profiles. Every sampler guarantees rows
// with pairwise distinct utilities by redrawing a row on a (floating-point)
// collision.

#ifndef LTM_SAMPLERS_H_
#define LTM_SAMPLERS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ltm/elections.h"
#include "ltm/random.h"

namespace ltm {

enum class ModelKind : uint8_t {
  kUniform = 0,
  kSpatial2D = 1,
  kMallows = 2,
};

struct ProbModel {
  ModelKind kind = ModelKind::kUniform;
  // Normalized Mallows dispersion, only read for kMallows.
  double rel_phi = 0.8;

  static ProbModel uniform() { return {ModelKind::kUniform, 0.8}; }
  static ProbModel spatial2d() { return {ModelKind::kSpatial2D, 0.8}; }
  static ProbModel mallows(double rel_phi = 0.8) {
    return {ModelKind::kMallows, rel_phi};
  }

  friend bool operator==(const ProbModel&, const ProbModel&) = default;
};

std::string_view model_name(ModelKind kind);
// "uniform", "spatial2d", "mallows", "mallows:0.5" or the codes 0/1/2.
std::optional<ProbModel> parse_model(std::string_view text);
// Inverse of parse_model; includes rel_phi when it differs from 0.8.
std::string model_label(const ProbModel& model);

// Optional counters filled by the samplers.
struct SampleStats {
  int64_t rows = 0;
  int64_t row_redraws = 0;
};

// Each utility i.i.d. uniform on [0, 1).
UtilityProfile sample_uniform(int n, int m, RandomStream& stream,
                              SampleStats* stats = nullptr);

// Voters and candidates i.i.d. standard bivariate normal; utility is the
// negated squared Euclidean distance. Candidates are drawn first.
UtilityProfile sample_spatial2d(int n, int m, RandomStream& stream,
                                SampleStats* stats = nullptr);

// Normalized Mallows around 0>1>...>m-1. Each ballot gets m sorted uniform
// utilities assigned top-down. Throws std::invalid_argument unless
// 0 < rel_phi <= 1.
UtilityProfile sample_mallows(int n, int m, double rel_phi,
                              RandomStream& stream,
                              SampleStats* stats = nullptr);

UtilityProfile sample_profile(const ProbModel& model, int n, int m,
                              RandomStream& stream,
                              SampleStats* stats = nullptr);

// Expected Kendall-tau distance to the reference under Mallows(phi),
// 0 <= phi <= 1.
double mallows_expected_swaps(int m, double phi);
// Dispersion phi whose expected swap distance equals rel_phi times the
// uniform (phi = 1) expectation m(m-1)/4. Solved by bisection.
double mallows_phi_from_rel_phi(int m, double rel_phi);
// One Mallows(phi) ranking by repeated insertion.
Ranking sample_mallows_ranking(int m, double phi, RandomStream& stream);

}  // namespace ltm

#endif  // LTM_SAMPLERS_H_
