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

// Manipulation policies and Monte-Carlo estimation of their mean
// profitability.

#ifndef LTM_EVALUATION_H_
#define LTM_EVALUATION_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "ltm/elections.h"
#include "ltm/information.h"
#include "ltm/neural.h"
#include "ltm/samplers.h"
#include "ltm/voting_methods.h"

namespace ltm {

// A trained network reading `info`; submits its most probable ranking.
struct NetPolicy {
  std::shared_ptr<const Mlp> net;
  InfoType info = InfoType::kMajorityMatrix;
  FeatureOptions options;
};
// Always submits the sincere ranking.
struct SincerePolicy {};
// Full-information best response: the lowest-index optimal ranking.
struct IdealPolicy {};

using Policy = std::variant<NetPolicy, SincerePolicy, IdealPolicy>;

// "net", "sincere" or "ideal".
std::string policy_kind(const Policy& policy);

// Ranking the policy submits for `manipulator`. Throws std::invalid_argument
// if a network does not fit (n, m, info).
Ranking decide(const Policy& policy, MethodId method,
               const UtilityProfile& utilities, int manipulator);

// Running mean and sample variance (Welford).
class MeanAccumulator {
 public:
  void add(double x);

  int64_t count() const { return count_; }
  double mean() const { return mean_; }
  // Sample variance with denominator N - 1; 0 for N < 2.
  double variance() const;
  double stddev() const;
  // Standard error of the mean: stddev / sqrt(N).
  double sem() const;

 private:
  int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct EvalConfig {
  int64_t min_samples = 4096;
  double sem_target = 5e-4;
  int64_t max_samples = 1'000'000;
  // Samples per block; block b draws from derive_seed(seed, b). The stopping
  // rule is checked after each block, so results do not depend on `workers`.
  int block_size = 256;
  int workers = 1;

  void validate() const;
};

struct EvalResult {
  double mean_profitability = 0.0;
  double sem = 0.0;
  int64_t samples = 0;
  // True when max_samples was reached before the SEM target.
  bool capped = false;

  std::string policy;
  MethodId method = MethodId::kPlurality;
  ProbModel model;
  int n = 0;
  int m = 0;
  std::optional<InfoType> info;
  uint64_t seed = 0;
};

// Samples elections until N >= min_samples and SEM < sem_target (or the
// cap), scoring the profitability of the policy's ranking for voter 0.
EvalResult evaluate(const Policy& policy, MethodId method,
                    const ProbModel& model, int n, int m, uint64_t seed,
                    const EvalConfig& config = {});

// evaluate() with the ideal full-information manipulator.
EvalResult ideal_baseline(MethodId method, const ProbModel& model, int n,
                          int m, uint64_t seed, const EvalConfig& config = {});

}  // namespace ltm

#endif  // LTM_EVALUATION_H_
