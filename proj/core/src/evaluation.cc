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

#include "ltm/evaluation.h"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "ltm/oracle.h"

namespace ltm {
namespace {

constexpr int kManipulator = 0;

void check_net_fits(const NetPolicy& policy, int m) {
  if (!policy.net) throw std::invalid_argument("net policy without a network");
  const NetConfig& c = policy.net->config();
  if (c.input_dim != m + info_length(policy.info, m) ||
      c.output_dim != static_cast<int>(factorial(m))) {
    throw std::invalid_argument("network shape does not fit m = " +
                                std::to_string(m));
  }
}

Ranking net_choice(const NetPolicy& policy, MethodId method,
                   const UtilityProfile& u, const Profile& sincere,
                   int manipulator) {
  const int m = u.num_candidates();
  check_net_fits(policy, m);
  const auto x =
      build_features(u, sincere, manipulator, policy.info, method, policy.options);
  return Ranking::from_index(m, static_cast<uint64_t>(policy.net->argmax(x)));
}

int lowest_optimal(const ResponseTable& table) {
  const LabelMask best = optimizing_labels(table);
  for (int k = 0; k < best.size(); ++k) {
    if (best.test(k)) return k;
  }
  throw std::logic_error("empty optimal set");
}

// Profitability of the policy's submission on one sampled election.
double sample_profitability(const Policy& policy, MethodId method,
                            const UtilityProfile& u) {
  const Profile sincere = induced_profile(u);
  if (std::holds_alternative<IdealPolicy>(policy)) {
    const ResponseTable table = response_table(method, u, sincere, kManipulator);
    return table.profitability(lowest_optimal(table));
  }
  const Ranking& sincere_ballot = sincere.ballot(kManipulator);
  Ranking choice = sincere_ballot;
  if (const auto* net = std::get_if<NetPolicy>(&policy)) {
    choice = net_choice(*net, method, u, sincere, kManipulator);
  }
  if (choice == sincere_ballot) return 0.0;
  const auto row = u.row(kManipulator);
  ResponseEvaluator evaluator(method, sincere, kManipulator);
  const double eu_sincere = lottery_eu(evaluator.winners(sincere_ballot), row);
  const double eu_choice = lottery_eu(evaluator.winners(choice), row);
  const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
  return (eu_choice - eu_sincere) / (*hi - *lo);
}

}  // namespace

std::string policy_kind(const Policy& policy) {
  if (std::holds_alternative<NetPolicy>(policy)) return "net";
  if (std::holds_alternative<SincerePolicy>(policy)) return "sincere";
  return "ideal";
}

Ranking decide(const Policy& policy, MethodId method,
               const UtilityProfile& utilities, int manipulator) {
  const Profile sincere = induced_profile(utilities);
  if (manipulator < 0 || manipulator >= sincere.num_voters()) {
    throw std::out_of_range("manipulator index out of range");
  }
  if (const auto* net = std::get_if<NetPolicy>(&policy)) {
    return net_choice(*net, method, utilities, sincere, manipulator);
  }
  if (std::holds_alternative<SincerePolicy>(policy)) {
    return sincere.ballot(manipulator);
  }
  const ResponseTable table =
      response_table(method, utilities, sincere, manipulator);
  return Ranking::from_index(utilities.num_candidates(),
                             static_cast<uint64_t>(lowest_optimal(table)));
}

// -------------------------------------------------------- MeanAccumulator

void MeanAccumulator::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

double MeanAccumulator::variance() const {
  return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double MeanAccumulator::stddev() const { return std::sqrt(variance()); }

double MeanAccumulator::sem() const {
  return count_ == 0 ? 0.0
                     : stddev() / std::sqrt(static_cast<double>(count_));
}

// ------------------------------------------------------------- evaluation

void EvalConfig::validate() const {
  if (min_samples < 2 || !(sem_target > 0.0) || max_samples < min_samples ||
      block_size < 1 || workers < 1) {
    throw std::invalid_argument("invalid evaluation configuration");
  }
}

EvalResult evaluate(const Policy& policy, MethodId method,
                    const ProbModel& model, int n, int m, uint64_t seed,
                    const EvalConfig& config) {
  config.validate();
  if (m < 2 || m > kMaxOracleCandidates) {
    throw std::invalid_argument("evaluation needs 2 <= m <= 6");
  }
  if (const auto* net = std::get_if<NetPolicy>(&policy)) check_net_fits(*net, m);

  auto run_block = [&](int64_t block, std::vector<double>& out) {
    RandomStream stream(derive_seed(seed, static_cast<uint64_t>(block)));
    out.resize(static_cast<size_t>(config.block_size));
    for (double& x : out) {
      x = sample_profitability(policy, method, sample_profile(model, n, m, stream));
    }
  };

  MeanAccumulator acc;
  bool capped = false;
  bool done = false;
  std::vector<std::vector<double>> wave(static_cast<size_t>(config.workers));
  for (int64_t next_block = 0; !done; next_block += config.workers) {
    if (config.workers == 1) {
      run_block(next_block, wave[0]);
    } else {
      std::vector<std::thread> threads;
      for (int w = 0; w < config.workers; ++w) {
        threads.emplace_back(run_block, next_block + w, std::ref(wave[w]));
      }
      for (auto& t : threads) t.join();
    }
    for (const auto& block : wave) {
      for (double x : block) acc.add(x);
      if (acc.count() >= config.min_samples && acc.sem() < config.sem_target) {
        done = true;
      } else if (acc.count() >= config.max_samples) {
        done = capped = true;
      }
      if (done) break;
    }
  }

  EvalResult result;
  result.mean_profitability = acc.mean();
  result.sem = acc.sem();
  result.samples = acc.count();
  result.capped = capped;
  result.policy = policy_kind(policy);
  result.method = method;
  result.model = model;
  result.n = n;
  result.m = m;
  if (const auto* net = std::get_if<NetPolicy>(&policy)) result.info = net->info;
  result.seed = seed;
  return result;
}

EvalResult ideal_baseline(MethodId method, const ProbModel& model, int n,
                          int m, uint64_t seed, const EvalConfig& config) {
  return evaluate(IdealPolicy{}, method, model, n, m, seed, config);
}

}  // namespace ltm
