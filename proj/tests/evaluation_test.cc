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

#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "ltm/oracle.h"
#include "ltm/random.h"

namespace ltm {
namespace {

std::shared_ptr<const Mlp> random_net(int m, InfoType info, uint64_t seed) {
  NetConfig c;
  c.input_dim = m + info_length(info, m);
  c.hidden = {16};
  c.output_dim = static_cast<int>(factorial(m));
  c.init_seed = seed;
  return std::make_shared<const Mlp>(init_net(c));
}

void expect_completed(const EvalResult& r, const EvalConfig& config = {}) {
  EXPECT_FALSE(r.capped);
  EXPECT_GE(r.samples, config.min_samples);
  EXPECT_LT(r.sem, config.sem_target);
}

TEST(MeanAccumulatorTest, SampleStatistics) {
  MeanAccumulator acc;
  EXPECT_EQ(acc.sem(), 0.0);
  for (double x : {0.0, 0.0, 1.0, 1.0}) acc.add(x);
  EXPECT_EQ(acc.count(), 4);
  EXPECT_DOUBLE_EQ(acc.mean(), 0.5);
  EXPECT_NEAR(acc.variance(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(acc.sem(), 0.288675, 1e-6);

  // Welford against the two-pass textbook formula.
  RandomStream stream(91);
  MeanAccumulator big;
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) {
    xs.push_back(stream.normal() * 3.0 + 10.0);
    big.add(xs.back());
  }
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  EXPECT_NEAR(big.mean(), mean, 1e-12);
  EXPECT_NEAR(big.variance(), ss / (xs.size() - 1), 1e-10);
}

TEST(DecideTest, PolicyChoices) {
  const UtilityProfile u = fixtures::tie4_utilities();
  EXPECT_EQ(decide(SincerePolicy{}, MethodId::kBorda, u, 0), Ranking::parse("a>b>c"));
  EXPECT_EQ(decide(IdealPolicy{}, MethodId::kBorda, u, 0), Ranking::parse("a>c>b"));
  EXPECT_EQ(policy_kind(SincerePolicy{}), "sincere");
  EXPECT_EQ(policy_kind(IdealPolicy{}), "ideal");
}

TEST(DecideTest, NetPolicyTakesTheArgmax) {
  // A linear net whose logits ignore the input: ranking 1 has the largest.
  NetConfig c;
  c.input_dim = 6;
  c.output_dim = 6;
  Mlp net = zero_net(c);
  const double probs[] = {0.1, 0.7, 0.2, 1e-9, 1e-9, 1e-9};
  for (int k = 0; k < 6; ++k) net.mutable_layers()[0].biases[k] = std::log(probs[k]);
  NetPolicy policy{std::make_shared<const Mlp>(net), InfoType::kPluralityScores, {}};
  EXPECT_EQ(policy_kind(policy), "net");
  EXPECT_EQ(decide(policy, MethodId::kBorda, fixtures::tie4_utilities(), 0).index(), 1u);

  NetPolicy wrong{random_net(3, InfoType::kMarginMatrix, 1), InfoType::kPluralityScores, {}};
  EXPECT_THROW(decide(wrong, MethodId::kBorda, fixtures::tie4_utilities(), 0),
               std::invalid_argument);
}

TEST(EvaluateTest, SincereIsExactlyZero) {
  for (MethodId id : {MethodId::kPlurality, MethodId::kSplitCycle}) {
    const EvalResult r = evaluate(SincerePolicy{}, id, ProbModel::spatial2d(), 6, 4, 3);
    EXPECT_EQ(r.mean_profitability, 0.0);
    EXPECT_EQ(r.sem, 0.0);
    EXPECT_EQ(r.samples, 4096);
    EXPECT_EQ(r.policy, "sincere");
    EXPECT_EQ(r.info, std::nullopt);
  }
}

TEST(EvaluateTest, IdealBordaIsProfitable) {
  const EvalResult r = ideal_baseline(MethodId::kBorda, ProbModel::uniform(), 5, 3, 7);
  expect_completed(r);
  EXPECT_GT(r.mean_profitability, 2 * r.sem);
  EXPECT_EQ(r.seed, 7u);
  EXPECT_EQ(r.n, 5);
  EXPECT_EQ(r.m, 3);
}

TEST(EvaluateTest, IdealIsNeverNegative) {
  for (MethodId id : kAllMethods) {
    const EvalResult r = ideal_baseline(id, ProbModel::mallows(), 6, 3, 11);
    expect_completed(r);
    EXPECT_GE(r.mean_profitability, 0.0) << method_name(id);
  }
}

TEST(EvaluateTest, IdealIsZeroWithoutPivotalElections) {
  // Near-zero dispersion: every other voter reports the reference ranking,
  // so no single ballot can move the outcome.
  for (MethodId id : kAllMethods) {
    const EvalResult r = ideal_baseline(id, ProbModel::mallows(1e-9), 21, 3, 5);
    EXPECT_EQ(r.mean_profitability, 0.0) << method_name(id);
    EXPECT_EQ(r.samples, 4096);
  }
}

TEST(EvaluateTest, IdealUpperBoundsANet) {
  const auto net = random_net(3, InfoType::kMajorityMatrix, 17);
  const NetPolicy policy{net, InfoType::kMajorityMatrix, {}};
  const EvalResult learned = evaluate(policy, MethodId::kBorda, ProbModel::uniform(), 5, 3, 19);
  const EvalResult ideal = ideal_baseline(MethodId::kBorda, ProbModel::uniform(), 5, 3, 19);
  expect_completed(learned);
  EXPECT_EQ(learned.info, InfoType::kMajorityMatrix);
  EXPECT_GE(ideal.mean_profitability,
            learned.mean_profitability - 2 * (ideal.sem + learned.sem));
}

TEST(EvaluateTest, IndependentOfWorkerCount) {
  const auto net = random_net(4, InfoType::kPluralityRanking, 23);
  const NetPolicy policy{net, InfoType::kPluralityRanking, {}};
  EvalConfig one;
  EvalConfig three;
  three.workers = 3;
  const EvalResult a = evaluate(policy, MethodId::kNanson, ProbModel::uniform(), 10, 4, 29, one);
  const EvalResult b = evaluate(policy, MethodId::kNanson, ProbModel::uniform(), 10, 4, 29, three);
  EXPECT_EQ(a.mean_profitability, b.mean_profitability);
  EXPECT_EQ(a.sem, b.sem);
  EXPECT_EQ(a.samples, b.samples);
  const EvalResult c = evaluate(policy, MethodId::kNanson, ProbModel::uniform(), 10, 4, 31, one);
  EXPECT_NE(a.mean_profitability, c.mean_profitability);
}

TEST(EvaluateTest, CapIsFlagged) {
  EvalConfig config;
  config.min_samples = 512;
  config.max_samples = 1024;
  config.sem_target = 1e-9;
  const EvalResult r = ideal_baseline(MethodId::kBorda, ProbModel::uniform(), 5, 3, 1, config);
  EXPECT_TRUE(r.capped);
  EXPECT_EQ(r.samples, 1024);
}

TEST(EvaluateTest, SamplesComeInWholeBlocks) {
  const EvalResult r = ideal_baseline(MethodId::kMinimax, ProbModel::uniform(), 6, 3, 2);
  EXPECT_EQ(r.samples % 256, 0);
}

TEST(EvalConfigTest, RejectsBadSettings) {
  EvalConfig c;
  c.block_size = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = EvalConfig{};
  c.max_samples = 100;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = EvalConfig{};
  c.workers = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace ltm
