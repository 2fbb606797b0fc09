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

// Exhaustive best-response oracle for a single manipulating voter.
//
// For every one of the m! ballots the manipulator could submit, the oracle
// reruns the voting method with all other ballots fixed and records the
// expected utility of the resulting even-chance lottery. Labels for the
// learner and the profitability metric are derived from that table.

#ifndef LTM_ORACLE_H_
#define LTM_ORACLE_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <optional>
#include <vector>

#include "ltm/elections.h"
#include "ltm/information.h"
#include "ltm/voting_methods.h"

namespace ltm {

// m! classes; 720 at the limit.
inline constexpr int kMaxOracleCandidates = 6;
// Absolute tolerance for comparing lottery expected utilities.
inline constexpr double kEuTolerance = 1e-12;

enum class Labeling : uint8_t {
  kOptimizing = 0,
  kSatisficing = 1,
};

std::string_view labeling_name(Labeling labeling);
std::optional<Labeling> parse_labeling(std::string_view text);

// Bit mask over ranking indices, stored least-significant-bit first in
// ceil(size / 8) bytes (the dataset record layout).
class LabelMask {
 public:
  LabelMask() = default;
  explicit LabelMask(int size);
  // Throws std::invalid_argument on a size mismatch or stray high bits.
  static LabelMask from_bytes(int size, std::span<const uint8_t> bytes);

  int size() const { return size_; }
  bool test(int k) const { return (bytes_[k >> 3] >> (k & 7)) & 1u; }
  void set(int k) { bytes_[k >> 3] |= static_cast<uint8_t>(1u << (k & 7)); }
  int count() const;
  bool any() const { return count() > 0; }
  bool is_subset_of(const LabelMask& other) const;
  std::span<const uint8_t> bytes() const { return bytes_; }

  friend bool operator==(const LabelMask&, const LabelMask&) = default;

 private:
  std::vector<uint8_t> bytes_;
  int size_ = 0;
};

// Evaluates the method on the sincere profile with one voter's ballot
// swapped. Everything independent of that ballot is computed once; margin-
// based methods then cost one O(m^2) update per ballot.
class ResponseEvaluator {
 public:
  ResponseEvaluator(MethodId method, const Profile& sincere, int voter);

  WinnerSet winners(const Ranking& ballot);

 private:
  MethodId method_;
  int voter_;
  MarginMatrix others_;
  MarginMatrix scratch_;
  std::vector<Ranking> ballots_;
};

// Expected utility of every possible submission, indexed by ranking index.
struct ResponseTable {
  std::vector<double> eus;
  int sincere_index = 0;
  double eu_sincere = 0.0;
  // max - min of the manipulator's utilities; positive by construction.
  double utility_range = 1.0;

  int num_rankings() const { return static_cast<int>(eus.size()); }
  double best_eu() const;
  // Normalized gain of submitting ranking k; exactly 0 for the sincere one.
  double profitability(int k) const;
};

// Throws std::invalid_argument when m > kMaxOracleCandidates.
ResponseTable response_table(MethodId method, const UtilityProfile& utilities,
                             const Profile& sincere, int voter);
ResponseTable response_table(MethodId method, const UtilityProfile& utilities,
                             int voter);
std::vector<double> response_eus(MethodId method,
                                 const UtilityProfile& utilities, int voter);

// Every expected-utility maximizing ballot.
LabelMask optimizing_labels(const ResponseTable& table);
LabelMask optimizing_labels(MethodId method, const UtilityProfile& utilities,
                            int voter);
// Every profitable ballot if one exists, else every ballot doing at least as
// well as sincere.
LabelMask satisficing_labels(const ResponseTable& table);
LabelMask satisficing_labels(MethodId method, const UtilityProfile& utilities,
                             int voter);
LabelMask make_labels(const ResponseTable& table, Labeling labeling);

struct ManipulationOutcome {
  Ranking submitted;
  WinnerSet winners;
  double eu_submitted;
  double eu_sincere;
  double profitability;
};

ManipulationOutcome evaluate_submission(MethodId method,
                                        const UtilityProfile& utilities,
                                        int voter, const Ranking& submitted);
double profitability(MethodId method, const UtilityProfile& utilities,
                     int voter, const Ranking& submitted);

struct InstanceMeta {
  MethodId method = MethodId::kPlurality;
  InfoType info = InfoType::kPluralityScores;
  int n = 0;
  int m = 0;

  friend bool operator==(const InstanceMeta&, const InstanceMeta&) = default;
};

// One supervised example. Features are single precision, matching the
// dataset file.
struct LabeledInstance {
  std::vector<float> features;
  LabelMask labels;
  InstanceMeta meta;
};

LabeledInstance make_instance(MethodId method, const UtilityProfile& utilities,
                              int manipulator, InfoType info,
                              Labeling labeling,
                              const FeatureOptions& options = {});

}  // namespace ltm

#endif  // LTM_ORACLE_H_
