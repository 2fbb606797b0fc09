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

#include "ltm/oracle.h"

#include <algorithm>
#include <bit>

namespace ltm {

std::string_view labeling_name(Labeling labeling) {
  return labeling == Labeling::kOptimizing ? "optimizing" : "satisficing";
}

std::optional<Labeling> parse_labeling(std::string_view text) {
  if (text == "optimizing" || text == "0") return Labeling::kOptimizing;
  if (text == "satisficing" || text == "1") return Labeling::kSatisficing;
  return std::nullopt;
}

// -------------------------------------------------------------- LabelMask

LabelMask::LabelMask(int size)
    : bytes_(static_cast<size_t>((size + 7) / 8), 0), size_(size) {
  if (size < 1) throw std::invalid_argument("label mask needs size >= 1");
}

LabelMask LabelMask::from_bytes(int size, std::span<const uint8_t> bytes) {
  LabelMask mask(size);
  if (bytes.size() != mask.bytes_.size()) {
    throw std::invalid_argument("label byte count does not match size");
  }
  std::copy(bytes.begin(), bytes.end(), mask.bytes_.begin());
  if (size % 8 != 0 && (mask.bytes_.back() >> (size % 8)) != 0) {
    throw std::invalid_argument("label mask has bits past its size");
  }
  return mask;
}

int LabelMask::count() const {
  int total = 0;
  for (uint8_t b : bytes_) total += std::popcount(b);
  return total;
}

bool LabelMask::is_subset_of(const LabelMask& other) const {
  if (other.size_ != size_) return false;
  for (size_t i = 0; i < bytes_.size(); ++i) {
    if ((bytes_[i] & ~other.bytes_[i]) != 0) return false;
  }
  return true;
}

// ------------------------------------------------------ ResponseEvaluator

ResponseEvaluator::ResponseEvaluator(MethodId method, const Profile& sincere,
                                     int voter)
    : method_(method),
      voter_(voter),
      others_(sincere),
      ballots_(sincere.ballots().begin(), sincere.ballots().end()) {
  if (voter < 0 || voter >= sincere.num_voters()) {
    throw std::out_of_range("voter index out of range");
  }
  others_.add_ballot(sincere.ballot(voter), -1);
  scratch_ = others_;
}

WinnerSet ResponseEvaluator::winners(const Ranking& ballot) {
  if (uses_margins_only(method_)) {
    scratch_ = others_;
    scratch_.add_ballot(ballot);
    return run_method(method_, scratch_);
  }
  ballots_[voter_] = ballot;
  const CandidateSet all = CandidateSet::all(ballot.size());
  switch (method_) {
    case MethodId::kPlurality:
      return WinnerSet(detail::plurality_among(ballots_, all));
    case MethodId::kIrvPut:
      return WinnerSet(detail::irv_put_among(ballots_, all));
    default:
      return WinnerSet(detail::irv_simultaneous_among(ballots_, all));
  }
}

// ---------------------------------------------------------- ResponseTable

double ResponseTable::best_eu() const {
  return *std::max_element(eus.begin(), eus.end());
}

double ResponseTable::profitability(int k) const {
  if (k == sincere_index) return 0.0;
  return (eus.at(k) - eu_sincere) / utility_range;
}

ResponseTable response_table(MethodId method, const UtilityProfile& utilities,
                             const Profile& sincere, int voter) {
  const int m = utilities.num_candidates();
  if (m > kMaxOracleCandidates) {
    throw std::invalid_argument("oracle supports at most 6 candidates");
  }
  const auto row = utilities.row(voter);
  ResponseEvaluator evaluator(method, sincere, voter);
  ResponseTable table;
  const auto& rankings = all_rankings(m);
  table.eus.reserve(rankings.size());
  for (const Ranking& r : rankings) {
    table.eus.push_back(lottery_eu(evaluator.winners(r), row));
  }
  table.sincere_index = static_cast<int>(sincere.ballot(voter).index());
  table.eu_sincere = table.eus[table.sincere_index];
  const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
  table.utility_range = *hi - *lo;
  return table;
}

ResponseTable response_table(MethodId method, const UtilityProfile& utilities,
                             int voter) {
  return response_table(method, utilities, induced_profile(utilities), voter);
}

std::vector<double> response_eus(MethodId method,
                                 const UtilityProfile& utilities, int voter) {
  return response_table(method, utilities, voter).eus;
}

LabelMask optimizing_labels(const ResponseTable& table) {
  const double best = table.best_eu();
  LabelMask mask(table.num_rankings());
  for (int k = 0; k < table.num_rankings(); ++k) {
    if (table.eus[k] >= best - kEuTolerance) mask.set(k);
  }
  return mask;
}

LabelMask optimizing_labels(MethodId method, const UtilityProfile& utilities,
                            int voter) {
  return optimizing_labels(response_table(method, utilities, voter));
}

LabelMask satisficing_labels(const ResponseTable& table) {
  LabelMask mask(table.num_rankings());
  const double sincere = table.eu_sincere;
  for (int k = 0; k < table.num_rankings(); ++k) {
    if (table.eus[k] > sincere + kEuTolerance) mask.set(k);
  }
  if (mask.any()) return mask;
  for (int k = 0; k < table.num_rankings(); ++k) {
    if (table.eus[k] >= sincere - kEuTolerance) mask.set(k);
  }
  return mask;
}

LabelMask satisficing_labels(MethodId method, const UtilityProfile& utilities,
                             int voter) {
  return satisficing_labels(response_table(method, utilities, voter));
}

LabelMask make_labels(const ResponseTable& table, Labeling labeling) {
  return labeling == Labeling::kOptimizing ? optimizing_labels(table)
                                           : satisficing_labels(table);
}

ManipulationOutcome evaluate_submission(MethodId method,
                                        const UtilityProfile& utilities,
                                        int voter, const Ranking& submitted) {
  const Profile sincere = induced_profile(utilities);
  if (voter < 0 || voter >= sincere.num_voters()) {
    throw std::out_of_range("voter index out of range");
  }
  const auto row = utilities.row(voter);
  ResponseEvaluator evaluator(method, sincere, voter);
  const double eu_sincere =
      lottery_eu(evaluator.winners(sincere.ballot(voter)), row);
  const WinnerSet winners = evaluator.winners(submitted);
  const double eu_submitted = lottery_eu(winners, row);
  const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
  return ManipulationOutcome{submitted, winners, eu_submitted, eu_sincere,
                             (eu_submitted - eu_sincere) / (*hi - *lo)};
}

double profitability(MethodId method, const UtilityProfile& utilities,
                     int voter, const Ranking& submitted) {
  return evaluate_submission(method, utilities, voter, submitted).profitability;
}

LabeledInstance make_instance(MethodId method, const UtilityProfile& utilities,
                              int manipulator, InfoType info,
                              Labeling labeling, const FeatureOptions& options) {
  const Profile sincere = induced_profile(utilities);
  const ResponseTable table =
      response_table(method, utilities, sincere, manipulator);
  const auto features =
      build_features(utilities, sincere, manipulator, info, method, options);
  LabeledInstance instance;
  instance.features.assign(features.begin(), features.end());
  instance.labels = make_labels(table, labeling);
  instance.meta = InstanceMeta{method, info, utilities.num_voters(),
                               utilities.num_candidates()};
  return instance;
}

}  // namespace ltm
