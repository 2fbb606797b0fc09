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

#include "ltm/information.h"

#include <algorithm>
#include <charconv>

namespace ltm {
namespace {

constexpr std::array<std::string_view, 6> kInfoNames = {
    "plurality_scores", "plurality_ranking",           "margin_matrix",
    "majority_matrix",  "qualitative_margin_matrix",   "sincere_winners"};

int sign(int x) { return (x > 0) - (x < 0); }

}  // namespace

std::string_view info_name(InfoType type) {
  return kInfoNames.at(static_cast<size_t>(type));
}

std::optional<InfoType> parse_info(std::string_view text) {
  for (size_t i = 0; i < kInfoNames.size(); ++i) {
    if (text == kInfoNames[i]) return static_cast<InfoType>(i);
  }
  int code = -1;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), code);
  if (ec == std::errc() && ptr == text.data() + text.size() && code >= 0 &&
      code < static_cast<int>(kInfoNames.size())) {
    return static_cast<InfoType>(code);
  }
  return std::nullopt;
}

int info_length(InfoType type, int m) {
  switch (type) {
    case InfoType::kMarginMatrix:
    case InfoType::kMajorityMatrix:
    case InfoType::kQualitativeMarginMatrix:
      return m * m;
    default:
      return m;
  }
}

std::vector<int> plurality_scores(const Profile& profile) {
  std::vector<int> scores(profile.num_candidates(), 0);
  for (const Ranking& r : profile.ballots()) ++scores[r.top()];
  return scores;
}

std::vector<int> plurality_ranking(const Profile& profile) {
  const auto scores = plurality_scores(profile);
  std::vector<int> ranking(scores.size(), 0);
  for (size_t c = 0; c < scores.size(); ++c) {
    ranking[c] = static_cast<int>(std::count_if(
        scores.begin(), scores.end(), [&](int s) { return s > scores[c]; }));
  }
  return ranking;
}

std::vector<int> majority_matrix(const MarginMatrix& margins) {
  std::vector<int> out(margins.entries().begin(), margins.entries().end());
  for (int& x : out) x = sign(x);
  return out;
}

std::vector<int> majority_matrix(const Profile& profile) {
  return majority_matrix(MarginMatrix(profile));
}

std::vector<int> qualitative_margin_matrix(const MarginMatrix& margins) {
  std::vector<int> levels;
  for (int x : margins.entries()) {
    if (x > 0) levels.push_back(x);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  auto rank_of = [&](int x) {
    return static_cast<int>(
               std::lower_bound(levels.begin(), levels.end(), x) -
               levels.begin()) +
           1;
  };
  std::vector<int> out(margins.entries().begin(), margins.entries().end());
  for (int& x : out) {
    if (x > 0) {
      x = rank_of(x);
    } else if (x < 0) {
      x = -rank_of(-x);
    }
  }
  return out;
}

std::vector<int> qualitative_margin_matrix(const Profile& profile) {
  return qualitative_margin_matrix(MarginMatrix(profile));
}

std::vector<int> sincere_winners(const Profile& profile, MethodId method) {
  const WinnerSet winners = run_method(method, profile);
  std::vector<int> bits(profile.num_candidates(), 0);
  for (int c : winners.members()) bits[c] = 1;
  return bits;
}

std::vector<int> info_block(const Profile& profile, InfoType type,
                            MethodId method) {
  switch (type) {
    case InfoType::kPluralityScores:
      return plurality_scores(profile);
    case InfoType::kPluralityRanking:
      return plurality_ranking(profile);
    case InfoType::kMarginMatrix: {
      const MarginMatrix margins(profile);
      return std::vector<int>(margins.entries().begin(),
                              margins.entries().end());
    }
    case InfoType::kMajorityMatrix:
      return majority_matrix(profile);
    case InfoType::kQualitativeMarginMatrix:
      return qualitative_margin_matrix(profile);
    case InfoType::kSincereWinners:
      return sincere_winners(profile, method);
  }
  throw std::invalid_argument("unknown info type");
}

std::vector<double> build_features(const UtilityProfile& utilities,
                                   const Profile& sincere, int manipulator,
                                   InfoType type, MethodId method,
                                   const FeatureOptions& options) {
  if (manipulator < 0 || manipulator >= utilities.num_voters()) {
    throw std::out_of_range("manipulator index out of range");
  }
  const auto own = utilities.row(manipulator);
  std::vector<double> features(own.begin(), own.end());
  const auto block = info_block(sincere, type, method);
  const bool scale = options.normalize && (type == InfoType::kPluralityScores ||
                                           type == InfoType::kMarginMatrix);
  const double n = sincere.num_voters();
  for (int x : block) features.push_back(scale ? x / n : x);
  return features;
}

std::vector<double> build_features(const UtilityProfile& utilities,
                                   int manipulator, InfoType type,
                                   MethodId method,
                                   const FeatureOptions& options) {
  return build_features(utilities, induced_profile(utilities), manipulator,
                        type, method, options);
}

}  // namespace ltm
