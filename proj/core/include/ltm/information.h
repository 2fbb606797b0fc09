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

// Limited-information summaries of a sincere profile ("polls") and the
// feature vectors fed to the manipulation networks.
//
// Matrices are returned flattened row-major: entry (a, b) at a * m + b.

#ifndef LTM_INFORMATION_H_
#define LTM_INFORMATION_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ltm/elections.h"
#include "ltm/voting_methods.h"

namespace ltm {

enum class InfoType : uint8_t {
  kPluralityScores = 0,
  kPluralityRanking = 1,
  kMarginMatrix = 2,
  kMajorityMatrix = 3,
  kQualitativeMarginMatrix = 4,
  kSincereWinners = 5,
};

inline constexpr std::array<InfoType, 6> kAllInfoTypes = {
    InfoType::kPluralityScores,       InfoType::kPluralityRanking,
    InfoType::kMarginMatrix,          InfoType::kMajorityMatrix,
    InfoType::kQualitativeMarginMatrix, InfoType::kSincereWinners};

std::string_view info_name(InfoType type);
std::optional<InfoType> parse_info(std::string_view text);
// m for the vector-valued types, m * m for the matrices.
int info_length(InfoType type, int m);

std::vector<int> plurality_scores(const Profile& profile);
// Entry c counts the candidates with a strictly higher plurality score
// (0 = top; tied candidates share a value).
std::vector<int> plurality_ranking(const Profile& profile);
std::vector<int> majority_matrix(const Profile& profile);
std::vector<int> majority_matrix(const MarginMatrix& margins);
// Positive margins become their 1-based rank among the distinct positive
// margin values (ascending); the negative half mirrors it.
std::vector<int> qualitative_margin_matrix(const Profile& profile);
std::vector<int> qualitative_margin_matrix(const MarginMatrix& margins);
std::vector<int> sincere_winners(const Profile& profile, MethodId method);

// The raw info block for `type`. `method` is only read for kSincereWinners.
std::vector<int> info_block(const Profile& profile, InfoType type,
                            MethodId method);

struct FeatureOptions {
  // Divide plurality scores and margins by n. Off by default: features are
  // fed unscaled.
  bool normalize = false;
};

// Manipulator utilities followed by the flattened info block computed on the
// full sincere profile (manipulator included).
std::vector<double> build_features(const UtilityProfile& utilities,
                                   int manipulator, InfoType type,
                                   MethodId method,
                                   const FeatureOptions& options = {});
// Same, reusing an already induced sincere profile.
std::vector<double> build_features(const UtilityProfile& utilities,
                                   const Profile& sincere, int manipulator,
                                   InfoType type, MethodId method,
                                   const FeatureOptions& options = {});

}  // namespace ltm

#endif  // LTM_INFORMATION_H_
