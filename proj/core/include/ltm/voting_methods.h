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

// Preferential voting methods. Each maps a profile to a nonempty winner set;
// ties are resolved downstream by an even-chance lottery.
//
// Methods that only look at pairwise margins (Borda, Black, Minimax, Nanson,
// Split Cycle, Stable Voting) also accept a MarginMatrix directly. The oracle
// uses that to evaluate m! candidate ballots without rebuilding profiles.

#ifndef LTM_VOTING_METHODS_H_
#define LTM_VOTING_METHODS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ltm/elections.h"

namespace ltm {

// Integer codes are part of the dataset and CLI contract.
enum class MethodId : uint8_t {
  kPlurality = 0,
  kIrvPut = 1,
  kIrvSimultaneous = 2,
  kBorda = 3,
  kBlack = 4,
  kMinimax = 5,
  kNanson = 6,
  kSplitCycle = 7,
  kStableVoting = 8,
};

inline constexpr std::array<MethodId, 9> kAllMethods = {
    MethodId::kPlurality, MethodId::kIrvPut,      MethodId::kIrvSimultaneous,
    MethodId::kBorda,     MethodId::kBlack,       MethodId::kMinimax,
    MethodId::kNanson,    MethodId::kSplitCycle,  MethodId::kStableVoting};

std::string_view method_name(MethodId id);
// Accepts the snake_case name ("split_cycle") or the integer code ("7").
std::optional<MethodId> parse_method(std::string_view text);
std::optional<MethodId> method_from_code(int code);
// True for methods whose outcome is a function of the margin matrix.
bool uses_margins_only(MethodId id);

WinnerSet plurality(const Profile& profile);

std::vector<int> borda_scores(const Profile& profile);
WinnerSet borda(const Profile& profile);
WinnerSet borda(const MarginMatrix& margins);

// Instant runoff with parallel-universe tiebreaking.
WinnerSet irv_put(const Profile& profile);
// Instant runoff eliminating every last-place candidate at once.
WinnerSet irv_simultaneous(const Profile& profile);

WinnerSet black(const Profile& profile);
WinnerSet black(const MarginMatrix& margins);

WinnerSet minimax(const Profile& profile);
WinnerSet minimax(const MarginMatrix& margins);

// Strict Nanson: drop every candidate strictly below the mean Borda score.
WinnerSet nanson(const Profile& profile);
WinnerSet nanson(const MarginMatrix& margins);

WinnerSet split_cycle(const Profile& profile);
WinnerSet split_cycle(const MarginMatrix& margins);

WinnerSet stable_voting(const Profile& profile);
WinnerSet stable_voting(const MarginMatrix& margins);

WinnerSet run_method(MethodId id, const Profile& profile);
// Throws std::invalid_argument for Plurality and the IRV variants.
WinnerSet run_method(MethodId id, const MarginMatrix& margins);

// Variants restricted to a candidate subset; winners keep original indices.
// These are the building blocks of the recursive methods and are exposed for
// the oracle's incremental evaluation.
namespace detail {
CandidateSet irv_put_among(std::span<const Ranking> ballots,
                           CandidateSet candidates);
CandidateSet irv_simultaneous_among(std::span<const Ranking> ballots,
                                    CandidateSet candidates);
CandidateSet plurality_among(std::span<const Ranking> ballots,
                             CandidateSet candidates);
CandidateSet split_cycle_among(const MarginMatrix& margins,
                               CandidateSet candidates);
CandidateSet nanson_among(const MarginMatrix& margins, CandidateSet candidates);
}  // namespace detail

// Expected utility of an even-chance lottery over the winners.
double lottery_eu(WinnerSet winners, std::span<const double> utilities);

}  // namespace ltm

#endif  // LTM_VOTING_METHODS_H_
