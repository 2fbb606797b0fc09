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

#include "ltm/voting_methods.h"

#include <algorithm>
#include <charconv>
#include <climits>
#include <functional>
#include <string>

namespace ltm {
namespace {

constexpr std::array<std::string_view, 9> kMethodNames = {
    "plurality", "irv_put", "irv_simultaneous", "borda",       "black",
    "minimax",   "nanson",  "split_cycle",      "stable_voting"};

// First-place counts among the candidates still in play.
std::array<int, kMaxCandidates> first_place_counts(
    std::span<const Ranking> ballots, CandidateSet candidates) {
  std::array<int, kMaxCandidates> counts{};
  for (const Ranking& r : ballots) ++counts[r.top_among(candidates)];
  return counts;
}

// Borda score of a within the sub-election over `candidates`, derived from
// margins: each rival b contributes (n + margin(a, b)) / 2 voters ranking a
// above b.
int borda_score_among(const MarginMatrix& margins, CandidateSet candidates,
                      int a) {
  const int n = margins.num_voters();
  int score = 0;
  for_each_member(candidates, [&](int b) {
    if (b != a) score += (n + margins(a, b)) / 2;
  });
  return score;
}

CandidateSet argmax_among(CandidateSet candidates,
                          const std::function<int(int)>& value) {
  int best = INT_MIN;
  CandidateSet winners;
  for_each_member(candidates, [&](int c) {
    const int v = value(c);
    if (v > best) {
      best = v;
      winners = CandidateSet::single(c);
    } else if (v == best) {
      winners = winners.with(c);
    }
  });
  return winners;
}

// Memo keyed by candidate subset. Entry 0 means "not computed"; every stored
// winner set is nonempty.
class SubsetMemo {
 public:
  explicit SubsetMemo(int m) : table_(size_t{1} << m, 0) {}
  uint32_t& operator[](CandidateSet s) { return table_[s.mask()]; }

 private:
  std::vector<uint32_t> table_;
};

CandidateSet irv_put_rec(std::span<const Ranking> ballots,
                         CandidateSet candidates, SubsetMemo& memo) {
  uint32_t& slot = memo[candidates];
  if (slot != 0) return CandidateSet(slot);
  CandidateSet winners;
  const auto counts = first_place_counts(ballots, candidates);
  const int n = static_cast<int>(ballots.size());
  int fewest = INT_MAX;
  for_each_member(candidates, [&](int c) {
    if (2 * counts[c] > n) winners = CandidateSet::single(c);
    fewest = std::min(fewest, counts[c]);
  });
  if (winners.empty()) {
    if (candidates.size() == 1) {
      winners = candidates;
    } else {
      for_each_member(candidates, [&](int b) {
        if (counts[b] == fewest) {
          winners = winners | irv_put_rec(ballots, candidates.without(b), memo);
        }
      });
    }
  }
  slot = winners.mask();
  return winners;
}

CandidateSet stable_voting_rec(const MarginMatrix& margins,
                               CandidateSet candidates, SubsetMemo& memo) {
  uint32_t& cached = memo[candidates];
  if (cached != 0) return CandidateSet(cached);
  if (candidates.size() == 1) {
    cached = candidates.mask();
    return candidates;
  }
  const CandidateSet sc = detail::split_cycle_among(margins, candidates);
  if (sc.size() == 1) {
    cached = sc.mask();
    return sc;
  }

  struct Pair {
    int margin;
    int a;
    int b;
  };
  std::vector<Pair> pairs;
  for_each_member(sc, [&](int a) {
    for_each_member(candidates, [&](int b) {
      if (b != a) pairs.push_back({margins(a, b), a, b});
    });
  });
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& x, const Pair& y) { return x.margin > y.margin; });

  CandidateSet winners;
  for (size_t i = 0; i < pairs.size();) {
    const int level = pairs[i].margin;
    for (; i < pairs.size() && pairs[i].margin == level; ++i) {
      const Pair& p = pairs[i];
      if (winners.contains(p.a)) continue;
      const CandidateSet sub =
          stable_voting_rec(margins, candidates.without(p.b), memo);
      if (sub.contains(p.a)) winners = winners.with(p.a);
    }
    if (!winners.empty()) break;
  }
  if (winners.empty()) {
    throw std::logic_error("stable voting found no winner");
  }
  cached = winners.mask();
  return winners;
}

}  // namespace

std::string_view method_name(MethodId id) {
  return kMethodNames.at(static_cast<size_t>(id));
}

std::optional<MethodId> method_from_code(int code) {
  if (code < 0 || code >= static_cast<int>(kAllMethods.size())) {
    return std::nullopt;
  }
  return static_cast<MethodId>(code);
}

std::optional<MethodId> parse_method(std::string_view text) {
  for (size_t i = 0; i < kMethodNames.size(); ++i) {
    if (text == kMethodNames[i]) return static_cast<MethodId>(i);
  }
  int code = -1;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), code);
  if (ec == std::errc() && ptr == text.data() + text.size()) {
    return method_from_code(code);
  }
  return std::nullopt;
}

bool uses_margins_only(MethodId id) {
  switch (id) {
    case MethodId::kPlurality:
    case MethodId::kIrvPut:
    case MethodId::kIrvSimultaneous:
      return false;
    default:
      return true;
  }
}

namespace detail {

CandidateSet plurality_among(std::span<const Ranking> ballots,
                             CandidateSet candidates) {
  const auto counts = first_place_counts(ballots, candidates);
  return argmax_among(candidates, [&](int c) { return counts[c]; });
}

CandidateSet irv_put_among(std::span<const Ranking> ballots,
                           CandidateSet candidates) {
  SubsetMemo memo(ballots.front().size());
  return irv_put_rec(ballots, candidates, memo);
}

CandidateSet irv_simultaneous_among(std::span<const Ranking> ballots,
                                    CandidateSet candidates) {
  const int n = static_cast<int>(ballots.size());
  while (true) {
    const auto counts = first_place_counts(ballots, candidates);
    int fewest = INT_MAX;
    CandidateSet majority;
    for_each_member(candidates, [&](int c) {
      if (2 * counts[c] > n) majority = CandidateSet::single(c);
      fewest = std::min(fewest, counts[c]);
    });
    if (!majority.empty()) return majority;
    CandidateSet last;
    for_each_member(candidates, [&](int c) {
      if (counts[c] == fewest) last = last.with(c);
    });
    if (last == candidates) return candidates;
    candidates = CandidateSet(candidates.mask() & ~last.mask());
  }
}

CandidateSet split_cycle_among(const MarginMatrix& margins,
                               CandidateSet candidates) {
  const int m = margins.num_candidates();
  // strength[x][y]: widest-path bottleneck from x to y over positive-margin
  // edges inside `candidates` (0 = unreachable). An edge a->b of weight w is
  // deleted iff some path b ~> a uses only edges of weight >= w.
  std::array<int, kMaxCandidates * kMaxCandidates> strength{};
  for_each_member(candidates, [&](int a) {
    for_each_member(candidates, [&](int b) {
      strength[a * m + b] = std::max(0, margins(a, b));
    });
  });
  for_each_member(candidates, [&](int k) {
    for_each_member(candidates, [&](int i) {
      const int ik = strength[i * m + k];
      if (ik == 0) return;
      for_each_member(candidates, [&](int j) {
        const int via = std::min(ik, strength[k * m + j]);
        if (via > strength[i * m + j]) strength[i * m + j] = via;
      });
    });
  });
  CandidateSet winners;
  for_each_member(candidates, [&](int b) {
    bool defeated = false;
    for_each_member(candidates, [&](int a) {
      const int w = margins(a, b);
      if (w > 0 && w > strength[b * m + a]) defeated = true;
    });
    if (!defeated) winners = winners.with(b);
  });
  return winners;
}

CandidateSet nanson_among(const MarginMatrix& margins,
                          CandidateSet candidates) {
  while (true) {
    std::array<int, kMaxCandidates> scores{};
    int total = 0;
    for_each_member(candidates, [&](int a) {
      scores[a] = borda_score_among(margins, candidates, a);
      total += scores[a];
    });
    const int k = candidates.size();
    CandidateSet below;
    for_each_member(candidates, [&](int a) {
      if (scores[a] * k < total) below = below.with(a);
    });
    if (below.empty()) return candidates;
    candidates = CandidateSet(candidates.mask() & ~below.mask());
  }
}

}  // namespace detail

WinnerSet plurality(const Profile& profile) {
  return WinnerSet(detail::plurality_among(
      profile.ballots(), CandidateSet::all(profile.num_candidates())));
}

std::vector<int> borda_scores(const Profile& profile) {
  const int m = profile.num_candidates();
  std::vector<int> scores(m, 0);
  for (const Ranking& r : profile.ballots()) {
    for (int pos = 0; pos < m; ++pos) scores[r.at(pos)] += m - 1 - pos;
  }
  return scores;
}

WinnerSet borda(const Profile& profile) {
  const auto scores = borda_scores(profile);
  return WinnerSet(argmax_among(CandidateSet::all(profile.num_candidates()),
                                [&](int c) { return scores[c]; }));
}

WinnerSet borda(const MarginMatrix& margins) {
  const CandidateSet all = CandidateSet::all(margins.num_candidates());
  return WinnerSet(argmax_among(
      all, [&](int c) { return borda_score_among(margins, all, c); }));
}

WinnerSet irv_put(const Profile& profile) {
  return WinnerSet(detail::irv_put_among(
      profile.ballots(), CandidateSet::all(profile.num_candidates())));
}

WinnerSet irv_simultaneous(const Profile& profile) {
  return WinnerSet(detail::irv_simultaneous_among(
      profile.ballots(), CandidateSet::all(profile.num_candidates())));
}

WinnerSet black(const MarginMatrix& margins) {
  if (const auto cw = condorcet_winner(margins)) {
    return WinnerSet(CandidateSet::single(*cw));
  }
  return borda(margins);
}

WinnerSet black(const Profile& profile) { return black(MarginMatrix(profile)); }

WinnerSet minimax(const MarginMatrix& margins) {
  const int m = margins.num_candidates();
  const CandidateSet all = CandidateSet::all(m);
  // Maximize the negated worst incoming margin.
  return WinnerSet(argmax_among(all, [&](int a) {
    int worst = INT_MIN;
    for (int b = 0; b < m; ++b) {
      if (b != a) worst = std::max(worst, margins(b, a));
    }
    return worst == INT_MIN ? 0 : -worst;
  }));
}

WinnerSet minimax(const Profile& profile) {
  return minimax(MarginMatrix(profile));
}

WinnerSet nanson(const MarginMatrix& margins) {
  return WinnerSet(detail::nanson_among(
      margins, CandidateSet::all(margins.num_candidates())));
}

WinnerSet nanson(const Profile& profile) { return nanson(MarginMatrix(profile)); }

WinnerSet split_cycle(const MarginMatrix& margins) {
  return WinnerSet(detail::split_cycle_among(
      margins, CandidateSet::all(margins.num_candidates())));
}

WinnerSet split_cycle(const Profile& profile) {
  return split_cycle(MarginMatrix(profile));
}

WinnerSet stable_voting(const MarginMatrix& margins) {
  const int m = margins.num_candidates();
  SubsetMemo memo(m);
  return WinnerSet(stable_voting_rec(margins, CandidateSet::all(m), memo));
}

WinnerSet stable_voting(const Profile& profile) {
  return stable_voting(MarginMatrix(profile));
}

WinnerSet run_method(MethodId id, const MarginMatrix& margins) {
  switch (id) {
    case MethodId::kBorda:
      return borda(margins);
    case MethodId::kBlack:
      return black(margins);
    case MethodId::kMinimax:
      return minimax(margins);
    case MethodId::kNanson:
      return nanson(margins);
    case MethodId::kSplitCycle:
      return split_cycle(margins);
    case MethodId::kStableVoting:
      return stable_voting(margins);
    default:
      throw std::invalid_argument(std::string(method_name(id)) +
                                  " needs full ballots, not margins");
  }
}

WinnerSet run_method(MethodId id, const Profile& profile) {
  switch (id) {
    case MethodId::kPlurality:
      return plurality(profile);
    case MethodId::kIrvPut:
      return irv_put(profile);
    case MethodId::kIrvSimultaneous:
      return irv_simultaneous(profile);
    case MethodId::kBorda:
      return borda(profile);
    default:
      return run_method(id, MarginMatrix(profile));
  }
}

double lottery_eu(WinnerSet winners, std::span<const double> utilities) {
  double total = 0.0;
  for_each_member(winners.set(), [&](int c) {
    if (static_cast<size_t>(c) >= utilities.size()) {
      throw std::out_of_range("winner outside the utility row");
    }
    total += utilities[c];
  });
  return total / winners.size();
}

}  // namespace ltm
