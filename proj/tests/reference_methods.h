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

// Slow reference implementations of the voting methods, written directly
// from their definitions on explicit ballot lists. No margin matrices, subset
// masks or memo tables: recursion always rebuilds the restricted election.
// Split Cycle enumerates every simple cycle of the margin graph.

#ifndef LTM_TESTS_REFERENCE_METHODS_H_
#define LTM_TESTS_REFERENCE_METHODS_H_

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "ltm/elections.h"
#include "ltm/voting_methods.h"

namespace ltm_ref {

using Ballot = std::vector<int>;  // candidate labels, most preferred first

struct Election {
  std::vector<int> candidates;  // labels still running, ascending
  std::vector<Ballot> ballots;
};

using Winners = std::vector<int>;  // ascending labels

inline Election from_profile(const ltm::Profile& p) {
  Election e;
  for (int c = 0; c < p.num_candidates(); ++c) e.candidates.push_back(c);
  for (const ltm::Ranking& r : p.ballots()) e.ballots.push_back(r.order());
  return e;
}

inline Election remove(const Election& e, int c) {
  Election out;
  for (int x : e.candidates) {
    if (x != c) out.candidates.push_back(x);
  }
  for (const Ballot& b : e.ballots) {
    Ballot nb;
    for (int x : b) {
      if (x != c) nb.push_back(x);
    }
    out.ballots.push_back(nb);
  }
  return out;
}

inline int position(const Ballot& b, int c) {
  return static_cast<int>(std::find(b.begin(), b.end(), c) - b.begin());
}

inline int margin(const Election& e, int a, int b) {
  int total = 0;
  for (const Ballot& ballot : e.ballots) {
    total += position(ballot, a) < position(ballot, b) ? 1 : -1;
  }
  return a == b ? 0 : total;
}

inline std::map<int, int> first_place_counts(const Election& e) {
  std::map<int, int> counts;
  for (int c : e.candidates) counts[c] = 0;
  for (const Ballot& b : e.ballots) ++counts[b.front()];
  return counts;
}

inline Winners argmax(const std::map<int, int>& scores) {
  int best = scores.begin()->second;
  for (const auto& [c, s] : scores) best = std::max(best, s);
  Winners w;
  for (const auto& [c, s] : scores) {
    if (s == best) w.push_back(c);
  }
  return w;
}

inline Winners plurality(const Election& e) {
  return argmax(first_place_counts(e));
}

inline std::map<int, int> borda_scores(const Election& e) {
  const int k = static_cast<int>(e.candidates.size());
  std::map<int, int> scores;
  for (int c : e.candidates) scores[c] = 0;
  for (const Ballot& b : e.ballots) {
    for (int pos = 0; pos < k; ++pos) scores[b[pos]] += k - 1 - pos;
  }
  return scores;
}

inline Winners borda(const Election& e) { return argmax(borda_scores(e)); }

inline std::optional<int> condorcet(const Election& e) {
  for (int a : e.candidates) {
    bool beats_all = true;
    for (int b : e.candidates) {
      if (a != b && margin(e, a, b) <= 0) beats_all = false;
    }
    if (beats_all) return a;
  }
  return std::nullopt;
}

inline std::optional<int> majority_top(const Election& e) {
  const int n = static_cast<int>(e.ballots.size());
  for (const auto& [c, count] : first_place_counts(e)) {
    if (2 * count > n) return c;
  }
  return std::nullopt;
}

inline Winners irv_put(const Election& e) {
  if (e.candidates.size() == 1) return e.candidates;
  if (auto c = majority_top(e)) return {*c};
  const auto counts = first_place_counts(e);
  int fewest = counts.begin()->second;
  for (const auto& [c, s] : counts) fewest = std::min(fewest, s);
  std::set<int> out;
  for (const auto& [c, s] : counts) {
    if (s != fewest) continue;
    for (int w : irv_put(remove(e, c))) out.insert(w);
  }
  return {out.begin(), out.end()};
}

inline Winners irv_simultaneous(const Election& e) {
  if (e.candidates.size() == 1) return e.candidates;
  if (auto c = majority_top(e)) return {*c};
  const auto counts = first_place_counts(e);
  int fewest = counts.begin()->second;
  for (const auto& [c, s] : counts) fewest = std::min(fewest, s);
  Election next = e;
  int removed = 0;
  for (const auto& [c, s] : counts) {
    if (s == fewest) {
      next = remove(next, c);
      ++removed;
    }
  }
  if (removed == static_cast<int>(e.candidates.size())) return e.candidates;
  return irv_simultaneous(next);
}

inline Winners black(const Election& e) {
  if (auto c = condorcet(e)) return {*c};
  return borda(e);
}

inline Winners minimax(const Election& e) {
  std::map<int, int> neg_worst;
  for (int a : e.candidates) {
    int worst = -1 << 30;
    for (int b : e.candidates) {
      if (b != a) worst = std::max(worst, margin(e, b, a));
    }
    neg_worst[a] = -worst;
  }
  return argmax(neg_worst);
}

// Strict Nanson: rescore the restricted ballots each round.
inline Winners nanson(const Election& e) {
  Election cur = e;
  while (true) {
    const auto scores = borda_scores(cur);
    double mean = 0.0;
    for (const auto& [c, s] : scores) mean += s;
    mean /= static_cast<double>(scores.size());
    std::vector<int> below;
    for (const auto& [c, s] : scores) {
      if (s < mean) below.push_back(c);
    }
    if (below.empty()) return cur.candidates;
    for (int c : below) cur = remove(cur, c);
  }
}

// Deletes, for every simple cycle of the margin graph, the cycle's
// minimum-weight edges; winners have no surviving incoming edge.
inline Winners split_cycle(const Election& e) {
  const auto& cs = e.candidates;
  std::map<std::pair<int, int>, int> weight;
  for (int a : cs) {
    for (int b : cs) {
      if (a != b && margin(e, a, b) > 0) weight[{a, b}] = margin(e, a, b);
    }
  }
  std::set<std::pair<int, int>> deleted;
  std::vector<int> path;
  std::function<void(int, int)> dfs = [&](int start, int v) {
    for (int w : cs) {
      if (!weight.count({v, w})) continue;
      if (w == start) {
        path.push_back(start);
        int lo = 1 << 30;
        for (size_t i = 0; i + 1 < path.size(); ++i) {
          lo = std::min(lo, weight.at({path[i], path[i + 1]}));
        }
        for (size_t i = 0; i + 1 < path.size(); ++i) {
          if (weight.at({path[i], path[i + 1]}) == lo) {
            deleted.insert({path[i], path[i + 1]});
          }
        }
        path.pop_back();
      } else if (w > start &&
                 std::find(path.begin(), path.end(), w) == path.end()) {
        path.push_back(w);
        dfs(start, w);
        path.pop_back();
      }
    }
  };
  for (int s : cs) {
    path = {s};
    dfs(s, s);
  }
  Winners out;
  for (int b : cs) {
    bool defeated = false;
    for (int a : cs) {
      if (weight.count({a, b}) && !deleted.count({a, b})) defeated = true;
    }
    if (!defeated) out.push_back(b);
  }
  return out;
}

inline Winners stable_voting(const Election& e) {
  if (e.candidates.size() == 1) return e.candidates;
  const Winners sc = split_cycle(e);
  if (sc.size() == 1) return sc;
  std::map<int, std::vector<std::pair<int, int>>, std::greater<int>> by_margin;
  for (int a : sc) {
    for (int b : e.candidates) {
      if (a != b) by_margin[margin(e, a, b)].push_back({a, b});
    }
  }
  for (const auto& [value, pairs] : by_margin) {
    std::set<int> winners;
    for (const auto& [a, b] : pairs) {
      const Winners sub = stable_voting(remove(e, b));
      if (std::find(sub.begin(), sub.end(), a) != sub.end()) winners.insert(a);
    }
    if (!winners.empty()) return {winners.begin(), winners.end()};
  }
  throw std::logic_error("stable voting reference found no winner");
}

inline Winners run(ltm::MethodId id, const Election& e) {
  switch (id) {
    case ltm::MethodId::kPlurality: return plurality(e);
    case ltm::MethodId::kIrvPut: return irv_put(e);
    case ltm::MethodId::kIrvSimultaneous: return irv_simultaneous(e);
    case ltm::MethodId::kBorda: return borda(e);
    case ltm::MethodId::kBlack: return black(e);
    case ltm::MethodId::kMinimax: return minimax(e);
    case ltm::MethodId::kNanson: return nanson(e);
    case ltm::MethodId::kSplitCycle: return split_cycle(e);
    case ltm::MethodId::kStableVoting: return stable_voting(e);
  }
  throw std::invalid_argument("unknown method");
}

inline Winners run(ltm::MethodId id, const ltm::Profile& p) {
  return run(id, from_profile(p));
}

inline Winners members(ltm::WinnerSet w) { return w.members(); }

}  // namespace ltm_ref

#endif  // LTM_TESTS_REFERENCE_METHODS_H_
