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

#include "ltm/elections.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>

namespace ltm {
namespace {

void check_candidate_count(int m) {
  if (m < 1 || m > kMaxCandidates) {
    throw std::invalid_argument("candidate count " + std::to_string(m) +
                                " outside [1, " +
                                std::to_string(kMaxCandidates) + "]");
  }
}

void check_candidate(int c, int m) {
  if (c < 0 || c >= m) {
    throw std::out_of_range("candidate index " + std::to_string(c) +
                            " outside [0, " + std::to_string(m) + ")");
  }
}

char candidate_letter(int c) { return static_cast<char>('a' + c); }

}  // namespace

int CandidateSet::size() const { return std::popcount(mask_); }

int CandidateSet::lowest() const { return std::countr_zero(mask_); }

std::vector<int> CandidateSet::members() const {
  std::vector<int> out;
  out.reserve(size());
  for_each_member(*this, [&](int c) { out.push_back(c); });
  return out;
}

// ---------------------------------------------------------------- Ranking

Ranking Ranking::from_order(std::span<const int> order) {
  const int m = static_cast<int>(order.size());
  check_candidate_count(m);
  Ranking r;
  r.m_ = static_cast<uint8_t>(m);
  uint32_t seen = 0;
  for (int pos = 0; pos < m; ++pos) {
    const int c = order[pos];
    if (c < 0 || c >= m || ((seen >> c) & 1u)) {
      throw std::invalid_argument("ranking is not a permutation of 0..m-1");
    }
    seen |= uint32_t{1} << c;
    r.order_[pos] = static_cast<uint8_t>(c);
    r.pos_[c] = static_cast<uint8_t>(pos);
  }
  return r;
}

Ranking Ranking::from_index(int m, uint64_t index) {
  check_candidate_count(m);
  if (index >= factorial(m)) {
    throw std::out_of_range("ranking index " + std::to_string(index) +
                            " >= " + std::to_string(m) + "!");
  }
  // Decode the Lehmer code digit by digit.
  std::vector<int> remaining(m);
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<int> order;
  order.reserve(m);
  for (int pos = 0; pos < m; ++pos) {
    const uint64_t block = factorial(m - 1 - pos);
    const auto digit = static_cast<size_t>(index / block);
    index %= block;
    order.push_back(remaining[digit]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return from_order(order);
}

Ranking Ranking::identity(int m) {
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  return from_order(order);
}

Ranking Ranking::parse(std::string_view text) {
  std::vector<int> order;
  for (char ch : text) {
    if (ch == '>' || std::isspace(static_cast<unsigned char>(ch))) continue;
    if (ch < 'a' || ch > 'z') {
      throw std::invalid_argument("bad ranking text: " + std::string(text));
    }
    order.push_back(ch - 'a');
  }
  return from_order(order);
}

uint64_t Ranking::index() const {
  uint64_t index = 0;
  for (int pos = 0; pos < m_; ++pos) {
    int smaller_later = 0;
    for (int later = pos + 1; later < m_; ++later) {
      if (order_[later] < order_[pos]) ++smaller_later;
    }
    index += static_cast<uint64_t>(smaller_later) * factorial(m_ - 1 - pos);
  }
  return index;
}

std::vector<int> Ranking::order() const {
  return std::vector<int>(order_.begin(), order_.begin() + m_);
}

int Ranking::top_among(CandidateSet s) const {
  for (int pos = 0; pos < m_; ++pos) {
    if (s.contains(order_[pos])) return order_[pos];
  }
  throw std::invalid_argument("top_among: empty candidate set");
}

Ranking Ranking::without(int c) const {
  check_candidate(c, m_);
  if (m_ == 1) throw std::domain_error("cannot remove the only candidate");
  std::vector<int> order;
  order.reserve(m_ - 1);
  for (int pos = 0; pos < m_; ++pos) {
    const int x = order_[pos];
    if (x == c) continue;
    order.push_back(x > c ? x - 1 : x);
  }
  return from_order(order);
}

std::string Ranking::to_string() const {
  std::string out;
  for (int pos = 0; pos < m_; ++pos) {
    if (pos > 0) out += '>';
    out += candidate_letter(order_[pos]);
  }
  return out;
}

uint64_t factorial(int m) {
  uint64_t f = 1;
  for (int k = 2; k <= m; ++k) f *= static_cast<uint64_t>(k);
  return f;
}

const std::vector<Ranking>& all_rankings(int m) {
  static const auto table = [] {
    std::array<std::vector<Ranking>, 9> t;
    for (int size = 1; size <= 8; ++size) {
      std::vector<int> order(size);
      std::iota(order.begin(), order.end(), 0);
      do {
        t[size].push_back(Ranking::from_order(order));
      } while (std::next_permutation(order.begin(), order.end()));
    }
    return t;
  }();
  if (m < 1 || m > 8) {
    throw std::invalid_argument("all_rankings supports 1 <= m <= 8");
  }
  return table[m];
}

// ---------------------------------------------------------------- Profile

Profile::Profile(std::vector<Ranking> ballots) : ballots_(std::move(ballots)) {
  if (ballots_.empty()) {
    throw std::invalid_argument("profile needs at least one voter");
  }
  m_ = ballots_.front().size();
  check_candidate_count(m_);
  for (const Ranking& r : ballots_) {
    if (r.size() != m_) {
      throw std::invalid_argument("ballots rank different candidate counts");
    }
  }
}

Profile Profile::parse(std::initializer_list<std::string_view> ballots) {
  std::vector<Ranking> rankings;
  rankings.reserve(ballots.size());
  for (std::string_view b : ballots) rankings.push_back(Ranking::parse(b));
  return Profile(std::move(rankings));
}

// --------------------------------------------------------- UtilityProfile

UtilityProfile::UtilityProfile(int n, int m, std::vector<double> values)
    : values_(std::move(values)), n_(n), m_(m) {
  if (n < 1) throw std::invalid_argument("utility profile needs n >= 1");
  check_candidate_count(m);
  if (values_.size() != static_cast<size_t>(n) * static_cast<size_t>(m)) {
    throw std::invalid_argument("utility values do not match n x m");
  }
  for (int i = 0; i < n_; ++i) {
    if (!has_distinct_values(row(i))) {
      throw InvariantError("voter " + std::to_string(i) +
                           " has tied utilities");
    }
  }
}

namespace {

std::vector<double> flatten(
    std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<double> out;
  for (const auto& row : rows) out.insert(out.end(), row.begin(), row.end());
  return out;
}

}  // namespace

UtilityProfile::UtilityProfile(
    std::initializer_list<std::initializer_list<double>> rows)
    : UtilityProfile(static_cast<int>(rows.size()),
                     rows.size() == 0 ? 0
                                      : static_cast<int>(rows.begin()->size()),
                     flatten(rows)) {}

bool UtilityProfile::has_distinct_values(std::span<const double> row) {
  for (size_t i = 0; i < row.size(); ++i) {
    for (size_t j = i + 1; j < row.size(); ++j) {
      if (row[i] == row[j]) return false;
    }
  }
  return true;
}

// ----------------------------------------------------------- MarginMatrix

MarginMatrix::MarginMatrix(int m)
    : entries_(static_cast<size_t>(m) * m, 0), n_(0), m_(m) {
  check_candidate_count(m);
}

MarginMatrix::MarginMatrix(const Profile& profile)
    : MarginMatrix(profile.num_candidates()) {
  for (const Ranking& r : profile.ballots()) add_ballot(r);
}

void MarginMatrix::add_ballot(const Ranking& ballot, int sign) {
  for (int hi = 0; hi < m_; ++hi) {
    const int a = ballot.at(hi);
    for (int lo = hi + 1; lo < m_; ++lo) {
      const int b = ballot.at(lo);
      entries_[a * m_ + b] += sign;
      entries_[b * m_ + a] -= sign;
    }
  }
  n_ += sign;
}

// -------------------------------------------------------------- WinnerSet

WinnerSet::WinnerSet(CandidateSet members) : members_(members) {
  if (members_.empty()) throw InvariantError("winner set must be nonempty");
}

WinnerSet WinnerSet::of(std::initializer_list<int> members) {
  CandidateSet s;
  for (int c : members) s = s.with(c);
  return WinnerSet(s);
}

std::string WinnerSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for_each_member(members_, [&](int c) {
    if (!first) out += ',';
    out += candidate_letter(c);
    first = false;
  });
  return out + "}";
}

WinnerSet Restriction::translate(WinnerSet sub_winners) const {
  CandidateSet s;
  for_each_member(sub_winners.set(),
                  [&](int c) { s = s.with(to_original.at(c)); });
  return WinnerSet(s);
}

// ------------------------------------------------------------- operations

int margin(const Profile& profile, int a, int b) {
  const int m = profile.num_candidates();
  check_candidate(a, m);
  check_candidate(b, m);
  int result = 0;
  if (a == b) return 0;
  for (const Ranking& r : profile.ballots()) result += r.prefers(a, b) ? 1 : -1;
  return result;
}

MarginMatrix margin_matrix(const Profile& profile) {
  return MarginMatrix(profile);
}

std::optional<int> condorcet_winner(const MarginMatrix& margins) {
  const int m = margins.num_candidates();
  for (int c = 0; c < m; ++c) {
    bool beats_all = true;
    for (int x = 0; x < m && beats_all; ++x) {
      if (x != c && margins(c, x) <= 0) beats_all = false;
    }
    if (beats_all) return c;
  }
  return std::nullopt;
}

std::optional<int> condorcet_winner(const Profile& profile) {
  return condorcet_winner(MarginMatrix(profile));
}

Ranking induced_ranking(std::span<const double> utilities) {
  if (!UtilityProfile::has_distinct_values(utilities)) {
    throw InvariantError("induced_ranking: tied utilities");
  }
  std::vector<int> order(utilities.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return utilities[x] > utilities[y]; });
  return Ranking::from_order(order);
}

Profile induced_profile(const UtilityProfile& utilities) {
  std::vector<Ranking> ballots;
  ballots.reserve(utilities.num_voters());
  for (int i = 0; i < utilities.num_voters(); ++i) {
    ballots.push_back(induced_ranking(utilities.row(i)));
  }
  return Profile(std::move(ballots));
}

Restriction remove_candidate(const Profile& profile, int candidate) {
  const int m = profile.num_candidates();
  check_candidate(candidate, m);
  if (m == 1) throw std::domain_error("cannot remove the only candidate");
  std::vector<Ranking> ballots;
  ballots.reserve(profile.num_voters());
  for (const Ranking& r : profile.ballots()) ballots.push_back(r.without(candidate));
  std::vector<int> to_original;
  to_original.reserve(m - 1);
  for (int c = 0; c < m; ++c) {
    if (c != candidate) to_original.push_back(c);
  }
  return Restriction{Profile(std::move(ballots)), std::move(to_original)};
}

Profile replace_ballot(const Profile& profile, int voter,
                       const Ranking& ballot) {
  if (voter < 0 || voter >= profile.num_voters()) {
    throw std::out_of_range("voter index " + std::to_string(voter) +
                            " out of range");
  }
  if (ballot.size() != profile.num_candidates()) {
    throw std::invalid_argument("replacement ballot has the wrong size");
  }
  std::vector<Ranking> ballots(profile.ballots().begin(),
                               profile.ballots().end());
  ballots[voter] = ballot;
  return Profile(std::move(ballots));
}

namespace fixtures {

Profile cycle() { return Profile::parse({"a>b>c", "b>c>a", "c>a>b"}); }

Profile five() {
  return Profile::parse({"a>b>c", "a>b>c", "c>a>b", "b>c>a", "b>c>a"});
}

Profile unanimous() { return Profile::parse({"a>b>c", "a>b>c", "a>b>c"}); }

Profile tie4() {
  return Profile::parse({"a>b>c", "a>b>c", "b>a>c", "b>a>c"});
}

UtilityProfile tie4_utilities() {
  return UtilityProfile{{1.0, 0.5, 0.0},
                        {0.9, 0.6, 0.1},
                        {0.6, 0.8, 0.2},
                        {0.5, 0.7, 0.3}};
}

Profile irv4() {
  return Profile::parse({"a>b>c", "a>b>c", "b>a>c", "c>b>a"});
}

}  // namespace fixtures
}  // namespace ltm
