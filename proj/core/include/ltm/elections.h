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

// Core election domain: rankings, profiles, utility profiles, margins and
// winner sets. All values are immutable after construction.

#ifndef LTM_ELECTIONS_H_
#define LTM_ELECTIONS_H_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ltm {

// Upper bound on the number of candidates any core type can hold. Candidate
// sets are 32-bit masks and ranking indices must fit in 64 bits.
inline constexpr int kMaxCandidates = 16;

// Raised when a value would break a documented type invariant (duplicate
// utilities, empty winner sets, ...). Argument errors use
// std::invalid_argument / std::out_of_range instead.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Bitmask over candidate indices 0..kMaxCandidates-1.
class CandidateSet {
 public:
  constexpr CandidateSet() = default;
  constexpr explicit CandidateSet(uint32_t mask) : mask_(mask) {}

  static constexpr CandidateSet all(int m) {
    return CandidateSet(m >= 32 ? ~uint32_t{0} : ((uint32_t{1} << m) - 1));
  }
  static constexpr CandidateSet single(int c) {
    return CandidateSet(uint32_t{1} << c);
  }

  constexpr uint32_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool contains(int c) const { return (mask_ >> c) & 1u; }
  int size() const;
  // Index of the lowest member; undefined on an empty set.
  int lowest() const;
  std::vector<int> members() const;

  constexpr CandidateSet with(int c) const {
    return CandidateSet(mask_ | (uint32_t{1} << c));
  }
  constexpr CandidateSet without(int c) const {
    return CandidateSet(mask_ & ~(uint32_t{1} << c));
  }
  constexpr CandidateSet operator|(CandidateSet o) const {
    return CandidateSet(mask_ | o.mask_);
  }
  constexpr CandidateSet operator&(CandidateSet o) const {
    return CandidateSet(mask_ & o.mask_);
  }
  constexpr bool is_subset_of(CandidateSet o) const {
    return (mask_ & ~o.mask_) == 0;
  }
  friend constexpr bool operator==(CandidateSet, CandidateSet) = default;

 private:
  uint32_t mask_ = 0;
};

// Calls fn(c) for every member of s in increasing order.
template <typename Fn>
void for_each_member(CandidateSet s, Fn&& fn) {
  for (uint32_t bits = s.mask(); bits != 0; bits &= bits - 1) {
    fn(__builtin_ctz(bits));
  }
}

// A strict linear order of m candidates, top first.
//
// Rankings are indexed by their position in the lexicographic enumeration of
// all permutations of {0..m-1}: index 0 is 0>1>...>m-1 and index m!-1 is
// m-1>...>0. The index is the class label used by datasets and networks.
class Ranking {
 public:
  Ranking() = default;

  // Throws std::invalid_argument unless order is a permutation of 0..m-1.
  static Ranking from_order(std::span<const int> order);
  static Ranking from_order(std::initializer_list<int> order) {
    return from_order(std::span<const int>(order.begin(), order.size()));
  }
  // Throws std::out_of_range if index >= m!.
  static Ranking from_index(int m, uint64_t index);
  static Ranking identity(int m);
  // Parses "a>b>c" (letters a.. for candidates 0..). Whitespace is ignored.
  static Ranking parse(std::string_view text);

  int size() const { return m_; }
  // Candidate at rank position pos (0 = top).
  int at(int pos) const { return order_[pos]; }
  int top() const { return order_[0]; }
  // Rank position of candidate c (0 = top).
  int position_of(int c) const { return pos_[c]; }
  bool prefers(int a, int b) const { return pos_[a] < pos_[b]; }

  uint64_t index() const;
  std::vector<int> order() const;
  // First member of s in this ranking; s must be nonempty.
  int top_among(CandidateSet s) const;
  // Drops candidate c and renumbers candidates above c down by one.
  Ranking without(int c) const;

  std::string to_string() const;

  friend bool operator==(const Ranking& a, const Ranking& b) {
    return a.m_ == b.m_ && a.order_ == b.order_;
  }

 private:
  std::array<uint8_t, kMaxCandidates> order_{};
  std::array<uint8_t, kMaxCandidates> pos_{};
  uint8_t m_ = 0;
};

uint64_t factorial(int m);

// All m! rankings in index order. Cached per m; m <= 8.
const std::vector<Ranking>& all_rankings(int m);

// One ranking per voter over a common candidate set.
class Profile {
 public:
  // Throws std::invalid_argument if ballots is empty or sizes disagree.
  explicit Profile(std::vector<Ranking> ballots);
  // Convenience for fixtures: Profile::parse({"a>b>c", "b>c>a"}).
  static Profile parse(std::initializer_list<std::string_view> ballots);

  int num_voters() const { return static_cast<int>(ballots_.size()); }
  int num_candidates() const { return m_; }
  const Ranking& ballot(int voter) const { return ballots_[voter]; }
  std::span<const Ranking> ballots() const { return ballots_; }

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  std::vector<Ranking> ballots_;
  int m_ = 0;
};

// n x m utilities; row i is voter i's utility for each candidate. Every row
// holds m pairwise distinct values.
class UtilityProfile {
 public:
  // Throws InvariantError if a row has duplicate values and
  // std::invalid_argument on shape errors.
  UtilityProfile(int n, int m, std::vector<double> values);
  UtilityProfile(std::initializer_list<std::initializer_list<double>> rows);

  int num_voters() const { return n_; }
  int num_candidates() const { return m_; }
  std::span<const double> row(int voter) const {
    return std::span<const double>(values_).subspan(
        static_cast<size_t>(voter) * m_, m_);
  }
  std::span<const double> values() const { return values_; }

  static bool has_distinct_values(std::span<const double> row);

 private:
  std::vector<double> values_;
  int n_ = 0;
  int m_ = 0;
};

// Skew-symmetric pairwise margin matrix of a profile.
class MarginMatrix {
 public:
  MarginMatrix() = default;
  // All-zero matrix over m candidates with zero voters.
  explicit MarginMatrix(int m);
  explicit MarginMatrix(const Profile& profile);

  int num_candidates() const { return m_; }
  int num_voters() const { return n_; }
  int operator()(int a, int b) const { return entries_[a * m_ + b]; }
  std::span<const int> entries() const { return entries_; }

  // Adds (sign=+1) or removes (sign=-1) one voter's ballot.
  void add_ballot(const Ranking& ballot, int sign = 1);

  friend bool operator==(const MarginMatrix&, const MarginMatrix&) = default;

 private:
  std::vector<int> entries_;
  int n_ = 0;
  int m_ = 0;
};

// Nonempty set of winning candidates.
class WinnerSet {
 public:
  // Throws InvariantError on an empty set.
  explicit WinnerSet(CandidateSet members);
  static WinnerSet of(std::initializer_list<int> members);

  CandidateSet set() const { return members_; }
  bool contains(int c) const { return members_.contains(c); }
  int size() const { return members_.size(); }
  std::vector<int> members() const { return members_.members(); }
  std::string to_string() const;

  friend bool operator==(WinnerSet, WinnerSet) = default;

 private:
  CandidateSet members_;
};

// Profile over m-1 candidates plus the map back to the original indices.
struct Restriction {
  Profile profile;
  std::vector<int> to_original;

  WinnerSet translate(WinnerSet sub_winners) const;
};

int margin(const Profile& profile, int a, int b);
MarginMatrix margin_matrix(const Profile& profile);
std::optional<int> condorcet_winner(const Profile& profile);
std::optional<int> condorcet_winner(const MarginMatrix& margins);
// Throws InvariantError if a row has duplicate utilities.
Ranking induced_ranking(std::span<const double> utilities);
Profile induced_profile(const UtilityProfile& utilities);
// Throws std::domain_error when the profile has a single candidate.
Restriction remove_candidate(const Profile& profile, int candidate);
// Throws std::out_of_range for a bad voter index.
Profile replace_ballot(const Profile& profile, int voter, const Ranking& ballot);

// Documented fixtures shared by tests, examples and benchmarks.
namespace fixtures {
Profile cycle();         // a>b>c, b>c>a, c>a>b
Profile five();          // a>b>c, a>b>c, c>a>b, b>c>a, b>c>a
Profile unanimous();     // 3x a>b>c
Profile tie4();          // a>b>c, a>b>c, b>a>c, b>a>c
UtilityProfile tie4_utilities();  // consistent with tie4(); voter 0 has (1, .5, 0)
Profile irv4();          // a>b>c, a>b>c, b>a>c, c>b>a
}  // namespace fixtures

}  // namespace ltm

#endif  // LTM_ELECTIONS_H_
