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
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "ltm/random.h"
#include "test_support.h"

namespace ltm {
namespace {

constexpr int a = 0, b = 1, c = 2;

TEST(RankingTest, IndexZeroIsIdentityAndLastIsReversed) {
  EXPECT_EQ(Ranking::from_index(4, 0), Ranking::identity(4));
  EXPECT_EQ(Ranking::from_index(4, 23), Ranking::from_order({3, 2, 1, 0}));
}

TEST(RankingTest, LexicographicIndicesForThreeCandidates) {
  const char* expected[] = {"a>b>c", "a>c>b", "b>a>c", "b>c>a", "c>a>b", "c>b>a"};
  for (uint64_t k = 0; k < 6; ++k) {
    EXPECT_EQ(Ranking::from_index(3, k).to_string(), expected[k]);
    EXPECT_EQ(Ranking::parse(expected[k]).index(), k);
  }
}

TEST(RankingTest, RoundTripsEveryIndexUpToSix) {
  for (int m = 1; m <= 6; ++m) {
    std::set<std::vector<int>> seen;
    for (uint64_t k = 0; k < factorial(m); ++k) {
      const Ranking r = Ranking::from_index(m, k);
      EXPECT_EQ(r.index(), k);
      EXPECT_EQ(Ranking::from_order(r.order()), r);
      seen.insert(r.order());
    }
    EXPECT_EQ(seen.size(), factorial(m));
  }
}

TEST(RankingTest, IndexOrderMatchesNextPermutation) {
  std::vector<int> order = {0, 1, 2, 3, 4};
  uint64_t k = 0;
  do {
    EXPECT_EQ(Ranking::from_order(order).index(), k++);
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST(RankingTest, RejectsNonPermutations) {
  EXPECT_THROW(Ranking::from_order({0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(Ranking::from_order({0, 3, 1}), std::invalid_argument);
  EXPECT_THROW(Ranking::from_index(3, 6), std::out_of_range);
}

TEST(RankingTest, PositionsAndPreferences) {
  const Ranking r = Ranking::parse("b>c>a");
  EXPECT_EQ(r.top(), b);
  EXPECT_EQ(r.position_of(a), 2);
  EXPECT_TRUE(r.prefers(c, a));
  EXPECT_FALSE(r.prefers(a, b));
  EXPECT_EQ(r.top_among(CandidateSet::single(a).with(c)), c);
  EXPECT_EQ(r.without(b).to_string(), "b>a");
}

TEST(MarginTest, ProfileFive) {
  EXPECT_EQ(margin(fixtures::five(), a, b), 1);
  EXPECT_EQ(margin(fixtures::unanimous(), a, b), 3);
  EXPECT_EQ(margin(fixtures::cycle(), a, a), 0);
}

TEST(MarginTest, OutOfRangeCandidateThrows) {
  EXPECT_THROW(margin(fixtures::five(), a, 3), std::out_of_range);
  EXPECT_THROW(margin(fixtures::five(), -1, b), std::out_of_range);
}

TEST(MarginMatrixTest, ProfileFiveEntries) {
  const MarginMatrix mm = margin_matrix(fixtures::five());
  EXPECT_EQ(mm(a, b), 1);
  EXPECT_EQ(mm(b, c), 3);
  EXPECT_EQ(mm(c, a), 1);
  EXPECT_EQ(mm(b, a), -1);
  EXPECT_EQ(mm(c, b), -3);
  EXPECT_EQ(mm(a, c), -1);
  for (int x = 0; x < 3; ++x) EXPECT_EQ(mm(x, x), 0);
}

TEST(MarginMatrixTest, CycleAndUnanimous) {
  const MarginMatrix cyc = margin_matrix(fixtures::cycle());
  EXPECT_EQ(cyc(a, b), 1);
  EXPECT_EQ(cyc(b, c), 1);
  EXPECT_EQ(cyc(c, a), 1);
  const MarginMatrix un = margin_matrix(fixtures::unanimous());
  EXPECT_EQ(un(a, b), 3);
  EXPECT_EQ(un(a, c), 3);
  EXPECT_EQ(un(b, c), 3);
}

TEST(MarginMatrixTest, RandomProfilesAreSkewSymmetricWithParity) {
  RandomStream stream(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(stream.uniform_int(21));
    const int m = 2 + static_cast<int>(stream.uniform_int(5));
    const Profile p = testing::random_profile(n, m, stream);
    const MarginMatrix mm(p);
    for (int x = 0; x < m; ++x) {
      EXPECT_EQ(mm(x, x), 0);
      for (int y = 0; y < m; ++y) {
        EXPECT_EQ(mm(x, y), -mm(y, x));
        EXPECT_EQ(mm(x, y), margin(p, x, y));
        EXPECT_LE(std::abs(mm(x, y)), n);
        if (x != y) {
          EXPECT_EQ(((mm(x, y) - n) % 2 + 2) % 2, 0);
        }
      }
    }
  }
}

TEST(MarginMatrixTest, AddAndRemoveBallot) {
  MarginMatrix mm(fixtures::five());
  const Ranking extra = Ranking::parse("c>b>a");
  mm.add_ballot(extra);
  EXPECT_EQ(mm.num_voters(), 6);
  EXPECT_EQ(mm(c, a), 2);
  mm.add_ballot(extra, -1);
  EXPECT_EQ(mm, MarginMatrix(fixtures::five()));
}

TEST(CondorcetTest, Fixtures) {
  EXPECT_EQ(condorcet_winner(fixtures::unanimous()), a);
  EXPECT_EQ(condorcet_winner(fixtures::cycle()), std::nullopt);
  EXPECT_EQ(condorcet_winner(fixtures::five()), std::nullopt);
}

TEST(CondorcetTest, WinnerBeatsEveryRival) {
  RandomStream stream(12);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 3 + static_cast<int>(stream.uniform_int(4));
    const Profile p = testing::random_profile(7, m, stream);
    const auto w = condorcet_winner(p);
    if (w) {
      for (int x = 0; x < m; ++x) {
        if (x != *w) {
          EXPECT_GT(margin(p, *w, x), 0);
        }
      }
    } else {
      for (int x = 0; x < m; ++x) {
        bool loses_somewhere = false;
        for (int y = 0; y < m; ++y) {
          if (y != x && margin(p, x, y) <= 0) loses_somewhere = true;
        }
        EXPECT_TRUE(loses_somewhere);
      }
    }
  }
}

TEST(InducedProfileTest, SortsByDecreasingUtility) {
  const double row1[] = {0.2, 0.9, 0.5};
  EXPECT_EQ(induced_ranking(row1).to_string(), "b>c>a");
  const double row2[] = {1.0, 0.5, 0.0};
  EXPECT_EQ(induced_ranking(row2).to_string(), "a>b>c");
  EXPECT_EQ(induced_profile(fixtures::tie4_utilities()).ballot(0).to_string(),
            "a>b>c");
  EXPECT_EQ(induced_profile(fixtures::tie4_utilities()), fixtures::tie4());
}

TEST(InducedProfileTest, AgreesWithPairwiseComparison) {
  RandomStream stream(13);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> row(6);
    for (double& x : row) x = stream.uniform01();
    const Ranking r = induced_ranking(row);
    for (int x = 0; x < 6; ++x) {
      for (int y = 0; y < 6; ++y) {
        if (x != y) {
          EXPECT_EQ(r.prefers(x, y), row[x] > row[y]);
        }
      }
    }
  }
}

TEST(UtilityProfileTest, DuplicateUtilitiesAreInvariantViolations) {
  EXPECT_THROW((UtilityProfile{{0.1, 0.1, 0.3}}), InvariantError);
  const double row[] = {0.4, 0.2, 0.4};
  EXPECT_THROW(induced_ranking(row), InvariantError);
  EXPECT_THROW(UtilityProfile(2, 3, {0.1, 0.2}), std::invalid_argument);
}

TEST(RemoveCandidateTest, ProfileFiveWithoutC) {
  const Restriction r = remove_candidate(fixtures::five(), c);
  EXPECT_EQ(r.profile.num_candidates(), 2);
  int ab = 0, ba = 0;
  for (const Ranking& x : r.profile.ballots()) {
    (x.to_string() == "a>b" ? ab : ba) += 1;
  }
  EXPECT_EQ(ab, 3);
  EXPECT_EQ(ba, 2);
  EXPECT_EQ(r.to_original, (std::vector<int>{a, b}));
}

TEST(RemoveCandidateTest, UnanimousWithoutB) {
  const Restriction r = remove_candidate(fixtures::unanimous(), b);
  EXPECT_EQ(r.to_original, (std::vector<int>{a, c}));
  for (const Ranking& x : r.profile.ballots()) EXPECT_EQ(x.order(), (std::vector<int>{0, 1}));
}

TEST(RemoveCandidateTest, CycleWithoutA) {
  const Restriction r = remove_candidate(fixtures::cycle(), a);
  EXPECT_EQ(r.to_original, (std::vector<int>{b, c}));
  // b>c, b>c, c>b after renumbering b->0, c->1.
  EXPECT_EQ(r.profile, Profile::parse({"a>b", "a>b", "b>a"}));
  EXPECT_EQ(r.translate(WinnerSet::of({0})), WinnerSet::of({b}));
}

TEST(RemoveCandidateTest, PreservesSurvivingMargins) {
  RandomStream stream(14);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + static_cast<int>(stream.uniform_int(5));
    const Profile p = testing::random_profile(9, m, stream);
    const int drop = static_cast<int>(stream.uniform_int(m));
    const Restriction r = remove_candidate(p, drop);
    for (int x = 0; x < m - 1; ++x) {
      for (int y = 0; y < m - 1; ++y) {
        EXPECT_EQ(margin(r.profile, x, y),
                  margin(p, r.to_original[x], r.to_original[y]));
      }
    }
  }
}

TEST(RemoveCandidateTest, SingleCandidateIsDomainError) {
  EXPECT_THROW(remove_candidate(Profile::parse({"a", "a"}), 0), std::domain_error);
}

TEST(ReplaceBallotTest, Substitution) {
  const Profile p = replace_ballot(fixtures::tie4(), 0, Ranking::parse("a>c>b"));
  EXPECT_EQ(p, Profile::parse({"a>c>b", "a>b>c", "b>a>c", "b>a>c"}));
  EXPECT_EQ(fixtures::tie4().ballot(0).to_string(), "a>b>c");
  EXPECT_EQ(replace_ballot(fixtures::unanimous(), 0, Ranking::parse("a>b>c")),
            fixtures::unanimous());
}

TEST(ReplaceBallotTest, RecountsMargins) {
  const Profile p = replace_ballot(fixtures::five(), 4, Ranking::parse("a>b>c"));
  EXPECT_EQ(margin(p, a, b), 3);
}

TEST(ReplaceBallotTest, BadVoterThrows) {
  EXPECT_THROW(replace_ballot(fixtures::five(), 5, Ranking::identity(3)),
               std::out_of_range);
}

TEST(WinnerSetTest, EmptyIsRejected) {
  EXPECT_THROW(WinnerSet{CandidateSet{}}, InvariantError);
  EXPECT_EQ(WinnerSet::of({0, 2}).members(), (std::vector<int>{0, 2}));
}

}  // namespace
}  // namespace ltm
