// Copyright 2026 The dpmf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpmf/ratings.hpp"

#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "dpmf/ratings_io.hpp"
#include "gtest/gtest.h"

namespace dpmf {
namespace {

TEST(ParseRatingsTest, SmallCsvWithDeclaredScale) {
  const auto ds = parse_ratings("1,1,5\n1,2,3\n2,1,1\n", RatingFormat::kCsv,
                                RatingScale{1, 5});
  EXPECT_EQ(ds.n_users(), 2u);
  EXPECT_EQ(ds.n_items(), 2u);
  EXPECT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.r_min(), 1.0);
  EXPECT_EQ(ds.r_max(), 5.0);
  EXPECT_EQ(ds.tau(), 4.0);
}

TEST(ParseRatingsTest, InfersScaleFromDataWhenNotDeclared) {
  const auto ds = parse_ratings("1,1,2\n1,2,3\n2,1,4.5\n", RatingFormat::kCsv);
  EXPECT_EQ(ds.r_min(), 2.0);
  EXPECT_EQ(ds.r_max(), 4.5);
}

TEST(ParseRatingsTest, MovieLensDatIgnoresTimestamp) {
  const auto ds = parse_ratings(
      "1::1193::5::978300760\n1::661::3::978302109\n2::1193::4::978298413\n",
      RatingFormat::kMovieLensDat, RatingScale{1, 5});
  EXPECT_EQ(ds.n_users(), 2u);
  EXPECT_EQ(ds.n_items(), 2u);
  // Items are indexed in ascending raw id order: 661 -> 0, 1193 -> 1.
  EXPECT_EQ(ds.entries()[0], (Entry{0, 0, 3.0}));
  EXPECT_EQ(ds.entries()[1], (Entry{1, 0, 5.0}));
  EXPECT_EQ(ds.entries()[2], (Entry{1, 1, 4.0}));
}

TEST(ParseRatingsTest, HeaderIsDetected) {
  const auto ds =
      parse_ratings("userId,movieId,rating,timestamp\n7,9,4,0\n", RatingFormat::kCsv);
  EXPECT_EQ(ds.size(), 1u);
}

TEST(ParseRatingsTest, MalformedLineReportsLineNumber) {
  try {
    parse_ratings("1,1,5\na,b,c\n", RatingFormat::kCsv);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(ParseRatingsTest, NonNumericRating) {
  try {
    parse_ratings("1,1,5\n1,2,good\n", RatingFormat::kCsv);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ParseRatingsTest, WrongArity) {
  EXPECT_THROW(parse_ratings("1::2::3\n", RatingFormat::kMovieLensDat), ParseError);
  EXPECT_THROW(parse_ratings("1,2\n", RatingFormat::kCsv), ParseError);
}

TEST(ParseRatingsTest, EmptyInput) {
  try {
    parse_ratings("", RatingFormat::kCsv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDataset);
  }
  EXPECT_THROW(parse_ratings("user,item,rating\n\n", RatingFormat::kCsv), Error);
}

TEST(ParseRatingsTest, DuplicatePairIsAnError) {
  try {
    parse_ratings("1,1,5\n2,1,3\n1,1,4\n", RatingFormat::kCsv);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParseRatingsTest, RatingOutsideDeclaredScale) {
  EXPECT_THROW(parse_ratings("1,1,6\n", RatingFormat::kCsv, RatingScale{1, 5}),
               ParseError);
}

TEST(RatingDatasetTest, ConstructorEnforcesInvariants) {
  EXPECT_THROW(RatingDataset(1, 1, {{1, 0, 3.0}}, 1, 5), Error);
  EXPECT_THROW(RatingDataset(1, 1, {{0, 0, 7.0}}, 1, 5), Error);
  EXPECT_THROW(RatingDataset(2, 1, {{0, 0, 3.0}, {0, 0, 2.0}}, 1, 5), Error);
  EXPECT_THROW(RatingDataset(1, 1, {}, 5, 1), Error);
}

// Raw ids: users 10..14, items 100..104.
constexpr const char* kSmall =
    "10,100,1\n10,101,2\n10,102,3\n"
    "11,100,4\n11,101,5\n11,102,1\n11,103,2\n"
    "12,100,3\n12,104,4\n"
    "13,103,5\n"
    "14,101,1\n14,102,2\n";

TEST(ConditionDatasetTest, FixedPointOnHandBuiltDataset) {
  const auto ds = parse_ratings(kSmall, RatingFormat::kCsv, RatingScale{1, 5});
  // Worked by hand: round 1 drops users 11 (4 ratings) and 13 (1) and item
  // 104 (1); round 2 drops user 12 and item 103; round 3 drops item 100.
  const auto out = condition_dataset(ds, 2, 1, 4);
  EXPECT_EQ(out.n_users(), 2u);
  EXPECT_EQ(out.n_items(), 2u);
  ASSERT_EQ(out.size(), 4u);
  // Survivors: users 10, 14 and items 101, 102, re-densified in order.
  EXPECT_EQ(out.entries()[0], (Entry{0, 0, 2.0}));
  EXPECT_EQ(out.entries()[1], (Entry{0, 1, 1.0}));
  EXPECT_EQ(out.entries()[2], (Entry{1, 0, 3.0}));
  EXPECT_EQ(out.entries()[3], (Entry{1, 1, 2.0}));
  EXPECT_EQ(out.tau(), ds.tau());
}

TEST(ConditionDatasetTest, IdentityThresholds) {
  const auto ds = parse_ratings(kSmall, RatingFormat::kCsv, RatingScale{1, 5});
  EXPECT_EQ(condition_dataset(ds, 0, 0, kUnbounded), ds);
}

TEST(ConditionDatasetTest, EverythingFiltered) {
  const auto ds = parse_ratings("1,1,5\n2,2,3\n3,3,1\n", RatingFormat::kCsv);
  try {
    condition_dataset(ds, 0, 200, 2500);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyAfterConditioning);
  }
}

TEST(ConditionDatasetTest, RejectsInvertedUserBounds) {
  const auto ds = parse_ratings(kSmall, RatingFormat::kCsv);
  EXPECT_THROW(condition_dataset(ds, 0, 5, 5), Error);
}

TEST(DensityTest, Examples) {
  EXPECT_DOUBLE_EQ(
      density(parse_ratings("1,1,1\n1,2,1\n2,1,1\n2,2,1\n", RatingFormat::kCsv)),
      1.0);
  EXPECT_DOUBLE_EQ(
      density(parse_ratings("1,1,1\n1,2,1\n2,1,1\n", RatingFormat::kCsv)), 0.75);
  EXPECT_THROW(density(RatingDataset(0, 3, {}, 1, 5)), Error);
}

RatingDataset RandomDataset(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim(1, 30);
  std::uniform_real_distribution<double> fill(0.05, 0.9);
  std::uniform_int_distribution<int> rating(1, 10);
  const std::size_t m = dim(rng), u = dim(rng);
  std::bernoulli_distribution observed(fill(rng));
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < u; ++j)
      if (observed(rng)) entries.push_back({i, j, rating(rng) / 2.0});
  return RatingDataset(m, u, std::move(entries), 0.5, 5.0);
}

TEST(RatingsPropertyTest, CanonicalRoundTrip) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ds = RandomDataset(rng);
    std::istringstream csv(to_canonical_csv(ds));
    EXPECT_EQ(from_canonical(csv, sidecar_json(ds)), ds);
  }
}

TEST(RatingsPropertyTest, ConditioningOutputIsAFixedPointAndDenser) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::size_t> threshold(0, 6);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto ds = RandomDataset(rng);
    const std::size_t min_item = threshold(rng), min_user = threshold(rng);
    const std::size_t max_user = min_user + 1 + threshold(rng) * 3;
    std::optional<RatingDataset> out;
    try {
      out = condition_dataset(ds, min_item, min_user, max_user);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kEmptyAfterConditioning);
      continue;
    }
    ++checked;
    for (std::size_t c : item_counts(*out)) EXPECT_GE(c, std::max<std::size_t>(min_item, 1));
    for (std::size_t c : user_counts(*out)) {
      EXPECT_GT(c, min_user);
      EXPECT_LT(c, max_user);
    }
    EXPECT_EQ(condition_dataset(*out, min_item, min_user, max_user), *out);
  }
  EXPECT_GT(checked, 20);
}

// With only lower count thresholds every removed row or column is sparser
// than the ones kept, so density cannot drop.
TEST(RatingsPropertyTest, LowerThresholdsNeverReduceDensity) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::size_t> threshold(0, 8);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto ds = RandomDataset(rng);
    try {
      const auto out = condition_dataset(ds, threshold(rng), threshold(rng), kUnbounded);
      if (out.size() == ds.size()) continue;
      ++checked;
      EXPECT_GE(density(out), density(ds));
    } catch (const Error&) {
    }
  }
  EXPECT_GT(checked, 50);
}

// Needs the MovieLens 1M ratings.dat; set DPMF_ML1M to its path.
TEST(MovieLensTest, OneMillionStatistics) {
  const char* path = std::getenv("DPMF_ML1M");
  if (!path) GTEST_SKIP() << "DPMF_ML1M not set";
  std::ifstream in(path);
  const auto ds = parse_ratings(in, RatingFormat::kMovieLensDat, RatingScale{1, 5});
  EXPECT_EQ(ds.n_items(), 3706u);
  EXPECT_EQ(ds.n_users(), 6040u);
  EXPECT_EQ(ds.size(), 1000209u);
  EXPECT_NEAR(density(ds), 0.0447, 5e-5);
}

}  // namespace
}  // namespace dpmf
