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

#include "dpmf/model.hpp"

#include <Eigen/QR>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "dpmf/model_io.hpp"
#include "gtest/gtest.h"
#include "oracles.hpp"

namespace dpmf {
namespace {

bool BitIdentical(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

Matrix Rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

TEST(InitModelTest, RowsHaveUnitNorm) {
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 987654321ull}) {
    const auto model = init_model(17, 23, 5, 0.1, seed);
    for (Eigen::Index r = 0; r < model.items.rows(); ++r)
      EXPECT_LT(std::abs(model.items.row(r).norm() - 1.0), 1e-12);
    for (Eigen::Index r = 0; r < model.users.rows(); ++r)
      EXPECT_LT(std::abs(model.users.row(r).norm() - 1.0), 1e-12);
  }
}

TEST(InitModelTest, DeterministicPerSeed) {
  const auto a = init_model(8, 9, 4, 0.1, 5);
  const auto b = init_model(8, 9, 4, 0.1, 5);
  const auto c = init_model(8, 9, 4, 0.1, 6);
  EXPECT_TRUE(BitIdentical(a.items, b.items));
  EXPECT_TRUE(BitIdentical(a.users, b.users));
  EXPECT_FALSE(BitIdentical(a.items, c.items));
}

TEST(InitModelTest, RankOneEntriesAreUnitMagnitude) {
  const auto model = init_model(50, 60, 1, 0.0, 3);
  for (Eigen::Index k = 0; k < model.items.size(); ++k)
    EXPECT_EQ(std::abs(model.items.data()[k]), 1.0);
  for (Eigen::Index k = 0; k < model.users.size(); ++k)
    EXPECT_EQ(std::abs(model.users.data()[k]), 1.0);
}

TEST(InitModelTest, RejectsZeroRank) {
  try {
    init_model(3, 3, 0, 0.1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidDimension);
  }
}

TEST(PredictTest, InnerProducts) {
  FactorModel model;
  model.items = Rows({{1, 2}, {0.6, 0.8}, {1, 0}});
  model.users = Rows({{3, -1}, {0.6, 0.8}, {0, 1}});
  EXPECT_DOUBLE_EQ(predict(model, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(predict(model, 1, 1), model.items.row(1).squaredNorm());
  EXPECT_EQ(predict(model, 2, 2), 0.0);
  EXPECT_THROW(predict(model, 3, 0), Error);
  EXPECT_THROW(predict(model, 0, 3), Error);
}

TEST(PredictObservedTest, SupportMatchesDataset) {
  const auto model = init_model(3, 3, 2, 0.0, 9);
  const RatingDataset empty(3, 3, {}, 1, 5);
  EXPECT_TRUE(predict_observed(model, empty).entries.empty());

  const RatingDataset one(3, 3, {{1, 2, 4.0}}, 1, 5);
  const auto single = predict_observed(model, one);
  ASSERT_EQ(single.entries.size(), 1u);
  const Matrix dense = model.items * model.users.transpose();
  EXPECT_EQ(single.entries[0].item, 1u);
  EXPECT_EQ(single.entries[0].user, 2u);
  EXPECT_NEAR(single.entries[0].rating, dense(1, 2), 1e-15);

  const auto small = init_model(2, 2, 3, 0.0, 4);
  const RatingDataset full(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}}, 1, 5);
  const Matrix xt = small.items * small.users.transpose();
  for (const Entry& e : predict_observed(small, full).entries)
    EXPECT_NEAR(e.rating, xt(e.item, e.user), 1e-15);

  const RatingDataset wrong(4, 3, {}, 1, 5);
  EXPECT_THROW(predict_observed(model, wrong), Error);
}

TEST(ClipRowsTest, Examples) {
  const Matrix small = Rows({{0.3, 0.4}});
  EXPECT_TRUE(BitIdentical(clip_rows(small, 1.0), small));
  const Matrix m = Rows({{3, 4}});
  const Matrix clipped = clip_rows(m, 1.0);
  EXPECT_NEAR(clipped(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(clipped(0, 1), 0.8, 1e-15);
  EXPECT_TRUE(BitIdentical(clip_rows(m, 10.0), m));
  EXPECT_EQ(m(0, 0), 3.0);  // input untouched
  EXPECT_THROW(clip_rows(m, 0.0), Error);
  EXPECT_THROW(clip_rows(m, -1.0), Error);
}

TEST(ClipRowsTest, PropertiesOnRandomMatrices) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> dim(1, 12);
  std::lognormal_distribution<double> scale(0.0, 2.0);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 300; ++trial) {
    Matrix m(dim(rng), dim(rng));
    const double s = scale(rng);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = s * normal(rng);
    const double bound = scale(rng);
    const Matrix once = clip_rows(m, bound);
    EXPECT_TRUE(BitIdentical(clip_rows(once, bound), once));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      EXPECT_LE(once.row(r).norm(), bound);
      EXPECT_LE(once.row(r).norm(), m.row(r).norm());
      if (m.row(r).norm() <= bound) {
        EXPECT_TRUE(once.row(r) == m.row(r));
      } else {
        // Positive rescaling keeps the direction.
        const double cosine =
            once.row(r).dot(m.row(r)) / (once.row(r).norm() * m.row(r).norm());
        EXPECT_NEAR(cosine, 1.0, 1e-12);
      }
    }
  }
}

TEST(CostTest, Examples) {
  FactorModel exact;
  exact.items = Rows({{1, 0}, {0, 1}});
  exact.users = Rows({{2, 0}, {0, 3}});
  exact.lambda = 0.0;
  const RatingDataset fit(2, 2, {{0, 0, 2}, {1, 1, 3}, {0, 1, 0}}, 0, 5);
  EXPECT_EQ(cost(exact, fit), 0.0);

  FactorModel reg;
  reg.items = Rows({{1}, {1}});
  reg.users = Rows({{1}, {1}});
  reg.lambda = 1.0;
  EXPECT_DOUBLE_EQ(cost(reg, RatingDataset(2, 2, {}, 1, 5)), 2.0);

  FactorModel one;
  one.items = Rows({{1}});
  one.users = Rows({{1}});
  one.lambda = 0.0;
  EXPECT_DOUBLE_EQ(cost(one, RatingDataset(1, 1, {{0, 0, 2}}, 1, 5)), 0.5);
}

TEST(CostTest, MatchesDenseOracleAndIsRotationInvariant) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 40; ++trial) {
    auto [ds, model] = testing::MakeRandomProblem(rng, 7, 9, 4, 0.4, 0.3);
    const double c = cost(model, ds);
    EXPECT_GE(c, 0.0);
    EXPECT_NEAR(c, testing::DenseCost(model.items, model.users, model.lambda, ds),
                1e-10 * std::max(1.0, c));
    Matrix g(4, 4);
    for (Eigen::Index k = 0; k < g.size(); ++k) g.data()[k] = normal(rng);
    const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
    FactorModel rotated = model;
    rotated.items = model.items * q;
    rotated.users = model.users * q;
    EXPECT_NEAR(cost(rotated, ds), c, 1e-8 * c);
  }
}

TEST(CheckpointTest, RoundTripIsExact) {
  const auto model = init_model(6, 7, 3, 0.25, 77);
  for (bool with_items : {false, true}) {
    std::stringstream buf;
    write_checkpoint(buf, model, with_items);
    const Checkpoint ck = read_checkpoint(buf);
    EXPECT_EQ(ck.n_items, 6u);
    EXPECT_EQ(ck.n_users, 7u);
    EXPECT_EQ(ck.rank, 3u);
    EXPECT_EQ(ck.lambda, 0.25);
    EXPECT_TRUE(BitIdentical(ck.users, model.users));
    EXPECT_EQ(ck.items.has_value(), with_items);
    if (with_items) EXPECT_TRUE(BitIdentical(*ck.items, model.items));
  }
}

TEST(CheckpointTest, RejectsTruncatedInput) {
  const auto model = init_model(4, 4, 2, 0.1, 1);
  std::stringstream buf;
  write_checkpoint(buf, model, false);
  std::string text = buf.str();
  text.resize(text.size() - 20);
  std::istringstream in(text);
  EXPECT_THROW(read_checkpoint(in), Error);
}

}  // namespace
}  // namespace dpmf
