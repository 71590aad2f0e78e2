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

#include "dpmf/gradients.hpp"

#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace dpmf {
namespace {

using testing::FiniteDifferenceGradient;
using testing::RelativeError;
using testing::Wrt;

// Fully observed dataset whose ratings equal the model's predictions.
RatingDataset ExactFit(const FactorModel& model) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < model.n_items(); ++i)
    for (std::size_t j = 0; j < model.n_users(); ++j)
      entries.push_back({i, j, predict(model, i, j)});
  return RatingDataset(model.n_items(), model.n_users(), std::move(entries),
                       -100, 100);
}

TEST(GradientTest, ZeroResidual) {
  FactorModel model = init_model(3, 4, 2, 0.0, 8);
  const auto ds = ExactFit(model);
  EXPECT_LT(item_gradient(model, ds, std::nullopt).norm(), 1e-15);
  EXPECT_LT(user_gradient(model, ds, std::nullopt).norm(), 1e-15);
  model.lambda = 1.0;
  EXPECT_LT((item_gradient(model, ds, std::nullopt) - model.items).norm(), 1e-15);
  EXPECT_LT((user_gradient(model, ds, std::nullopt) - model.users).norm(), 1e-15);
}

TEST(GradientTest, TwoByTwoMatchesFiniteDifferences) {
  FactorModel model;
  model.items = Matrix{{0.5, -1.0}, {1.5, 0.25}};
  model.users = Matrix{{1.0, 2.0}, {-0.5, 0.75}};
  model.lambda = 0.1;
  const RatingDataset ds(2, 2, {{0, 0, 4}, {0, 1, 1}, {1, 0, 5}, {1, 1, 2}}, 1, 5);
  EXPECT_LT(RelativeError(item_gradient(model, ds, std::nullopt),
                          FiniteDifferenceGradient(model, ds, Wrt::kItems)),
            1e-5);
  EXPECT_LT(RelativeError(user_gradient(model, ds, std::nullopt),
                          FiniteDifferenceGradient(model, ds, Wrt::kUsers)),
            1e-5);
}

TEST(GradientTest, SingleEntryTouchesOneUserRow) {
  FactorModel model = init_model(3, 4, 3, 0.0, 2);
  const RatingDataset ds(3, 4, {{1, 2, 4.0}}, 1, 5);
  const Matrix grad = user_gradient(model, ds, std::nullopt);
  const double residual = predict(model, 1, 2) - 4.0;
  for (Eigen::Index j = 0; j < grad.rows(); ++j) {
    if (j == 2) {
      EXPECT_LT((grad.row(j) - residual * model.items.row(1)).norm(), 1e-15);
    } else {
      EXPECT_EQ(grad.row(j).norm(), 0.0);
    }
  }
}

TEST(GradientTest, RandomProblemsMatchFiniteDifferences) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> lambda(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto [ds, model] = testing::MakeRandomProblem(rng, 4, 5, 3, 0.7, lambda(rng));
    EXPECT_LT(RelativeError(item_gradient(model, ds, std::nullopt),
                            FiniteDifferenceGradient(model, ds, Wrt::kItems)),
              1e-5);
    EXPECT_LT(RelativeError(user_gradient(model, ds, std::nullopt),
                            FiniteDifferenceGradient(model, ds, Wrt::kUsers)),
              1e-5);
  }
}

TEST(GradientTest, ClippedCounterpartIsUsedInTheProduct) {
  FactorModel model;
  model.items = Matrix{{3.0, 4.0}};
  model.users = Matrix{{0.0, 2.0}};
  model.lambda = 0.5;
  const RatingDataset ds(1, 1, {{0, 0, 1.0}}, 1, 5);
  // Stored prediction 8, residual 7; clipped item (0.6, 0.8).
  const Matrix g = user_gradient(model, ds, 1.0);
  EXPECT_NEAR(g(0, 0), 7.0 * 0.6 + 0.5 * 0.0, 1e-14);
  EXPECT_NEAR(g(0, 1), 7.0 * 0.8 + 0.5 * 2.0, 1e-14);
  // Residual from the clipped item: 1.6 - 1.
  const Matrix gc = user_gradient(model, ds, 1.0, ResidualSource::kClipped);
  EXPECT_NEAR(gc(0, 0), 0.6 * 0.6, 1e-14);
  EXPECT_NEAR(gc(0, 1), 0.6 * 0.8 + 1.0, 1e-14);
  // Item side: clipped user (0, 1); regularizer stays on the stored X.
  const Matrix gx = item_gradient(model, ds, 1.0);
  EXPECT_NEAR(gx(0, 0), 0.5 * 3.0, 1e-14);
  EXPECT_NEAR(gx(0, 1), 7.0 * 1.0 + 0.5 * 4.0, 1e-14);
}

TEST(GradientTest, ClippedMultiplicandRowsAreBounded) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    auto [ds, model] = testing::MakeRandomProblem(rng, 6, 7, 4, 0.5, 0.1);
    model.items *= 3.0;
    model.users *= 3.0;
    for (double bound : {0.5, 1.0, 2.0}) {
      GradientTrace trace;
      item_gradient(model, ds, bound, ResidualSource::kStored, &trace);
      for (Eigen::Index r = 0; r < trace.multiplicand.rows(); ++r)
        EXPECT_LE(trace.multiplicand.row(r).norm(), bound);
      user_gradient(model, ds, bound, ResidualSource::kStored, &trace);
      for (Eigen::Index r = 0; r < trace.multiplicand.rows(); ++r)
        EXPECT_LE(trace.multiplicand.row(r).norm(), bound);
    }
  }
}

// Changing one rating moves exactly one row of the user gradient, by at most
// tau * C.
TEST(GradientTest, OneRatingChangesOneUserRow) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> rating(1.0, 5.0);
  for (ResidualSource source : {ResidualSource::kStored, ResidualSource::kClipped}) {
    for (int trial = 0; trial < 50; ++trial) {
      auto [ds, model] = testing::MakeRandomProblem(rng, 5, 6, 3, 0.6, 0.2);
      model.items *= 2.0;
      const auto entries = ds.entries();
      const std::size_t k = std::uniform_int_distribution<std::size_t>(
          0, entries.size() - 1)(rng);
      std::vector<Entry> changed(entries.begin(), entries.end());
      changed[k].rating = rating(rng);
      const RatingDataset neighbour(ds.n_items(), ds.n_users(), changed, 1, 5);
      const Matrix a = user_gradient(model, ds, 1.0, source);
      const Matrix b = user_gradient(model, neighbour, 1.0, source);
      for (Eigen::Index j = 0; j < a.rows(); ++j) {
        if (static_cast<std::size_t>(j) == entries[k].user) {
          EXPECT_LE((a.row(j) - b.row(j)).norm(), ds.tau() * 1.0 + 1e-9);
        } else {
          EXPECT_TRUE(a.row(j) == b.row(j));
        }
      }
    }
  }
}

TEST(GradientTest, ShapeMismatch) {
  const auto model = init_model(3, 3, 2, 0.1, 1);
  const RatingDataset ds(3, 4, {}, 1, 5);
  EXPECT_THROW(item_gradient(model, ds, std::nullopt), Error);
  EXPECT_THROW(user_gradient(model, ds, 1.0), Error);
}

}  // namespace
}  // namespace dpmf
