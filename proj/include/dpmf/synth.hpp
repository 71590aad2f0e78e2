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

#pragma once

// Seeded synthetic rating data with a planted low-rank structure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dpmf/error.hpp"
#include "dpmf/model.hpp"
#include "dpmf/random.hpp"
#include "dpmf/ratings.hpp"

namespace dpmf {

// Fully observed V = X Theta^T with unit-norm rank-`rank` factor rows.
// Ratings are real valued; bounds are the observed min and max.
inline RatingDataset planted_low_rank(std::size_t n_items, std::size_t n_users,
                                      std::size_t rank, std::uint64_t seed) {
  detail::Require(n_items >= 1 && n_users >= 1 && rank >= 1,
                  ErrorCode::kInvalidDimension, "dimensions must be >= 1");
  Matrix items =
      detail::GaussianMatrix(n_items, rank, seed, random::Stream::kSynthItems);
  Matrix users =
      detail::GaussianMatrix(n_users, rank, seed, random::Stream::kSynthUsers);
  detail::NormalizeRows(items);
  detail::NormalizeRows(users);
  std::vector<Entry> entries;
  entries.reserve(n_items * n_users);
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < n_items; ++i) {
    for (std::size_t j = 0; j < n_users; ++j) {
      const double v = items.row(i).dot(users.row(j));
      entries.push_back({i, j, v});
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return RatingDataset(n_items, n_users, std::move(entries), lo, hi);
}

struct SynthSpec {
  std::size_t n_items = 200;
  std::size_t n_users = 300;
  double density = 0.1;
  std::size_t rank = 3;
  double noise = 0.5;  // std of additive noise before rounding
  RatingScale scale{1.0, 5.0};
  std::uint64_t seed = 7;
};

// Bernoulli(density) mask over a planted unit-norm low-rank score, mapped to
// the middle of the scale, perturbed, rounded and clamped to integers.
// Every item and every user gets at least one rating.
inline RatingDataset synthetic_ratings(const SynthSpec& spec) {
  detail::Require(spec.n_items >= 1 && spec.n_users >= 1 && spec.rank >= 1,
                  ErrorCode::kInvalidDimension, "dimensions must be >= 1");
  detail::Require(spec.density > 0.0 && spec.density <= 1.0,
                  ErrorCode::kInvalidParameter, "density must lie in (0, 1]");
  detail::Require(spec.noise >= 0.0 && spec.scale.min < spec.scale.max,
                  ErrorCode::kInvalidParameter, "bad noise or scale");
  Matrix items = detail::GaussianMatrix(spec.n_items, spec.rank, spec.seed,
                                        random::Stream::kSynthItems);
  Matrix users = detail::GaussianMatrix(spec.n_users, spec.rank, spec.seed,
                                        random::Stream::kSynthUsers);
  detail::NormalizeRows(items);
  detail::NormalizeRows(users);

  const double mid = 0.5 * (spec.scale.min + spec.scale.max);
  const double half = 0.5 * (spec.scale.max - spec.scale.min);
  auto rating_at = [&](std::size_t i, std::size_t j) {
    const std::uint64_t cell = i * spec.n_users + j;
    const double score =
        mid + half * items.row(i).dot(users.row(j)) +
        spec.noise * random::StandardNormal(spec.seed, random::Stream::kSynthNoise,
                                            0, cell);
    return std::clamp(std::round(score), std::ceil(spec.scale.min),
                      std::floor(spec.scale.max));
  };

  std::vector<Entry> entries;
  std::vector<bool> user_seen(spec.n_users, false);
  for (std::size_t i = 0; i < spec.n_items; ++i) {
    bool item_seen = false;
    for (std::size_t j = 0; j < spec.n_users; ++j) {
      const std::uint64_t cell = i * spec.n_users + j;
      if (random::Uniform(spec.seed, random::Stream::kSynthMask, 0, cell) <=
          spec.density) {
        entries.push_back({i, j, rating_at(i, j)});
        item_seen = true;
        user_seen[j] = true;
      }
    }
    if (!item_seen) {
      const std::size_t j = i % spec.n_users;
      entries.push_back({i, j, rating_at(i, j)});
      user_seen[j] = true;
    }
  }
  for (std::size_t j = 0; j < spec.n_users; ++j) {
    if (!user_seen[j]) {
      const std::size_t i = j % spec.n_items;
      entries.push_back({i, j, rating_at(i, j)});
    }
  }
  return RatingDataset(spec.n_items, spec.n_users, std::move(entries),
                       spec.scale.min, spec.scale.max);
}

}  // namespace dpmf
