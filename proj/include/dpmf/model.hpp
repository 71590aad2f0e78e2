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

// Low-rank factor model V ~ X * Theta^T with item profiles X (n_items x n)
// and user profiles Theta (n_users x n).

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dpmf/error.hpp"
#include "dpmf/random.hpp"
#include "dpmf/ratings.hpp"

namespace dpmf {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct FactorModel {
  Matrix items;  // X, one profile per row
  Matrix users;  // Theta, one profile per row
  double lambda = 0.0;

  std::size_t n_items() const { return static_cast<std::size_t>(items.rows()); }
  std::size_t n_users() const { return static_cast<std::size_t>(users.rows()); }
  std::size_t rank() const { return static_cast<std::size_t>(items.cols()); }

  bool all_finite() const { return items.allFinite() && users.allFinite(); }
};

// Sparse matrix sharing the support of a RatingDataset; absent entries are 0.
struct ObservedMatrix {
  std::size_t n_items = 0;
  std::size_t n_users = 0;
  std::vector<Entry> entries;
};

namespace detail {

inline void NormalizeRows(Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double norm = m.row(r).norm();
    if (norm > 0.0) {
      m.row(r) /= norm;
    } else {
      m.row(r).setZero();
      m(r, 0) = 1.0;
    }
  }
}

inline Matrix GaussianMatrix(std::size_t rows, std::size_t cols,
                             std::uint64_t seed, random::Stream stream) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = random::StandardNormal(seed, stream, 0, r * cols + c);
  return m;
}

inline void CheckShapes(const FactorModel& model, const RatingDataset& ds) {
  Require(model.n_items() == ds.n_items() && model.n_users() == ds.n_users() &&
              model.users.cols() == model.items.cols(),
          ErrorCode::kDimensionMismatch,
          "model shape does not match dataset");
}

}  // namespace detail

// N(0,1) entries, then every row scaled to unit Euclidean norm.
inline FactorModel init_model(std::size_t n_items, std::size_t n_users,
                              std::size_t rank, double lambda,
                              std::uint64_t seed) {
  detail::Require(rank >= 1 && n_items >= 1 && n_users >= 1,
                  ErrorCode::kInvalidDimension,
                  "dimensions must be at least 1");
  detail::Require(std::isfinite(lambda) && lambda >= 0.0,
                  ErrorCode::kInvalidParameter, "lambda must be >= 0");
  FactorModel model;
  model.items =
      detail::GaussianMatrix(n_items, rank, seed, random::Stream::kInitItems);
  model.users =
      detail::GaussianMatrix(n_users, rank, seed, random::Stream::kInitUsers);
  detail::NormalizeRows(model.items);
  detail::NormalizeRows(model.users);
  model.lambda = lambda;
  return model;
}

inline double predict(const FactorModel& model, std::size_t item,
                      std::size_t user) {
  detail::Require(item < model.n_items() && user < model.n_users(),
                  ErrorCode::kIndexOutOfRange, "predict index out of range");
  return model.items.row(item).dot(model.users.row(user));
}

// X Theta^T restricted to the observed support.
inline ObservedMatrix predict_observed(const FactorModel& model,
                                       const RatingDataset& ds) {
  detail::CheckShapes(model, ds);
  ObservedMatrix out{ds.n_items(), ds.n_users(), {}};
  out.entries.reserve(ds.size());
  for (const Entry& e : ds.entries()) {
    out.entries.push_back(
        {e.item, e.user, model.items.row(e.item).dot(model.users.row(e.user))});
  }
  return out;
}

// Row-wise m_i / max(1, |m_i| / bound).
inline Matrix clip_rows(const Matrix& m, double bound) {
  detail::Require(bound > 0.0 && std::isfinite(bound),
                  ErrorCode::kInvalidParameter, "clip bound must be > 0");
  Matrix out = m;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double scale = std::max(1.0, out.row(r).norm() / bound);
    if (scale > 1.0) {
      out.row(r) /= scale;
      // Rounding can leave the norm a few ulps above the bound.
      while (out.row(r).norm() > bound) out.row(r) *= 1.0 - 0x1.0p-52;
    }
  }
  return out;
}

// 1/2 sum over observed (vhat - v)^2 + lambda/2 (|X|_F^2 + |Theta|_F^2).
inline double cost(const FactorModel& model, const RatingDataset& ds) {
  detail::CheckShapes(model, ds);
  double residual = 0.0;
  for (const Entry& e : ds.entries()) {
    const double r =
        model.items.row(e.item).dot(model.users.row(e.user)) - e.rating;
    residual += r * r;
  }
  return 0.5 * residual +
         0.5 * model.lambda *
             (model.items.squaredNorm() + model.users.squaredNorm());
}

}  // namespace dpmf
