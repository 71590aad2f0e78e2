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

// Closed-form gradients of the regularized cost.
//
//   d/dX     = (Vhat - V) Theta_c + lambda X
//   d/dTheta = (Vhat - V)^T X_c   + lambda Theta
//
// When a bound C is given the counterpart profile matrix in the product is
// row-clipped (Theta_c = clip_rows(Theta, C), X_c = clip_rows(X, C)). Vhat is
// the masked prediction of the stored factors; ResidualSource::kClipped
// evaluates it with the clipped counterpart instead. The regularizer always
// uses the stored matrix, and the model itself is never modified.
//
// Changing one rating v_ij moves d/dTheta only in row j, by
// (v - v') * x_c,i, so its L2 norm is at most tau * C whichever residual
// source is used.

#include <optional>

#include "dpmf/error.hpp"
#include "dpmf/model.hpp"
#include "dpmf/ratings.hpp"

namespace dpmf {

enum class ResidualSource { kStored, kClipped };

// Optional probe: receives the counterpart matrix that entered the product.
struct GradientTrace {
  Matrix multiplicand;
};

inline Matrix item_gradient(const FactorModel& model, const RatingDataset& ds,
                            std::optional<double> clip,
                            ResidualSource source = ResidualSource::kStored,
                            GradientTrace* trace = nullptr) {
  detail::CheckShapes(model, ds);
  const Matrix users = clip ? clip_rows(model.users, *clip) : model.users;
  const Matrix& predict_with =
      source == ResidualSource::kClipped ? users : model.users;
  Matrix grad = model.lambda * model.items;
  for (const Entry& e : ds.entries()) {
    const double residual =
        model.items.row(e.item).dot(predict_with.row(e.user)) - e.rating;
    grad.row(e.item) += residual * users.row(e.user);
  }
  if (trace) trace->multiplicand = users;
  return grad;
}

inline Matrix user_gradient(const FactorModel& model, const RatingDataset& ds,
                            std::optional<double> clip,
                            ResidualSource source = ResidualSource::kStored,
                            GradientTrace* trace = nullptr) {
  detail::CheckShapes(model, ds);
  const Matrix items = clip ? clip_rows(model.items, *clip) : model.items;
  const Matrix& predict_with =
      source == ResidualSource::kClipped ? items : model.items;
  Matrix grad = model.lambda * model.users;
  for (const Entry& e : ds.entries()) {
    const double residual =
        predict_with.row(e.item).dot(model.users.row(e.user)) - e.rating;
    grad.row(e.user) += residual * items.row(e.item);
  }
  if (trace) trace->multiplicand = items;
  return grad;
}

}  // namespace dpmf
