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

// Alternating full-batch gradient descent with clipped counterpart profiles
// and, when private, Gaussian perturbation of the user gradient. Only the
// user profiles are covered by the privacy guarantee.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dpmf/accountant.hpp"
#include "dpmf/error.hpp"
#include "dpmf/gradients.hpp"
#include "dpmf/mechanism.hpp"
#include "dpmf/model.hpp"
#include "dpmf/ratings.hpp"
#include "dpmf/ratings_io.hpp"

namespace dpmf {

struct TrainConfig {
  std::size_t rank = 20;
  double lambda = 0.1;
  double mu = 0.0005;
  std::size_t max_iters = 300;
  // Stop once |cost_t - cost_{t-1}| / max(cost_{t-1}, 1e-12) < rel_tol.
  // A data-dependent stopping time is not itself accounted for; keep 0 when
  // the reported budget must hold.
  double rel_tol = 0.0;
  std::uint64_t seed = 1;
  // Unset trains the non-private baseline.
  std::optional<PrivacyParams> privacy = PrivacyParams{};
  // Clip bound used by the non-private path; unset disables clipping there.
  std::optional<double> baseline_clip = 1.0;
  // Overrides the dataset's r_max - r_min as the per-rating change bound.
  std::optional<double> tau;
  // Where the residual's predictions come from; see gradients.hpp.
  ResidualSource residual = ResidualSource::kStored;
  bool record_timing = true;
};

struct IterationRecord {
  std::size_t iter = 0;
  double rmse = 0.0;
  double cost = 0.0;
  std::optional<double> eps_opt;
  double wall_ms = 0.0;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

using TrainHistory = std::vector<IterationRecord>;

struct TrainResult {
  FactorModel model;
  TrainHistory history;
  std::optional<RdpLedger> ledger;
  bool converged = false;
};

using IterationObserver =
    std::function<void(const FactorModel&, const TrainHistory&)>;

inline void validate(const TrainConfig& cfg) {
  detail::Require(cfg.mu >= 0.0 && std::isfinite(cfg.mu),
                  ErrorCode::kInvalidParameter, "mu must be >= 0");
  detail::Require(cfg.max_iters >= 1, ErrorCode::kInvalidParameter,
                  "max_iters must be >= 1");
  detail::Require(cfg.rel_tol >= 0.0, ErrorCode::kInvalidParameter,
                  "rel_tol must be >= 0");
  detail::Require(cfg.rank >= 1, ErrorCode::kInvalidDimension,
                  "rank must be >= 1");
  if (cfg.privacy) validate(*cfg.privacy);
  if (cfg.baseline_clip)
    detail::Require(*cfg.baseline_clip > 0.0, ErrorCode::kInvalidParameter,
                    "baseline clip bound must be > 0");
  if (cfg.tau)
    detail::Require(*cfg.tau >= 0.0 && std::isfinite(*cfg.tau),
                    ErrorCode::kInvalidParameter, "tau must be >= 0");
}

inline double rmse(const FactorModel& model, const RatingDataset& ds) {
  detail::Require(!ds.empty(), ErrorCode::kUndefinedRmse,
                  "rmse of an empty dataset");
  detail::CheckShapes(model, ds);
  double sum = 0.0;
  for (const Entry& e : ds.entries()) {
    const double r =
        model.items.row(e.item).dot(model.users.row(e.user)) - e.rating;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(ds.size()));
}

inline TrainResult train(const RatingDataset& ds, const TrainConfig& cfg,
                         const IterationObserver& observer = {}) {
  validate(cfg);
  detail::Require(!ds.empty(), ErrorCode::kEmptyDataset,
                  "cannot train on an empty dataset");

  TrainResult result{init_model(ds.n_items(), ds.n_users(), cfg.rank,
                                cfg.lambda, cfg.seed),
                     {}, std::nullopt, false};
  FactorModel& model = result.model;

  const std::optional<double> clip =
      cfg.privacy ? std::optional<double>(cfg.privacy->clip) : cfg.baseline_clip;
  double sigma = 0.0;
  if (cfg.privacy) {
    const PrivacyParams& p = *cfg.privacy;
    const double tau = cfg.tau.value_or(ds.tau());
    detail::Require(tau > 0.0, ErrorCode::kInvalidParameter,
                    "private training needs a positive rating range tau");
    sigma = gaussian_sigma(tau, p.clip, p.eps_i, p.delta, p.allow_large_eps);
    result.ledger.emplace(sensitivity(tau, p.clip), sigma);
  }

  double previous_cost = cost(model, ds);
  result.history.reserve(cfg.max_iters);
  for (std::size_t t = 1; t <= cfg.max_iters; ++t) {
    const auto start = std::chrono::steady_clock::now();
    const Matrix item_grad = item_gradient(model, ds, clip, cfg.residual);
    Matrix user_grad = user_gradient(model, ds, clip, cfg.residual);
    if (cfg.privacy) {
      user_grad = perturb_gradient(user_grad, sigma, cfg.seed, t);
      result.ledger->record();
    }
    model.items -= cfg.mu * item_grad;
    model.users -= cfg.mu * user_grad;
    const auto stop = std::chrono::steady_clock::now();

    IterationRecord rec;
    rec.iter = t;
    rec.cost = cost(model, ds);
    if (!std::isfinite(rec.cost) || !model.all_finite()) throw DivergenceError(t);
    rec.rmse = rmse(model, ds);
    if (cfg.privacy) {
      const PrivacyParams& p = *cfg.privacy;
      rec.eps_opt = epsilon_opt(p.eps_i, p.delta, t, p.delta_r, p.allow_large_eps);
    }
    rec.wall_ms =
        cfg.record_timing
            ? std::chrono::duration<double, std::milli>(stop - start).count()
            : 0.0;
    result.history.push_back(rec);
    if (observer) observer(model, result.history);

    if (cfg.rel_tol > 0.0 &&
        std::abs(rec.cost - previous_cost) / std::max(previous_cost, 1e-12) <
            cfg.rel_tol) {
      result.converged = true;
      break;
    }
    previous_cost = rec.cost;
  }
  return result;
}

inline constexpr const char* kHistoryHeader = "iter,rmse,cost,eps_opt,wall_ms";

inline std::string history_to_csv(const TrainHistory& history) {
  std::string out = std::string(kHistoryHeader) + "\n";
  for (const IterationRecord& r : history) {
    out += std::to_string(r.iter) + ',' + FormatDouble(r.rmse) + ',' +
           FormatDouble(r.cost) + ',' +
           (r.eps_opt ? FormatDouble(*r.eps_opt) : std::string()) + ',' +
           FormatDouble(r.wall_ms) + '\n';
  }
  return out;
}

inline TrainHistory history_from_csv(std::istream& in) {
  TrainHistory history;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = detail::Trim(line);
    if (view.empty()) continue;
    if (line_no == 1) {
      if (view != kHistoryHeader) throw ParseError(line_no, "bad history header");
      continue;
    }
    const auto f = detail::Split(view, ",");
    if (f.size() != 5) throw ParseError(line_no, "expected 5 fields");
    IterationRecord r;
    const auto iter = detail::ParseInt(f[0]);
    const auto rm = detail::ParseDouble(f[1]);
    const auto co = detail::ParseDouble(f[2]);
    const auto ms = detail::ParseDouble(f[4]);
    if (!iter || !rm || !co || !ms) throw ParseError(line_no, "bad number");
    r.iter = static_cast<std::size_t>(*iter);
    r.rmse = *rm;
    r.cost = *co;
    r.wall_ms = *ms;
    if (!f[3].empty()) {
      const auto eps = detail::ParseDouble(f[3]);
      if (!eps) throw ParseError(line_no, "bad eps_opt");
      r.eps_opt = *eps;
    }
    history.push_back(r);
  }
  return history;
}

}  // namespace dpmf
