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

// Renyi-DP accounting for J composed Gaussian releases.
//
// One release with L2 sensitivity D and noise sigma is
// (alpha, alpha D^2 / (2 sigma^2))-RDP; J releases compose additively.
// Converting at order alpha gives (eps_r + ln(1/delta_r) / (alpha - 1),
// delta_r)-DP, and the order minimizing that is available in closed form.

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "dpmf/error.hpp"
#include "dpmf/mechanism.hpp"

namespace dpmf {

// Append-only record of Gaussian releases sharing one (sensitivity, sigma).
class RdpLedger {
 public:
  RdpLedger(double sensitivity, double sigma, std::size_t steps = 0)
      : sensitivity_(sensitivity), sigma_(sigma), steps_(steps) {
    detail::Require(std::isfinite(sensitivity) && sensitivity > 0.0 &&
                        std::isfinite(sigma) && sigma > 0.0,
                    ErrorCode::kInvalidParameter,
                    "ledger needs sensitivity > 0 and sigma > 0");
  }

  void record(std::size_t releases = 1) { steps_ += releases; }

  // Composition of two ledgers over the same mechanism.
  RdpLedger composed_with(const RdpLedger& other) const {
    detail::Require(other.sensitivity_ == sensitivity_ && other.sigma_ == sigma_,
                    ErrorCode::kInvalidParameter,
                    "can only compose ledgers of the same mechanism");
    return RdpLedger(sensitivity_, sigma_, steps_ + other.steps_);
  }

  double sensitivity() const noexcept { return sensitivity_; }
  double sigma() const noexcept { return sigma_; }
  std::size_t steps() const noexcept { return steps_; }

 private:
  double sensitivity_;
  double sigma_;
  std::size_t steps_;
};

// alpha J D^2 / (2 sigma^2).
inline double rdp_epsilon(const RdpLedger& ledger, double alpha) {
  detail::Require(alpha > 1.0 && std::isfinite(alpha), ErrorCode::kInvalidOrder,
                  "Renyi order must be > 1");
  const double ratio = ledger.sensitivity() / ledger.sigma();
  return alpha * static_cast<double>(ledger.steps()) * ratio * ratio / 2.0;
}

// eps_r + ln(1/delta_r) / (alpha - 1).
inline double rdp_to_dp(double alpha, double eps_r, double delta_r) {
  detail::Require(alpha > 1.0 && std::isfinite(alpha), ErrorCode::kInvalidOrder,
                  "Renyi order must be > 1");
  detail::Require(delta_r > 0.0 && delta_r < 1.0, ErrorCode::kInvalidParameter,
                  "delta_r must lie in (0, 1)");
  detail::Require(eps_r >= 0.0, ErrorCode::kInvalidParameter,
                  "eps_r must be >= 0");
  return eps_r + std::log(1.0 / delta_r) / (alpha - 1.0);
}

// Stationary point of the converted epsilon in alpha:
// 1 + sqrt(2 sigma^2 ln(1/delta_r) / (J D^2)).
inline double optimal_alpha(const RdpLedger& ledger, double delta_r) {
  detail::Require(ledger.steps() >= 1, ErrorCode::kUndefinedOptimum,
                  "optimal order needs at least one release");
  detail::Require(delta_r > 0.0 && delta_r < 1.0, ErrorCode::kInvalidParameter,
                  "delta_r must lie in (0, 1)");
  const double ratio = ledger.sigma() / ledger.sensitivity();
  return 1.0 + std::sqrt(2.0 * ratio * ratio /
                         static_cast<double>(ledger.steps()) *
                         std::log(1.0 / delta_r));
}

// Converted epsilon at the optimal order, evaluated through the ledger.
inline double ledger_epsilon_opt(const RdpLedger& ledger, double delta_r) {
  const double alpha = optimal_alpha(ledger, delta_r);
  return rdp_to_dp(alpha, rdp_epsilon(ledger, alpha), delta_r);
}

// Closed form for J steps of the per-iteration (eps_i, delta) Gaussian
// mechanism: A + 2 sqrt(A ln(1/delta_r)), A = J eps_i^2 / (4 ln(1.25/delta)).
inline double epsilon_opt(double eps_i, double delta, std::size_t steps,
                          double delta_r, bool allow_large_eps = false) {
  detail::CheckEpsilon(eps_i, allow_large_eps);
  detail::Require(delta > 0.0 && delta < 1.0, ErrorCode::kInvalidParameter,
                  "delta must lie in (0, 1)");
  detail::Require(delta_r > 0.0 && delta_r < 1.0, ErrorCode::kInvalidParameter,
                  "delta_r must lie in (0, 1)");
  detail::Require(steps >= 1, ErrorCode::kUndefinedOptimum,
                  "epsilon_opt needs at least one release");
  const double a = static_cast<double>(steps) * eps_i * eps_i /
                   (4.0 * std::log(1.25 / delta));
  return a + 2.0 * std::sqrt(a * std::log(1.0 / delta_r));
}

struct CurvePoint {
  double alpha;
  double epsilon;
};

// Converted epsilon as a function of the order, pointwise.
inline std::vector<CurvePoint> epsilon_curve(const RdpLedger& ledger,
                                             double delta_r,
                                             std::span<const double> alphas) {
  std::vector<CurvePoint> curve;
  curve.reserve(alphas.size());
  for (const double alpha : alphas)
    curve.push_back({alpha, rdp_to_dp(alpha, rdp_epsilon(ledger, alpha), delta_r)});
  return curve;
}

// `count` orders with alpha - 1 log-spaced over [lo - 1, hi - 1].
inline std::vector<double> log_alpha_grid(double lo, double hi,
                                          std::size_t count) {
  detail::Require(lo > 1.0 && hi > lo && count >= 2,
                  ErrorCode::kInvalidParameter, "bad alpha grid");
  std::vector<double> grid(count);
  const double a = std::log(lo - 1.0);
  const double b = std::log(hi - 1.0);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(count - 1);
    grid[k] = 1.0 + std::exp(a + t * (b - a));
  }
  return grid;
}

}  // namespace dpmf
