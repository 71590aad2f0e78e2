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

// Gaussian mechanism for the user-side gradient.

#include <cmath>
#include <cstdint>

#include "dpmf/error.hpp"
#include "dpmf/model.hpp"
#include "dpmf/random.hpp"

namespace dpmf {

struct PrivacyParams {
  double eps_i = 0.5;     // per-iteration epsilon
  double delta = 0.01;    // per-iteration delta
  double clip = 1.0;      // row-norm bound C
  double delta_r = 1e-5;  // target delta of the overall guarantee
  // Skips the eps_i < 1 requirement of the classical Gaussian-mechanism
  // bound. The RDP accounting stays valid for any eps_i > 0.
  bool allow_large_eps = false;
};

namespace detail {

inline bool InUnitInterval(double v) { return v > 0.0 && v < 1.0; }

inline void CheckEpsilon(double eps_i, bool allow_large_eps) {
  Require(std::isfinite(eps_i) && eps_i > 0.0 && (allow_large_eps || eps_i < 1.0),
          ErrorCode::kInvalidParameter,
          allow_large_eps ? "eps_i must be > 0" : "eps_i must lie in (0, 1)");
}

}  // namespace detail

inline void validate(const PrivacyParams& p) {
  detail::CheckEpsilon(p.eps_i, p.allow_large_eps);
  detail::Require(detail::InUnitInterval(p.delta), ErrorCode::kInvalidParameter,
                  "delta must lie in (0, 1)");
  detail::Require(detail::InUnitInterval(p.delta_r),
                  ErrorCode::kInvalidParameter, "delta_r must lie in (0, 1)");
  detail::Require(p.clip > 0.0 && std::isfinite(p.clip),
                  ErrorCode::kInvalidParameter, "clip bound must be > 0");
}

// L2 sensitivity of the user gradient under change-one-rating adjacency:
// one rating moves by at most tau and only touches one row, through a
// clipped item profile of norm <= C.
inline double sensitivity(double tau, double clip) {
  detail::Require(std::isfinite(tau) && tau >= 0.0,
                  ErrorCode::kInvalidParameter, "tau must be >= 0");
  detail::Require(std::isfinite(clip) && clip > 0.0,
                  ErrorCode::kInvalidParameter, "clip bound must be > 0");
  return tau * clip;
}

// sigma / sensitivity; depends only on (eps_i, delta).
inline double noise_multiplier(double eps_i, double delta,
                               bool allow_large_eps = false) {
  detail::CheckEpsilon(eps_i, allow_large_eps);
  detail::Require(detail::InUnitInterval(delta), ErrorCode::kInvalidParameter,
                  "delta must lie in (0, 1)");
  return std::sqrt(2.0 * std::log(1.25 / delta)) / eps_i;
}

// (tau C / eps_i) sqrt(2 ln(1.25 / delta)).
inline double gaussian_sigma(double tau, double clip, double eps_i,
                             double delta, bool allow_large_eps = false) {
  return sensitivity(tau, clip) *
         noise_multiplier(eps_i, delta, allow_large_eps);
}

// G + eta with eta_rc ~ N(0, sigma^2), a pure function of (seed, step, r, c).
inline Matrix perturb_gradient(const Matrix& grad, double sigma,
                               std::uint64_t seed, std::uint64_t step) {
  detail::Require(std::isfinite(sigma) && sigma >= 0.0,
                  ErrorCode::kInvalidParameter, "sigma must be >= 0");
  Matrix out = grad;
  if (sigma == 0.0) return out;
  const auto cols = static_cast<std::uint64_t>(grad.cols());
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      const std::uint64_t counter = static_cast<std::uint64_t>(r) * cols +
                                    static_cast<std::uint64_t>(c);
      out(r, c) += sigma * random::StandardNormal(
                               seed, random::Stream::kGradientNoise, step,
                               counter);
    }
  }
  return out;
}

}  // namespace dpmf
