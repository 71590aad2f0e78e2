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

// Counter-based random numbers. Every draw is a pure function of
// (seed, stream, counter), so entry-wise generation can run in any order
// and still reproduce the same matrix.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dpmf::random {

// Stream tags keep independent consumers of one seed apart.
enum class Stream : std::uint64_t {
  kInitItems = 0x1d8e4e27c47d124fULL,
  kInitUsers = 0x7c5e3a0b9f1d2e63ULL,
  kGradientNoise = 0x3b9ac9ff5e1f0a77ULL,
  kSynthItems = 0x51f15e4c2b6a9d03ULL,
  kSynthUsers = 0x2f4a8c6e1d3b5f79ULL,
  kSynthMask = 0x6d2b79f5a1c3e587ULL,
  kSynthNoise = 0x0e1f2a3b4c5d6e7fULL,
};

constexpr std::uint64_t SplitMix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t Hash(std::uint64_t seed, Stream stream,
                             std::uint64_t step,
                             std::uint64_t counter) noexcept {
  std::uint64_t h = SplitMix64(seed ^ static_cast<std::uint64_t>(stream));
  h = SplitMix64(h ^ step);
  return SplitMix64(h ^ counter);
}

// Uniform on (0, 1]; never zero so log() below is safe.
constexpr double ToUnitOpenClosed(std::uint64_t bits) noexcept {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

inline double Uniform(std::uint64_t seed, Stream stream, std::uint64_t step,
                      std::uint64_t counter) noexcept {
  return ToUnitOpenClosed(Hash(seed, stream, step, counter));
}

// Standard normal via Box-Muller on two hashed uniforms.
inline double StandardNormal(std::uint64_t seed, Stream stream,
                             std::uint64_t step,
                             std::uint64_t counter) noexcept {
  const double u1 = ToUnitOpenClosed(Hash(seed, stream, step, 2 * counter));
  const double u2 = ToUnitOpenClosed(Hash(seed, stream, step, 2 * counter + 1));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace dpmf::random
