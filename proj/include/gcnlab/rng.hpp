// Copyright 2026 The gcnlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gcnlab {

using Seed = std::uint64_t;

// Purpose tags for deriving independent streams from one top-level seed.
enum class Stream : std::uint64_t {
  kLabel = 1,
  kLatents = 2,
  kEdges = 3,
  kPerturb = 4,
  kGraph = 5,
  kRestart = 6,
};

namespace detail {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Stable hash of (seed, keys...) used to key per-trial / per-purpose streams.
/// The result depends only on the arguments, never on thread scheduling.
constexpr Seed derive_seed(Seed seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = detail::mix64(seed);
  for (std::uint64_t k : keys) h = detail::mix64(h ^ detail::mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

constexpr Seed derive_seed(Seed seed, Stream s, std::initializer_list<std::uint64_t> keys = {}) {
  Seed h = derive_seed(seed, {static_cast<std::uint64_t>(s)});
  return keys.size() == 0 ? h : derive_seed(h, keys);
}

using Engine = std::mt19937_64;

inline Engine make_engine(Seed seed) { return Engine(seed); }

// Uniform on [0,1) with 53 random bits; portable across standard libraries,
// unlike std::uniform_real_distribution.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace gcnlab
