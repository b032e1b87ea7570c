// Copyright 2026 The dpsd Authors
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

#ifndef DPSD_RANDOM_H_
#define DPSD_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

#include "dpsd/hashing.h"

namespace dpsd {

// Secret noise generator. Never serialized; seeded from OS entropy in
// production and from a derived stream in reproducible runs.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t Mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream derivation: folds a path of fixed-width counters into a master
// seed, h <- Mix64(h ^ Mix64(v)) per component. Same (master, path) gives
// the same stream on every platform.
std::uint64_t DeriveSeed(std::uint64_t master,
                         std::initializer_list<std::uint64_t> path);

// Stream labels, kept stable so derived seeds never change between releases.
inline constexpr std::uint64_t kStreamPublicSeed =
    0x5075626c6963ull;                                          // "Public"
inline constexpr std::uint64_t kStreamNoise = 0x4e6f697365ull;  // "Noise"
inline constexpr std::uint64_t kStreamData = 0x44617461ull;     // "Data"

// 32-byte public hash seed for one copy, derived from a master seed.
Seed DerivePublicSeed(std::uint64_t master, std::uint64_t copy);

// 64 bits of OS entropy.
std::uint64_t EntropySeed();

}  // namespace dpsd

#endif  // DPSD_RANDOM_H_
