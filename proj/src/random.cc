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

#include "dpsd/random.h"

namespace dpsd {

std::uint64_t DeriveSeed(std::uint64_t master,
                         std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = Mix64(master);
  for (const std::uint64_t v : path) h = Mix64(h ^ Mix64(v));
  return h;
}

Seed DerivePublicSeed(std::uint64_t master, std::uint64_t copy) {
  Seed seed;
  for (std::uint64_t w = 0; w < 4; ++w) {
    const std::uint64_t word = DeriveSeed(master, {kStreamPublicSeed, copy, w});
    for (int b = 0; b < 8; ++b) {
      seed[w * 8 + b] = static_cast<std::uint8_t>(word >> (8 * b));
    }
  }
  return seed;
}

std::uint64_t EntropySeed() {
  const Seed s = RandomSeed();
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= std::uint64_t{s[b]} << (8 * b);
  return v;
}

}  // namespace dpsd
