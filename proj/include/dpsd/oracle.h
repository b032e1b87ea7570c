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

#ifndef DPSD_ORACLE_H_
#define DPSD_ORACLE_H_

#include <cstdint>
#include <optional>
#include <utility>

#include "dpsd/bitstring.h"
#include "dpsd/random.h"

// Exact, unoptimized reference implementations. Every property test and
// acceptance check compares against these.
namespace dpsd::oracle {

std::size_t ExactHamming(const PackedBitString& a, const PackedBitString& b);

// Longest w with a[i..i+w-1] = b[j..j+w-1], 1-indexed. Positions may equal
// length + 1 (empty suffix). kOutOfRange otherwise.
std::uint64_t ExactLcp(const PackedBitString& a, std::uint64_t i,
                       const PackedBitString& b, std::uint64_t j);

// Banded O(n k) edit distance over |i - j| <= k; nullopt when the distance
// exceeds k. kLengthMismatch on unequal lengths.
std::optional<std::uint32_t> ExactEdit(const PackedBitString& a,
                                       const PackedBitString& b,
                                       std::uint32_t k);

// Full O(n m) Wagner-Fischer table; any lengths.
std::uint64_t ExactEditFull(const PackedBitString& a, const PackedBitString& b);

std::pair<PackedBitString, PackedBitString> PlantHammingPair(std::uint64_t n,
                                                             std::uint64_t d,
                                                             Rng& rng);

struct PlantedEditPair {
  PackedBitString a;
  PackedBitString b;
  std::uint32_t distance = 0;  // oracle-verified, <= the requested d
};

// Applies d edit operations (substitutions, or a deletion paired with an
// insertion so lengths stay equal) to a random string. With `exact` the pair
// is redrawn until the oracle distance equals d.
PlantedEditPair PlantEditPair(std::uint64_t n, std::uint32_t d, Rng& rng,
                              bool exact = false);

PackedBitString RandomString(std::uint64_t n, Rng& rng);

// Copy of base with exactly d distinct positions inverted.
PackedBitString FlipRandomPositions(const PackedBitString& base,
                                    std::uint64_t d, Rng& rng);

// Copy of base after d edit units: a substitution costs one, a deletion
// paired with an insertion elsewhere costs two. The result has the same
// length and edit distance at most d from base.
PackedBitString ApplyRandomEdits(const PackedBitString& base, std::uint32_t d,
                                 Rng& rng);

}  // namespace dpsd::oracle

#endif  // DPSD_ORACLE_H_
