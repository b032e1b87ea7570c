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

#ifndef DPSD_HASHING_H_
#define DPSD_HASHING_H_

#include <array>
#include <cstdint>

namespace dpsd {

// Public randomness shared by the curator and every client. Stored verbatim
// in serialized stores.
using Seed = std::array<std::uint8_t, 32>;

// 32 bytes from the OS entropy pool.
Seed RandomSeed();

// The pair of public hash functions of one sketch family:
//   h : [0, 2n) -> [1, M2]
//   g : [0, 2n) x [1, M1] -> [1, M3]
// Both are SipHash-2-4 evaluations keyed by a 16-byte key derived from the
// seed, over the 64-bit word (tag << 62 | i << 40 | x), reduced to range by
// 128-bit multiply-shift. The result depends only on (seed, arguments).
class HashFamily {
 public:
  static constexpr std::uint64_t kMaxDomain = std::uint64_t{1} << 40;
  static constexpr std::uint32_t kMaxRepetitions = (1u << 22) - 1;

  HashFamily(const Seed& seed, std::uint64_t domain_size, std::uint32_t m1,
             std::uint32_t m2, std::uint32_t m3);

  // Bucket of encoded symbol x. Throws kOutOfRange if x >= domain_size.
  std::uint32_t H(std::uint64_t x) const;
  // Cell of encoded symbol x in repetition i (1-indexed).
  std::uint32_t G(std::uint64_t x, std::uint32_t i) const;

  const Seed& seed() const noexcept { return seed_; }
  std::uint64_t domain_size() const noexcept { return domain_size_; }
  std::uint32_t m1() const noexcept { return m1_; }
  std::uint32_t m2() const noexcept { return m2_; }
  std::uint32_t m3() const noexcept { return m3_; }

 private:
  std::uint64_t Prf(std::uint64_t word) const;

  Seed seed_;
  std::array<std::uint8_t, 16> key_{};
  std::uint64_t domain_size_;
  std::uint32_t m1_;
  std::uint32_t m2_;
  std::uint32_t m3_;
};

// Encoding of (1-indexed position p, bit b) used as hash input: 2(p-1)+b.
constexpr std::uint64_t EncodeSymbol(std::uint64_t p, bool b) {
  return 2 * (p - 1) + (b ? 1 : 0);
}

// floor(value * range / 2^64): maps a uniform 64-bit word onto [0, range).
constexpr std::uint32_t ReduceToRange(std::uint64_t value,
                                      std::uint32_t range) {
  // Split into 32-bit halves; the partial sums cannot overflow 64 bits.
  const std::uint64_t high = (value >> 32) * range;
  const std::uint64_t low = (value & 0xffffffffULL) * range;
  return static_cast<std::uint32_t>((high + (low >> 32)) >> 32);
}

}  // namespace dpsd

#endif  // DPSD_HASHING_H_
