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

#include "dpsd/hashing.h"

#include <sodium.h>

#include <cstring>
#include <stdexcept>
#include <string>

#include "dpsd/error.h"

namespace dpsd {

namespace {

constexpr std::uint64_t kTagH = 1;
constexpr std::uint64_t kTagG = 2;

void EnsureSodium() {
  static const int status = sodium_init();
  if (status < 0) throw std::runtime_error("libsodium initialization failed");
}

}  // namespace

Seed RandomSeed() {
  EnsureSodium();
  Seed seed;
  randombytes_buf(seed.data(), seed.size());
  return seed;
}

HashFamily::HashFamily(const Seed& seed, std::uint64_t domain_size,
                       std::uint32_t m1, std::uint32_t m2, std::uint32_t m3)
    : seed_(seed), domain_size_(domain_size), m1_(m1), m2_(m2), m3_(m3) {
  if (domain_size == 0 || domain_size > kMaxDomain) {
    throw Error(ErrorCode::kInvalidArgument,
                "hash domain size " + std::to_string(domain_size));
  }
  if (m1 == 0 || m2 == 0 || m3 == 0 || m1 > kMaxRepetitions) {
    throw Error(ErrorCode::kInvalidArgument, "hash ranges must be positive");
  }
  static_assert(crypto_shorthash_siphash24_KEYBYTES == 16);
  EnsureSodium();
  crypto_generichash(key_.data(), key_.size(), seed_.data(), seed_.size(),
                     nullptr, 0);
}

std::uint64_t HashFamily::Prf(std::uint64_t word) const {
  unsigned char in[8];
  for (int b = 0; b < 8; ++b)
    in[b] = static_cast<unsigned char>(word >> (8 * b));
  unsigned char out[crypto_shorthash_siphash24_BYTES];
  crypto_shorthash_siphash24(out, in, sizeof(in), key_.data());
  std::uint64_t value = 0;
  for (int b = 7; b >= 0; --b) value = (value << 8) | out[b];
  return value;
}

std::uint32_t HashFamily::H(std::uint64_t x) const {
  if (x >= domain_size_) {
    throw Error(ErrorCode::kOutOfRange, "h argument " + std::to_string(x));
  }
  return ReduceToRange(Prf((kTagH << 62) | x), m2_) + 1;
}

std::uint32_t HashFamily::G(std::uint64_t x, std::uint32_t i) const {
  if (x >= domain_size_ || i == 0 || i > m1_) {
    throw Error(ErrorCode::kOutOfRange, "g arguments (" + std::to_string(x) +
                                            ", " + std::to_string(i) + ")");
  }
  return ReduceToRange(Prf((kTagG << 62) | (std::uint64_t{i} << 40) | x), m3_) +
         1;
}

}  // namespace dpsd
