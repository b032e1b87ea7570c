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

#ifndef DPSD_STORE_H_
#define DPSD_STORE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpsd/bitstring.h"
#include "dpsd/dyadic_tree.h"
#include "dpsd/hamming.h"
#include "dpsd/hashing.h"
#include "dpsd/random.h"

namespace dpsd {

enum class StoreMode : std::uint8_t { kHamming = 0, kEdit = 1 };

std::string_view StoreModeName(StoreMode mode);
// "hamming" or "edit"; kInvalidArgument otherwise.
StoreMode ParseStoreMode(std::string_view name);

inline constexpr char kStoreMagic[4] = {'D', 'P', 'S', 'D'};
inline constexpr std::uint16_t kStoreVersion = 1;

// max(1, ceil(18 ln(m / beta))).
std::uint32_t CopiesFor(std::uint64_t m, double beta);

// Median of a non-empty vector; the lower middle value for even sizes.
double LowerMedian(std::vector<double> values);

struct BuildConfig {
  std::uint32_t k = 1;
  double eps_per_copy = 1.0;
  double beta = 0.01;
  StoreMode mode = StoreMode::kHamming;
  // Overrides the copy count derived from beta.
  std::optional<std::uint32_t> copies;
  // When set, copy c uses DerivePublicSeed(*public_seed_master, c);
  // otherwise every copy draws a seed from OS entropy.
  std::optional<std::uint64_t> public_seed_master;
  unsigned threads = 1;
  // String length recorded for a database with no strings.
  std::uint64_t empty_length = 0;
};

// A released multi-string database: copies x strings of independent DP
// structures. Only noised sketches are held.
class SketchStore {
 public:
  StoreMode mode() const noexcept { return mode_; }
  std::uint32_t m() const noexcept { return m_; }
  std::uint64_t n() const noexcept { return n_; }
  std::uint32_t k() const noexcept { return k_; }
  double eps_per_copy() const noexcept { return eps_per_copy_; }
  std::uint32_t copies() const noexcept { return copies_; }
  // Sequential composition over all released copies.
  double total_eps() const noexcept { return copies_ * eps_per_copy_; }
  const std::vector<Seed>& seeds() const noexcept { return seeds_; }

  const DpHammingStructure& hamming(std::uint32_t string,
                                    std::uint32_t copy) const;
  const DyadicTree& tree(std::uint32_t string, std::uint32_t copy) const;

  friend SketchStore BuildStore(std::span<const PackedBitString> strings,
                                const BuildConfig& config, Rng& rng);
  friend SketchStore Deserialize(std::span<const std::uint8_t> bytes);

 private:
  SketchStore() = default;
  std::size_t Slot(std::uint32_t string, std::uint32_t copy) const;

  StoreMode mode_ = StoreMode::kHamming;
  std::uint32_t m_ = 0;
  std::uint64_t n_ = 0;
  std::uint32_t k_ = 1;
  double eps_per_copy_ = 0.0;
  std::uint32_t copies_ = 1;
  std::vector<Seed> seeds_;
  // Slot(string, copy) = string * copies + copy.
  std::vector<DpHammingStructure> hamming_;
  std::vector<DyadicTree> trees_;
};

// Builds copies x m structures in parallel. Each cell's noise stream is
// derived from one draw of `rng` and the (string, copy) counter, so the
// result does not depend on the thread count. kLengthMismatch on ragged
// input; kKExceedsN if k > n.
SketchStore BuildStore(std::span<const PackedBitString> strings,
                       const BuildConfig& config, Rng& rng);

struct QueryConfig {
  LcpBackend backend = LcpBackend::kWindowEncode;
  unsigned threads = 1;
};

struct StringEstimate {
  // Median over copies; +infinity when the edit median is TooFar.
  double estimate = 0.0;
  std::vector<double> per_copy;
  std::uint64_t lcp_calls = 0;
};

// Per-string median estimates for query b. kLengthMismatch if b.length()
// differs from the store's n.
std::vector<StringEstimate> QueryAllDetailed(const SketchStore& store,
                                             const PackedBitString& b,
                                             const QueryConfig& config = {});
std::vector<double> QueryAll(const SketchStore& store, const PackedBitString& b,
                             const QueryConfig& config = {});

std::vector<std::uint8_t> Serialize(const SketchStore& store);
// Errors: kBadMagic, kVersionMismatch, kTruncatedStore, kVolumeMismatch,
// kMalformedStore.
SketchStore Deserialize(std::span<const std::uint8_t> bytes);

void WriteStoreFile(const std::string& path, const SketchStore& store);
SketchStore ReadStoreFile(const std::string& path);

}  // namespace dpsd

#endif  // DPSD_STORE_H_
