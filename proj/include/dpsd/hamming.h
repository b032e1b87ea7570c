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

#ifndef DPSD_HAMMING_H_
#define DPSD_HAMMING_H_

#include <cstdint>
#include <vector>

#include "dpsd/bitstring.h"
#include "dpsd/hashing.h"
#include "dpsd/random.h"
#include "dpsd/sketch.h"

namespace dpsd {

// Parameters of one Hamming sketch family.
struct SketchParams {
  std::uint32_t m1 = 1;
  std::uint32_t m2 = 1;
  std::uint32_t m3 = 1;
  double eps = 0.0;        // may be +infinity
  double flip_prob = 0.0;  // 1 / (1 + e^{eps / (2 m1)})
  std::uint32_t k = 1;
  std::uint64_t n = 1;
  Seed seed{};

  SketchDims dims() const noexcept { return {m1, m2, m3}; }
};

// Smallest L with 2^L >= x, for x >= 1.
std::uint32_t CeilLog2(std::uint64_t x);

// Randomized-response probability for a sketch in which one input symbol
// moves at most 2 * m1 cells. Zero for eps = +infinity. kInvalidArgument
// unless eps > 0.
double FlipProbability(double eps, std::uint32_t m1);

// m1 = 10 L, m2 = 2k, m3 = 400 L^2 with L = max(ceil(log2 k), 1).
// kKExceedsN if k > n.
SketchParams DefaultParams(std::uint32_t k, double eps, std::uint64_t n,
                           const Seed& seed);

HashFamily FamilyFor(const SketchParams& params);

// Toggles cell (i, h(x), g(x, i)) for every position p and repetition i,
// where x = 2(p-1) + a_p.
HammingSketch Encode(const PackedBitString& a, const SketchParams& params);

// Encode with the hash table for the whole domain precomputed. Worth it when
// many strings share one family (one copy of a database).
class SketchEncoder {
 public:
  explicit SketchEncoder(const SketchParams& params);

  HammingSketch Encode(const PackedBitString& a) const;
  const SketchParams& params() const noexcept { return params_; }

 private:
  SketchParams params_;
  // cells_[x * m1 + i] = flat cell index toggled by symbol x in repetition i.
  std::vector<std::uint64_t> cells_;
};

// Randomized response on every cell with the params' flip probability.
HammingSketch Flip(HammingSketch sketch, double flip_prob, Rng& rng);

// The released Hamming-distance structure: only the noised sketch survives
// construction.
class DpHammingStructure {
 public:
  static DpHammingStructure Init(const PackedBitString& a, std::uint32_t k,
                                 double eps, const Seed& seed, Rng& rng);
  static DpHammingStructure Init(const PackedBitString& a,
                                 const SketchEncoder& encoder, Rng& rng);

  // Rebuilds a released structure (deserialization). kVolumeMismatch if the
  // tensor does not match params.
  static DpHammingStructure FromReleased(SketchParams params,
                                         HammingSketch noised);

  // Encodes b (never flipped) and evaluates the sketch distance.
  double Query(const PackedBitString& b) const;
  double QueryEncoded(const HammingSketch& b_sketch) const;

  const SketchParams& params() const noexcept { return params_; }
  const HammingSketch& noised_sketch() const noexcept { return noised_; }

 private:
  DpHammingStructure(SketchParams params, HammingSketch noised)
      : params_(std::move(params)), noised_(std::move(noised)) {}

  SketchParams params_;
  HammingSketch noised_;
};

}  // namespace dpsd

#endif  // DPSD_HAMMING_H_
