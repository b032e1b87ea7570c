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

#ifndef DPSD_SKETCH_H_
#define DPSD_SKETCH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dpsd/random.h"

namespace dpsd {

struct SketchDims {
  std::uint32_t m1 = 1;  // repetitions
  std::uint32_t m2 = 1;  // buckets
  std::uint32_t m3 = 1;  // cells per (repetition, bucket) row

  std::uint64_t volume() const noexcept { return std::uint64_t{m1} * m2 * m3; }
  friend bool operator==(const SketchDims&, const SketchDims&) = default;
};

// An M1 x M2 x M3 bit tensor. Cell (i, j, c), 0-indexed, is bit
// (i * M2 + j) * M3 + c of the packed word vector, so c varies fastest.
class HammingSketch {
 public:
  HammingSketch() = default;
  explicit HammingSketch(SketchDims dims);

  const SketchDims& dims() const noexcept { return dims_; }
  std::uint64_t volume() const noexcept { return dims_.volume(); }

  static std::uint64_t CellIndex(const SketchDims& d, std::uint32_t i,
                                 std::uint32_t j, std::uint32_t c) noexcept {
    return (std::uint64_t{i} * d.m2 + j) * d.m3 + c;
  }

  bool Get(std::uint32_t i, std::uint32_t j, std::uint32_t c) const noexcept {
    return GetIndex(CellIndex(dims_, i, j, c));
  }
  bool GetIndex(std::uint64_t index) const noexcept {
    return (words_[index >> 6] >> (index & 63)) & 1u;
  }
  void Toggle(std::uint32_t i, std::uint32_t j, std::uint32_t c) noexcept {
    ToggleIndex(CellIndex(dims_, i, j, c));
  }
  void ToggleIndex(std::uint64_t index) noexcept {
    words_[index >> 6] ^= std::uint64_t{1} << (index & 63);
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> mutable_words() noexcept { return words_; }

  // Cellwise XOR; kParamMismatch if dims differ.
  HammingSketch& operator^=(const HammingSketch& other);

  std::uint64_t PopCount() const noexcept;

  friend bool operator==(const HammingSketch&, const HammingSketch&) = default;

 private:
  SketchDims dims_;
  std::vector<std::uint64_t> words_;
};

// popcount(a ^ b) over bit range [start, start + length).
std::uint64_t XorPopcountRange(std::span<const std::uint64_t> a,
                               std::span<const std::uint64_t> b,
                               std::uint64_t start, std::uint64_t length);

// Number of cells in which the two tensors differ.
std::uint64_t CellDifference(const HammingSketch& a, const HammingSketch& b);

// 0.5 * sum_j max_i sum_c |a(i,j,c) - b(i,j,c)|. kParamMismatch if dims
// differ.
double SketchDistance(const HammingSketch& a, const HammingSketch& b);

// Inverts every cell independently with probability q in [0, 1). Gaps
// between flipped cells are drawn from Geometric(q), which yields the same
// joint law as one Bernoulli(q) draw per cell. Returns the number of flips.
std::uint64_t FlipCells(HammingSketch& sketch, double q, Rng& rng);

// Same mechanism over the first `volume` bits of a raw word buffer.
std::uint64_t FlipBits(std::span<std::uint64_t> words, std::uint64_t volume,
                       double q, Rng& rng);

}  // namespace dpsd

#endif  // DPSD_SKETCH_H_
