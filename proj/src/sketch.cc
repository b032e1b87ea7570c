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

#include "dpsd/sketch.h"

#include <algorithm>
#include <bit>
#include <random>
#include <string>

#include "dpsd/error.h"

namespace dpsd {

namespace {

void RequireSameDims(const SketchDims& a, const SketchDims& b) {
  if (a != b) {
    throw Error(ErrorCode::kParamMismatch,
                "sketch dims " + std::to_string(a.m1) + "x" +
                    std::to_string(a.m2) + "x" + std::to_string(a.m3) + " vs " +
                    std::to_string(b.m1) + "x" + std::to_string(b.m2) + "x" +
                    std::to_string(b.m3));
  }
}

}  // namespace

HammingSketch::HammingSketch(SketchDims dims)
    : dims_(dims), words_((dims.volume() + 63) / 64, 0) {}

HammingSketch& HammingSketch::operator^=(const HammingSketch& other) {
  RequireSameDims(dims_, other.dims_);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

std::uint64_t HammingSketch::PopCount() const noexcept {
  std::uint64_t total = 0;
  for (const std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

std::uint64_t XorPopcountRange(std::span<const std::uint64_t> a,
                               std::span<const std::uint64_t> b,
                               std::uint64_t start, std::uint64_t length) {
  if (length == 0) return 0;
  const std::uint64_t end = start + length;  // exclusive
  std::uint64_t first = start >> 6;
  const std::uint64_t last = (end - 1) >> 6;
  const std::uint64_t head_mask = ~std::uint64_t{0} << (start & 63);
  const std::uint64_t tail_mask = (end & 63) == 0
                                      ? ~std::uint64_t{0}
                                      : (std::uint64_t{1} << (end & 63)) - 1;
  if (first == last) {
    return std::popcount((a[first] ^ b[first]) & head_mask & tail_mask);
  }
  std::uint64_t total = std::popcount((a[first] ^ b[first]) & head_mask);
  for (++first; first < last; ++first) {
    total += std::popcount(a[first] ^ b[first]);
  }
  total += std::popcount((a[last] ^ b[last]) & tail_mask);
  return total;
}

std::uint64_t CellDifference(const HammingSketch& a, const HammingSketch& b) {
  RequireSameDims(a.dims(), b.dims());
  std::uint64_t total = 0;
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t w = 0; w < wa.size(); ++w)
    total += std::popcount(wa[w] ^ wb[w]);
  return total;
}

double SketchDistance(const HammingSketch& a, const HammingSketch& b) {
  RequireSameDims(a.dims(), b.dims());
  const SketchDims& d = a.dims();
  std::uint64_t sum = 0;
  for (std::uint32_t j = 0; j < d.m2; ++j) {
    std::uint64_t best = 0;
    for (std::uint32_t i = 0; i < d.m1; ++i) {
      const std::uint64_t row = XorPopcountRange(
          a.words(), b.words(), HammingSketch::CellIndex(d, i, j, 0), d.m3);
      best = std::max(best, row);
    }
    sum += best;
  }
  return 0.5 * static_cast<double>(sum);
}

std::uint64_t FlipCells(HammingSketch& sketch, double q, Rng& rng) {
  return FlipBits(sketch.mutable_words(), sketch.volume(), q, rng);
}

std::uint64_t FlipBits(std::span<std::uint64_t> words, std::uint64_t volume,
                       double q, Rng& rng) {
  if (!(q >= 0.0 && q < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "flip probability " + std::to_string(q));
  }
  if (q == 0.0) return 0;
  std::geometric_distribution<std::uint64_t> gap(q);
  std::uint64_t flips = 0;
  std::uint64_t index = gap(rng);
  while (index < volume) {
    words[index >> 6] ^= std::uint64_t{1} << (index & 63);
    ++flips;
    const std::uint64_t skip = gap(rng);
    if (skip >= volume - index) break;
    index += skip + 1;
  }
  return flips;
}

}  // namespace dpsd
