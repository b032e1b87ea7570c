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

#include "dpsd/hamming.h"

#include <bit>
#include <cmath>
#include <string>

#include "dpsd/error.h"

namespace dpsd {

std::uint32_t CeilLog2(std::uint64_t x) {
  if (x <= 1) return 0;
  return static_cast<std::uint32_t>(std::bit_width(x - 1));
}

double FlipProbability(double eps, std::uint32_t m1) {
  if (!(eps > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "privacy budget must be positive, got " + std::to_string(eps));
  }
  if (std::isinf(eps)) return 0.0;
  return 1.0 / (1.0 + std::exp(eps / (2.0 * m1)));
}

SketchParams DefaultParams(std::uint32_t k, double eps, std::uint64_t n,
                           const Seed& seed) {
  if (k == 0 || n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "k and n must be positive");
  }
  if (k > n) {
    throw Error(ErrorCode::kKExceedsN,
                "k=" + std::to_string(k) + " > n=" + std::to_string(n));
  }
  const std::uint32_t log_k = std::max<std::uint32_t>(CeilLog2(k), 1);
  SketchParams p;
  p.m1 = 10 * log_k;
  p.m2 = 2 * k;
  p.m3 = 400 * log_k * log_k;
  p.eps = eps;
  p.flip_prob = FlipProbability(eps, p.m1);
  p.k = k;
  p.n = n;
  p.seed = seed;
  return p;
}

HashFamily FamilyFor(const SketchParams& params) {
  return HashFamily(params.seed, 2 * params.n, params.m1, params.m2, params.m3);
}

namespace {

void RequireLength(const PackedBitString& a, const SketchParams& params) {
  if (a.length() != params.n) {
    throw Error(ErrorCode::kLengthMismatch,
                "string length " + std::to_string(a.length()) +
                    " vs sketch n=" + std::to_string(params.n));
  }
}

}  // namespace

HammingSketch Encode(const PackedBitString& a, const SketchParams& params) {
  RequireLength(a, params);
  const HashFamily family = FamilyFor(params);
  const SketchDims dims = params.dims();
  HammingSketch sketch(dims);
  for (std::uint64_t p = 1; p <= params.n; ++p) {
    const std::uint64_t x = EncodeSymbol(p, a.bit(p - 1));
    const std::uint32_t j = family.H(x) - 1;
    for (std::uint32_t i = 1; i <= params.m1; ++i) {
      sketch.Toggle(i - 1, j, family.G(x, i) - 1);
    }
  }
  return sketch;
}

SketchEncoder::SketchEncoder(const SketchParams& params)
    : params_(params), cells_(2 * params.n * params.m1) {
  const HashFamily family = FamilyFor(params);
  const SketchDims dims = params.dims();
  for (std::uint64_t x = 0; x < 2 * params.n; ++x) {
    const std::uint32_t j = family.H(x) - 1;
    for (std::uint32_t i = 1; i <= params.m1; ++i) {
      cells_[x * params.m1 + (i - 1)] =
          HammingSketch::CellIndex(dims, i - 1, j, family.G(x, i) - 1);
    }
  }
}

HammingSketch SketchEncoder::Encode(const PackedBitString& a) const {
  RequireLength(a, params_);
  HammingSketch sketch(params_.dims());
  const std::uint32_t m1 = params_.m1;
  for (std::uint64_t p = 1; p <= params_.n; ++p) {
    const std::uint64_t x = EncodeSymbol(p, a.bit(p - 1));
    const std::uint64_t* row = &cells_[x * m1];
    for (std::uint32_t i = 0; i < m1; ++i) sketch.ToggleIndex(row[i]);
  }
  return sketch;
}

HammingSketch Flip(HammingSketch sketch, double flip_prob, Rng& rng) {
  FlipCells(sketch, flip_prob, rng);
  return sketch;
}

DpHammingStructure DpHammingStructure::Init(const PackedBitString& a,
                                            std::uint32_t k, double eps,
                                            const Seed& seed, Rng& rng) {
  SketchParams params = DefaultParams(k, eps, a.length(), seed);
  HammingSketch noised = Flip(dpsd::Encode(a, params), params.flip_prob, rng);
  return DpHammingStructure(std::move(params), std::move(noised));
}

DpHammingStructure DpHammingStructure::Init(const PackedBitString& a,
                                            const SketchEncoder& encoder,
                                            Rng& rng) {
  HammingSketch noised =
      Flip(encoder.Encode(a), encoder.params().flip_prob, rng);
  return DpHammingStructure(encoder.params(), std::move(noised));
}

DpHammingStructure DpHammingStructure::FromReleased(SketchParams params,
                                                    HammingSketch noised) {
  if (noised.dims() != params.dims()) {
    throw Error(ErrorCode::kVolumeMismatch,
                "released tensor does not match sketch parameters");
  }
  return DpHammingStructure(std::move(params), std::move(noised));
}

double DpHammingStructure::Query(const PackedBitString& b) const {
  return QueryEncoded(dpsd::Encode(b, params_));
}

double DpHammingStructure::QueryEncoded(const HammingSketch& b_sketch) const {
  return SketchDistance(noised_, b_sketch);
}

}  // namespace dpsd
