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

#include "dpsd/oracle.h"

#include <algorithm>
#include <string>
#include <vector>

#include "dpsd/error.h"

namespace dpsd::oracle {

std::size_t ExactHamming(const PackedBitString& a, const PackedBitString& b) {
  return HammingPopcount(a, b);
}

std::uint64_t ExactLcp(const PackedBitString& a, std::uint64_t i,
                       const PackedBitString& b, std::uint64_t j) {
  if (i == 0 || j == 0 || i > a.length() + 1 || j > b.length() + 1) {
    throw Error(ErrorCode::kOutOfRange, "LCP positions (" + std::to_string(i) +
                                            ", " + std::to_string(j) + ")");
  }
  std::uint64_t w = 0;
  while (i + w <= a.length() && j + w <= b.length() &&
         a.bit(i + w - 1) == b.bit(j + w - 1)) {
    ++w;
  }
  return w;
}

std::optional<std::uint32_t> ExactEdit(const PackedBitString& a,
                                       const PackedBitString& b,
                                       std::uint32_t k) {
  if (a.length() != b.length()) {
    throw Error(
        ErrorCode::kLengthMismatch,
        std::to_string(a.length()) + " vs " + std::to_string(b.length()));
  }
  const auto n = static_cast<std::int64_t>(a.length());
  const auto band = static_cast<std::int64_t>(k);
  const std::uint32_t inf = k + 1;
  const std::size_t width = 2 * static_cast<std::size_t>(k) + 1;
  // Row i keeps D(i, i + off - k) for off in [0, 2k].
  std::vector<std::uint32_t> prev(width, inf), cur(width, inf);
  auto cell = [&](const std::vector<std::uint32_t>& row, std::int64_t i,
                  std::int64_t j) -> std::uint32_t {
    const std::int64_t off = j - i + band;
    if (off < 0 || off >= static_cast<std::int64_t>(width) || j < 0 || j > n) {
      return inf;
    }
    return row[static_cast<std::size_t>(off)];
  };
  for (std::int64_t j = 0; j <= std::min(n, band); ++j) {
    prev[static_cast<std::size_t>(j + band)] = static_cast<std::uint32_t>(j);
  }
  for (std::int64_t i = 1; i <= n; ++i) {
    std::fill(cur.begin(), cur.end(), inf);
    for (std::int64_t j = std::max<std::int64_t>(0, i - band);
         j <= std::min(n, i + band); ++j) {
      std::uint32_t best;
      if (j == 0) {
        best = static_cast<std::uint32_t>(std::min<std::int64_t>(i, inf));
      } else {
        const std::uint32_t sub =
            cell(prev, i - 1, j - 1) +
            (a.bit(static_cast<std::size_t>(i - 1)) !=
                     b.bit(static_cast<std::size_t>(j - 1))
                 ? 1u
                 : 0u);
        const std::uint32_t del = cell(prev, i - 1, j) + 1;
        const std::uint32_t ins = cell(cur, i, j - 1) + 1;
        best = std::min({sub, del, ins});
      }
      cur[static_cast<std::size_t>(j - i + band)] = std::min(best, inf);
    }
    std::swap(prev, cur);
  }
  const std::uint32_t result = cell(prev, n, n);
  if (result > k) return std::nullopt;
  return result;
}

std::uint64_t ExactEditFull(const PackedBitString& a,
                            const PackedBitString& b) {
  const std::size_t n = a.length();
  const std::size_t m = b.length();
  std::vector<std::uint64_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint64_t sub = prev[j - 1] + (a.bit(i - 1) != b.bit(j - 1));
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

PackedBitString RandomString(std::uint64_t n, Rng& rng) {
  PackedBitString s(n);
  for (std::uint64_t t = 0; t < n; ++t) s.set_bit(t, (rng() >> 63) != 0);
  return s;
}

PackedBitString FlipRandomPositions(const PackedBitString& base,
                                    std::uint64_t d, Rng& rng) {
  const std::uint64_t n = base.length();
  if (d > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot flip " + std::to_string(d) + " of " +
                    std::to_string(n) + " positions");
  }
  PackedBitString out = base;
  std::vector<std::uint64_t> positions(n);
  for (std::uint64_t t = 0; t < n; ++t) positions[t] = t;
  // Partial Fisher-Yates: the first d entries are a uniform d-subset.
  for (std::uint64_t t = 0; t < d; ++t) {
    std::uniform_int_distribution<std::uint64_t> pick(t, n - 1);
    std::swap(positions[t], positions[pick(rng)]);
    out.set_bit(positions[t], !base.bit(positions[t]));
  }
  return out;
}

PackedBitString ApplyRandomEdits(const PackedBitString& base, std::uint32_t d,
                                 Rng& rng) {
  const std::uint64_t n = base.length();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty base string");
  std::vector<bool> b(n);
  for (std::uint64_t t = 0; t < n; ++t) b[t] = base.bit(t);
  std::uniform_int_distribution<std::uint64_t> pos(0, n - 1);
  std::uint32_t budget = d;
  while (budget > 0) {
    if (budget >= 2 && (rng() & 1) != 0) {
      b.erase(b.begin() + static_cast<std::ptrdiff_t>(pos(rng)));
      b.insert(b.begin() + static_cast<std::ptrdiff_t>(pos(rng)),
               (rng() & 1) != 0);
      budget -= 2;
    } else {
      const std::uint64_t p = pos(rng);
      b[p] = !b[p];
      budget -= 1;
    }
  }
  PackedBitString out(n);
  for (std::uint64_t t = 0; t < n; ++t) out.set_bit(t, b[t]);
  return out;
}

std::pair<PackedBitString, PackedBitString> PlantHammingPair(std::uint64_t n,
                                                             std::uint64_t d,
                                                             Rng& rng) {
  if (n == 0 || d > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot plant distance " + std::to_string(d) + " in length " +
                    std::to_string(n));
  }
  PackedBitString a = RandomString(n, rng);
  PackedBitString b = FlipRandomPositions(a, d, rng);
  return {std::move(a), std::move(b)};
}

PlantedEditPair PlantEditPair(std::uint64_t n, std::uint32_t d, Rng& rng,
                              bool exact) {
  if (n == 0 || d > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot plant edit distance " + std::to_string(d) +
                    " in length " + std::to_string(n));
  }
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    PackedBitString a = RandomString(n, rng);
    PackedBitString b = ApplyRandomEdits(a, d, rng);
    const std::optional<std::uint32_t> dist = ExactEdit(a, b, d);
    if (!dist.has_value()) continue;
    if (exact && *dist != d) continue;
    return {std::move(a), std::move(b), *dist};
  }
  throw Error(ErrorCode::kInvalidArgument,
              "could not plant edit distance " + std::to_string(d));
}

}  // namespace dpsd::oracle
