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

#ifndef DPSD_EDIT_H_
#define DPSD_EDIT_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dpsd/bitstring.h"
#include "dpsd/dyadic_tree.h"

namespace dpsd {

// Longest-common-extension oracle over 1-indexed positions (i in A, j in B),
// both within [1, n].
using LcpFunction = std::function<std::uint64_t(std::uint64_t, std::uint64_t)>;

// Landau-Vishkin furthest-reach table over edit count r in [0, k] and
// diagonal d = (B position) - (A position) in [-k, k]. An entry holds the
// number of A symbols consumed after sliding along the diagonal.
class LvTable {
 public:
  static constexpr std::int64_t kUnreached = -1;

  explicit LvTable(std::uint32_t k);

  std::uint32_t k() const noexcept { return k_; }
  std::int64_t at(std::uint32_t r, std::int32_t d) const {
    return cells_[Offset(r, d)];
  }
  void set(std::uint32_t r, std::int32_t d, std::int64_t v) {
    cells_[Offset(r, d)] = v;
  }
  // Rows [0, rows_filled) were computed.
  std::uint32_t rows_filled = 0;

 private:
  std::size_t Offset(std::uint32_t r, std::int32_t d) const;

  std::uint32_t k_;
  std::vector<std::int64_t> cells_;
};

// F + LCP(F + 1, F + d + 1): slides a furthest reach along diagonal d. At
// either string end the extension is empty. kUnreached passes through.
std::int64_t Extend(const LcpFunction& lcp, std::uint64_t n,
                    std::int64_t f_value, std::int32_t d,
                    std::uint64_t* calls = nullptr);

struct LvRun {
  LvTable table;
  std::optional<std::uint32_t> distance;  // nullopt: more than k edits
  std::uint64_t lcp_calls = 0;
};

// Banded diagonal DP with extensions supplied by `lcp`. With
// `stop_at_first` the fill ends at the first r with F(r, 0) = n; otherwise
// all k + 1 rows are filled (for side-by-side comparison).
LvRun LandauVishkin(std::uint64_t n, std::uint32_t k, const LcpFunction& lcp,
                    bool stop_at_first = true);

struct EditQueryResult {
  std::optional<std::uint32_t> distance;  // nullopt means TooFar
  std::uint64_t lcp_calls = 0;
  LvTable table{0};
};

// Private edit-distance estimate of b against the released tree of A, for
// the tree's cap k.
EditQueryResult EditQuery(const DyadicTree& a_tree, const QuerySide& query,
                          LcpBackend backend, bool stop_at_first = true);
EditQueryResult EditQuery(const DyadicTree& a_tree, const PackedBitString& b,
                          LcpBackend backend);

}  // namespace dpsd

#endif  // DPSD_EDIT_H_
