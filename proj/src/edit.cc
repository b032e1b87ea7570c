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

#include "dpsd/edit.h"

#include <algorithm>
#include <string>

#include "dpsd/error.h"

namespace dpsd {

LvTable::LvTable(std::uint32_t k)
    : k_(k),
      cells_(std::size_t{k + 1} * (2 * std::size_t{k} + 1), kUnreached) {}

std::size_t LvTable::Offset(std::uint32_t r, std::int32_t d) const {
  const auto k = static_cast<std::int32_t>(k_);
  if (r > k_ || d < -k || d > k) {
    throw Error(ErrorCode::kOutOfRange,
                "LV cell (" + std::to_string(r) + ", " + std::to_string(d) +
                    ") outside band k=" + std::to_string(k_));
  }
  return std::size_t{r} * (2 * std::size_t{k_} + 1) +
         static_cast<std::size_t>(d + k);
}

std::int64_t Extend(const LcpFunction& lcp, std::uint64_t n,
                    std::int64_t f_value, std::int32_t d,
                    std::uint64_t* calls) {
  if (f_value == LvTable::kUnreached) return LvTable::kUnreached;
  const auto sn = static_cast<std::int64_t>(n);
  if (f_value >= sn || f_value + d >= sn) return f_value;
  if (calls != nullptr) ++*calls;
  const std::uint64_t w = lcp(static_cast<std::uint64_t>(f_value + 1),
                              static_cast<std::uint64_t>(f_value + d + 1));
  return f_value + static_cast<std::int64_t>(w);
}

LvRun LandauVishkin(std::uint64_t n, std::uint32_t k, const LcpFunction& lcp,
                    bool stop_at_first) {
  LvRun run{LvTable(k), std::nullopt, 0};
  LvTable& f = run.table;
  const auto sn = static_cast<std::int64_t>(n);
  const auto band = static_cast<std::int32_t>(k);

  f.set(0, 0, Extend(lcp, n, 0, 0, &run.lcp_calls));
  f.rows_filled = 1;
  if (f.at(0, 0) >= sn) {
    run.distance = 0;
    if (stop_at_first) return run;
  }
  for (std::uint32_t r = 1; r <= k; ++r) {
    for (std::int32_t d = -band; d <= band; ++d) {
      std::int64_t reach = LvTable::kUnreached;
      // Substitution stays on d.
      if (const std::int64_t prev = f.at(r - 1, d);
          prev != LvTable::kUnreached) {
        reach = std::max(reach, prev + 1);
      }
      // Insertion arrives from d - 1 without consuming A.
      if (d - 1 >= -band) {
        if (const std::int64_t prev = f.at(r - 1, d - 1);
            prev != LvTable::kUnreached) {
          reach = std::max(reach, prev);
        }
      }
      // Deletion arrives from d + 1 consuming one A symbol.
      if (d + 1 <= band) {
        if (const std::int64_t prev = f.at(r - 1, d + 1);
            prev != LvTable::kUnreached) {
          reach = std::max(reach, prev + 1);
        }
      }
      if (reach == LvTable::kUnreached) continue;
      reach = std::min({reach, sn, sn - d});
      if (reach < 0 || reach + d < 0) continue;
      f.set(r, d, Extend(lcp, n, reach, d, &run.lcp_calls));
    }
    f.rows_filled = r + 1;
    if (!run.distance.has_value() && f.at(r, 0) >= sn) {
      run.distance = r;
      if (stop_at_first) return run;
    }
  }
  return run;
}

EditQueryResult EditQuery(const DyadicTree& a_tree, const QuerySide& query,
                          LcpBackend backend, bool stop_at_first) {
  const TreeParams& params = a_tree.params();
  const LcpFunction lcp = [&](std::uint64_t i, std::uint64_t j) {
    return LcpQuery(a_tree, query, i, j, backend).w_tilde;
  };
  LvRun run = LandauVishkin(params.true_length, params.k, lcp, stop_at_first);
  return {run.distance, run.lcp_calls, std::move(run.table)};
}

EditQueryResult EditQuery(const DyadicTree& a_tree, const PackedBitString& b,
                          LcpBackend backend) {
  const QuerySide query(a_tree.params(), b,
                        backend == LcpBackend::kTreeAligned);
  return EditQuery(a_tree, query, backend);
}

}  // namespace dpsd
