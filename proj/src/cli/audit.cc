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

#include <cmath>

#include "dpsd/cli.h"
#include "dpsd/oracle.h"

namespace dpsd::cli {

AuditReport RunSensitivityAudit(const SketchParams& params,
                                std::uint64_t trials, Rng& rng,
                                const EncodeFn& encode) {
  std::optional<SketchEncoder> production;
  if (!encode) production.emplace(params);
  auto run_encode = [&](const PackedBitString& s) {
    return encode ? encode(s, params) : production->Encode(s);
  };

  AuditReport report;
  report.m1 = params.m1;
  report.eps = params.eps;
  report.flip_prob = params.flip_prob;
  report.trials = trials;
  report.bound = 2 * std::uint64_t{params.m1};
  std::uniform_int_distribution<std::uint64_t> position(0, params.n - 1);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const PackedBitString a = oracle::RandomString(params.n, rng);
    PackedBitString neighbor = a;
    const std::uint64_t p = position(rng);
    neighbor.set_bit(p, !a.bit(p));
    const std::uint64_t diff =
        CellDifference(run_encode(a), run_encode(neighbor));
    report.max_diff = std::max(report.max_diff, diff);
  }
  report.violated = report.max_diff > report.bound;
  if (params.flip_prob > 0.0) {
    const double per_cell =
        std::log((1.0 - params.flip_prob) / params.flip_prob);
    report.observed_eps = static_cast<double>(report.max_diff) * per_cell;
    report.worst_case_eps = static_cast<double>(report.bound) * per_cell;
  }
  return report;
}

SketchParams NodeFamilyParams(const TreeParams& tree) {
  SketchParams p;
  p.m1 = tree.m1;
  p.m2 = tree.m2;
  p.m3 = tree.m3;
  p.eps = tree.eps_node;
  p.flip_prob = tree.q_node;
  p.k = tree.k;
  p.n = tree.padded_length;
  p.seed = tree.seed;
  return p;
}

}  // namespace dpsd::cli
