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

#ifndef DPSD_CLI_H_
#define DPSD_CLI_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dpsd/bitstring.h"
#include "dpsd/dyadic_tree.h"
#include "dpsd/hamming.h"
#include "dpsd/store.h"

namespace dpsd::cli {

// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitAuditViolation = 3,
};

// Entry point of the `dpsd` tool: gen | build | query | audit | bench.
int Run(int argc, char** argv, std::ostream& out, std::ostream& err);

// Parses a privacy budget; accepts "inf" / "infinity".
double ParseEps(const std::string& text);

// Worker count: explicit flag, else DPSD_THREADS, else hardware threads.
unsigned ResolveThreads(std::optional<unsigned> flag);

// ---- audit -----------------------------------------------------------------

using EncodeFn =
    std::function<HammingSketch(const PackedBitString&, const SketchParams&)>;

struct AuditReport {
  std::uint32_t m1 = 0;
  double eps = 0.0;
  double flip_prob = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t max_diff = 0;
  std::uint64_t bound = 0;  // 2 * M1
  bool violated = false;
  // max_diff * ln((1-q)/q) and the worst case 2 M1 ln((1-q)/q); absent when
  // q = 0 (no randomized response, no ratio bound).
  std::optional<double> observed_eps;
  std::optional<double> worst_case_eps;
};

// Draws `trials` random neighbor pairs (one position inverted) and records
// the largest number of sketch cells in which their encodings differ.
// `encode` defaults to the production encoder; tests pass broken ones.
AuditReport RunSensitivityAudit(const SketchParams& params,
                                std::uint64_t trials, Rng& rng,
                                const EncodeFn& encode = nullptr);

// Audit parameters for the node family of an edit store.
SketchParams NodeFamilyParams(const TreeParams& tree);

// ---- bench -----------------------------------------------------------------

struct BenchConfig {
  StoreMode mode = StoreMode::kHamming;
  std::uint64_t n = 256;
  std::uint32_t m = 4;
  std::uint32_t k = 4;
  double eps = 1e9;
  std::uint32_t copies = 1;
  std::uint32_t repeats = 5;
  LcpBackend backend = LcpBackend::kWindowEncode;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct BenchRow {
  StoreMode mode = StoreMode::kHamming;
  std::uint64_t n = 0;
  std::uint32_t m = 0;
  std::uint32_t k = 0;
  std::uint32_t copies = 0;
  double build_ms = 0.0;  // median over repeats
  double query_ms = 0.0;  // median over repeats
  std::uint64_t lcp_calls = 0;
  std::uint64_t store_bytes = 0;
};

// Times one (n, m, k) point.
BenchRow BenchPoint(const BenchConfig& config);
// The doubling grid n x {1,2}, m x {1,2}, k x {1,2} around config.
std::vector<BenchRow> RunBenchGrid(const BenchConfig& config);

inline constexpr const char* kBenchTsvHeader =
    "mode\tn\tm\tk\tcopies\tbuild_ms\tquery_ms\tlcp_calls\tstore_bytes";
void WriteBenchTsv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace dpsd::cli

#endif  // DPSD_CLI_H_
