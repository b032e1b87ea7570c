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

#include <algorithm>
#include <chrono>
#include <ostream>

#include "dpsd/cli.h"
#include "dpsd/oracle.h"

namespace dpsd::cli {

namespace {

double MedianMs(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  return samples[(samples.size() - 1) / 2];
}

template <typename Fn>
double TimeMs(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

}  // namespace

BenchRow BenchPoint(const BenchConfig& config) {
  Rng data(DeriveSeed(config.seed, {kStreamData, config.n, config.m}));
  std::vector<PackedBitString> corpus;
  for (std::uint32_t s = 0; s < config.m; ++s) {
    corpus.push_back(oracle::RandomString(config.n, data));
  }
  const PackedBitString query = oracle::RandomString(config.n, data);

  BuildConfig build;
  build.k = config.k;
  build.eps_per_copy = config.eps;
  build.mode = config.mode;
  build.copies = config.copies;
  build.public_seed_master = config.seed;
  build.threads = config.threads;

  BenchRow row;
  row.mode = config.mode;
  row.n = config.n;
  row.m = config.m;
  row.k = config.k;
  row.copies = config.copies;

  const std::uint32_t repeats = std::max(1u, config.repeats);
  std::vector<double> build_ms;
  std::optional<SketchStore> store;
  for (std::uint32_t r = 0; r < repeats; ++r) {
    Rng noise(DeriveSeed(config.seed, {kStreamNoise, r}));
    store.reset();
    build_ms.push_back(
        TimeMs([&] { store.emplace(BuildStore(corpus, build, noise)); }));
  }
  row.build_ms = MedianMs(build_ms);
  row.store_bytes = Serialize(*store).size();

  QueryConfig qc;
  qc.backend = config.backend;
  qc.threads = config.threads;
  std::vector<double> query_ms;
  for (std::uint32_t r = 0; r < repeats; ++r) {
    std::vector<StringEstimate> estimates;
    query_ms.push_back(
        TimeMs([&] { estimates = QueryAllDetailed(*store, query, qc); }));
    row.lcp_calls = 0;
    for (const auto& e : estimates) row.lcp_calls += e.lcp_calls;
  }
  row.query_ms = MedianMs(query_ms);
  return row;
}

std::vector<BenchRow> RunBenchGrid(const BenchConfig& config) {
  std::vector<BenchRow> rows;
  for (const std::uint64_t n : {config.n, 2 * config.n}) {
    for (const std::uint32_t m : {config.m, 2 * config.m}) {
      for (const std::uint32_t k : {config.k, 2 * config.k}) {
        if (k > n) continue;
        BenchConfig point = config;
        point.n = n;
        point.m = m;
        point.k = k;
        rows.push_back(BenchPoint(point));
      }
    }
  }
  return rows;
}

void WriteBenchTsv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchTsvHeader << '\n';
  for (const BenchRow& r : rows) {
    out << StoreModeName(r.mode) << '\t' << r.n << '\t' << r.m << '\t' << r.k
        << '\t' << r.copies << '\t' << r.build_ms << '\t' << r.query_ms << '\t'
        << r.lcp_calls << '\t' << r.store_bytes << '\n';
  }
}

}  // namespace dpsd::cli
