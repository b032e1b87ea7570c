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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. `acceptance N` runs criterion N alone.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dpsd/bitstring.h"
#include "dpsd/cli.h"
#include "dpsd/dyadic_tree.h"
#include "dpsd/edit.h"
#include "dpsd/error.h"
#include "dpsd/hamming.h"
#include "dpsd/oracle.h"
#include "dpsd/random.h"
#include "dpsd/sketch.h"
#include "dpsd/store.h"

namespace dpsd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Base of every seed used below; the suite is deterministic.
constexpr std::uint64_t kSuiteSeed = 0x5eed2026;

// Per-criterion runtime caps, seconds.
constexpr double kCap1 = 30, kCap2 = 60, kCap3 = 60, kCap4 = 60, kCap5 = 60,
                 kCap6 = 120, kCap7 = 120, kCap9 = 60, kCap10 = 300,
                 kCap11 = 120, kCap12 = 60;

// Flip probability used by every finite-eps tree experiment (5, 7, 8). The
// tree threshold 1.5 * M1 * M3 * q must exceed the noise of an unflipped
// window (below q ~ 0.005 at n = 256 a single flipped cell rejects) and stay
// under 5, half a row of M3 = 10 cells, or every candidate is accepted.
constexpr double kTreeFlip = 0.01;
constexpr std::uint64_t kTreeN = 256;
constexpr std::uint32_t kTreeK = 16;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double cap_seconds;
  std::function<Outcome()> run;
};

std::string Fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), format, args...);
  return buffer;
}

double Fraction(std::uint64_t hits, std::uint64_t total) {
  return total == 0 ? 0.0
                    : static_cast<double>(hits) / static_cast<double>(total);
}

// eps giving flip probability q at repetition count m1.
double EpsForFlip(double q, std::uint32_t m1) {
  return 2.0 * m1 * std::log((1.0 - q) / q);
}

// eps whose per-node share gives node flip probability q.
double TreeEpsForFlip(double q, std::uint64_t n, std::uint32_t k) {
  const TreeParams p = MakeTreeParams(n, k, 1.0, Seed{});
  return EpsForFlip(q, p.m1) * (p.depth + 1);
}

// 1. Encode-tensor diff of neighbors is at most 2 * M1.
Outcome SensitivityBound() {
  constexpr std::uint64_t kN = 1024;
  constexpr int kPairs = 1000;
  Rng rng(DeriveSeed(kSuiteSeed, {1}));
  std::uniform_int_distribution<std::uint64_t> position(0, kN - 1);
  Outcome out{true, ""};
  for (const std::uint32_t k : {2u, 8u, 16u}) {
    const SketchParams params =
        DefaultParams(k, kInf, kN, DerivePublicSeed(kSuiteSeed, k));
    const SketchEncoder encoder(params);
    std::uint64_t worst = 0;
    int within = 0;
    for (int t = 0; t < kPairs; ++t) {
      const PackedBitString a = oracle::RandomString(kN, rng);
      PackedBitString b = a;
      const std::uint64_t p = position(rng);
      b.set_bit(p, !a.bit(p));
      const std::uint64_t diff =
          CellDifference(encoder.Encode(a), encoder.Encode(b));
      worst = std::max(worst, diff);
      within += diff <= 2 * std::uint64_t{params.m1};
    }
    out.pass = out.pass && within == kPairs;
    out.detail +=
        Fmt("k=%u: %d/%d within, max diff %llu <= %u; ", k, within, kPairs,
            static_cast<unsigned long long>(worst), 2 * params.m1);
  }
  return out;
}

// 2. Noiseless Hamming query equals the oracle for planted distance <= k.
Outcome NoiselessHamming() {
  constexpr std::uint64_t kN = 1024;
  constexpr std::uint32_t kK = 16;
  constexpr int kTrials = 500;
  constexpr double kRequired = 0.95;
  Rng rng(DeriveSeed(kSuiteSeed, {2}));
  int exact = 0;
  for (int t = 0; t < kTrials; ++t) {
    const std::uint64_t d = rng() % (kK + 1);
    const auto [a, b] = oracle::PlantHammingPair(kN, d, rng);
    const SketchEncoder encoder(
        DefaultParams(kK, kInf, kN, DerivePublicSeed(kSuiteSeed + 2, t)));
    const DpHammingStructure ds = DpHammingStructure::Init(a, encoder, rng);
    exact += ds.QueryEncoded(encoder.Encode(b)) ==
             static_cast<double>(oracle::ExactHamming(a, b));
  }
  const double rate = Fraction(exact, kTrials);
  return {rate >= kRequired, Fmt("%d/%d exact (%.3f, need >= %.2f)", exact,
                                 kTrials, rate, kRequired)};
}

// 3. Mean |z~ - z| at q = 0.01 lies in [0.1, 4] * M1 * M2 * M3 * q.
Outcome HammingNoiseBand() {
  constexpr std::uint64_t kN = 1024;
  constexpr std::uint32_t kK = 16;
  constexpr int kDraws = 200;
  constexpr double kQ = 0.01;
  constexpr double kLower = 0.1, kUpper = 4.0;
  Rng rng(DeriveSeed(kSuiteSeed, {3}));
  const SketchParams params =
      DefaultParams(kK, EpsForFlip(kQ, DefaultParams(kK, kInf, kN, Seed{}).m1),
                    kN, DerivePublicSeed(kSuiteSeed, 3));
  const SketchEncoder encoder(params);
  const auto [a, b] = oracle::PlantHammingPair(kN, 8, rng);
  const double z = static_cast<double>(oracle::ExactHamming(a, b));
  const HammingSketch b_sketch = encoder.Encode(b);
  double total = 0.0;
  for (int t = 0; t < kDraws; ++t) {
    const DpHammingStructure ds = DpHammingStructure::Init(a, encoder, rng);
    total += std::abs(ds.QueryEncoded(b_sketch) - z);
  }
  const double mean = total / kDraws;
  const double unit =
      static_cast<double>(params.m1) * params.m2 * params.m3 * params.flip_prob;
  const bool pass = mean <= kUpper * unit && mean >= kLower * unit;
  return {pass, Fmt("q=%.4f mean |z~-z| = %.1f, M1*M2*M3*q = %.1f, ratio %.4f "
                    "(need [%.1f, %.1f])",
                    params.flip_prob, mean, unit, mean / unit, kLower, kUpper)};
}

// 4. Noiseless window-encode LCP equals the oracle on an exhaustive grid.
Outcome NoiselessLcp() {
  constexpr std::uint64_t kN = 64;
  constexpr int kPairs = 20;
  constexpr double kRequiredAll = 0.99;
  Rng rng(DeriveSeed(kSuiteSeed, {4}));
  std::uint64_t aligned = 0, aligned_ok = 0, all = 0, all_ok = 0;
  for (int pair = 0; pair < kPairs; ++pair) {
    const PackedBitString a = oracle::RandomString(kN, rng);
    // Half independent, half edited copies so long extensions occur.
    const PackedBitString b =
        pair % 2 == 0 ? oracle::RandomString(kN, rng)
                      : oracle::ApplyRandomEdits(a, 1 + pair % 5, rng);
    const TreeParams params =
        MakeTreeParams(kN, 4, kInf, DerivePublicSeed(kSuiteSeed + 4, pair));
    const DyadicTree tree = DyadicTree::Build(a, params, nullptr);
    const QuerySide query(params, b, false);
    for (std::uint64_t i = 1; i <= kN; ++i) {
      for (std::uint64_t j = 1; j <= kN; ++j) {
        const bool ok =
            LcpQuery(tree, query, i, j, LcpBackend::kWindowEncode).w_tilde ==
            oracle::ExactLcp(a, i, b, j);
        ++all;
        all_ok += ok;
        if (i == j) {
          ++aligned;
          aligned_ok += ok;
        }
      }
    }
  }
  const double rate = Fraction(all_ok, all);
  return {aligned_ok == aligned && rate >= kRequiredAll,
          Fmt("aligned %llu/%llu, all %llu/%llu (%.4f, need >= %.2f)",
              static_cast<unsigned long long>(aligned_ok),
              static_cast<unsigned long long>(aligned),
              static_cast<unsigned long long>(all_ok),
              static_cast<unsigned long long>(all), rate, kRequiredAll)};
}

// 5. Finite-eps LCP over-extends: w~ >= w.
Outcome LcpOverExtension() {
  constexpr int kQueries = 1000;
  constexpr int kPairs = 50;
  constexpr double kRequired = 0.99;
  Rng rng(DeriveSeed(kSuiteSeed, {5}));
  const double eps = TreeEpsForFlip(kTreeFlip, kTreeN, kTreeK);
  int ok = 0;
  int strict = 0;
  for (int pair = 0; pair < kPairs; ++pair) {
    const auto planted = oracle::PlantEditPair(kTreeN, 1 + pair % kTreeK, rng);
    const TreeParams params = MakeTreeParams(
        kTreeN, kTreeK, eps, DerivePublicSeed(kSuiteSeed + 5, pair));
    const DyadicTree tree = DyadicTree::Build(planted.a, params, &rng);
    const QuerySide query(params, planted.b, false);
    std::uniform_int_distribution<std::uint64_t> pos(1, kTreeN);
    std::uniform_int_distribution<std::int64_t> diag(-std::int64_t{kTreeK},
                                                     kTreeK);
    for (int q = 0; q < kQueries / kPairs; ++q) {
      std::uint64_t i = 0;
      std::int64_t j = 0;
      do {
        i = pos(rng);
        j = static_cast<std::int64_t>(i) + diag(rng);
      } while (j < 1 || j > static_cast<std::int64_t>(kTreeN));
      const auto ju = static_cast<std::uint64_t>(j);
      const std::uint64_t w = oracle::ExactLcp(planted.a, i, planted.b, ju);
      const std::uint64_t w_tilde =
          LcpQuery(tree, query, i, ju, LcpBackend::kWindowEncode).w_tilde;
      ok += w_tilde >= w;
      strict += w_tilde > w;
    }
  }
  const double rate = Fraction(ok, kQueries);
  return {rate >= kRequired,
          Fmt("q_node=%.3f eps=%.0f: w~ >= w in %d/%d (%.3f, need >= %.2f); "
              "strictly over in %d",
              kTreeFlip, eps, ok, kQueries, rate, kRequired, strict)};
}

// 6. Noiseless edit query equals the oracle.
Outcome NoiselessEdit() {
  constexpr std::uint64_t kN = 256;
  constexpr std::uint32_t kK = 16;
  constexpr int kTrials = 300;
  constexpr double kRequired = 0.99;
  Rng rng(DeriveSeed(kSuiteSeed, {6}));
  int exact = 0;
  for (int t = 0; t < kTrials; ++t) {
    const auto planted = oracle::PlantEditPair(
        kN, static_cast<std::uint32_t>(rng() % (kK + 1)), rng);
    const DyadicTree tree = DyadicTree::Build(
        planted.a, kK, kInf, DerivePublicSeed(kSuiteSeed + 6, t), rng);
    const EditQueryResult got =
        EditQuery(tree, planted.b, LcpBackend::kWindowEncode);
    exact += got.distance == oracle::ExactEdit(planted.a, planted.b, kK);
  }
  const double rate = Fraction(exact, kTrials);
  return {rate >= kRequired, Fmt("%d/%d exact (%.3f, need >= %.2f)", exact,
                                 kTrials, rate, kRequired)};
}

// Shared by criteria 7 and 8.
struct EditTrials {
  int trials = 0;
  int under = 0;  // r~ <= r
  std::uint64_t cells = 0;
  std::uint64_t dominated = 0;  // F(r, d) >= F'(r, d)
  int in_band = 0;              // r <= r~ (1 + 4 M1 M3 q)
  double band_factor = 0.0;
};

const EditTrials& RunEditTrials() {
  static const EditTrials result = [] {
    constexpr int kTrials = 300;
    constexpr std::uint32_t kMinDistance = 8;
    Rng rng(DeriveSeed(kSuiteSeed, {7}));
    const double eps = TreeEpsForFlip(kTreeFlip, kTreeN, kTreeK);
    EditTrials r;
    for (int t = 0; t < kTrials; ++t) {
      const std::uint32_t d = kMinDistance + static_cast<std::uint32_t>(t) %
                                                 (kTreeK - kMinDistance + 1);
      const auto planted =
          oracle::PlantEditPair(kTreeN, d, rng, /*exact=*/true);
      const TreeParams params = MakeTreeParams(
          kTreeN, kTreeK, eps, DerivePublicSeed(kSuiteSeed + 7, t));
      const DyadicTree tree = DyadicTree::Build(planted.a, params, &rng);
      const QuerySide query(params, planted.b, false);
      const EditQueryResult noisy = EditQuery(
          tree, query, LcpBackend::kWindowEncode, /*stop_at_first=*/false);
      const LvRun exact = LandauVishkin(
          kTreeN, kTreeK,
          [&](std::uint64_t i, std::uint64_t j) {
            return oracle::ExactLcp(planted.a, i, planted.b, j);
          },
          /*stop_at_first=*/false);
      const std::uint32_t r_true = planted.distance;
      const std::uint32_t r_tilde = noisy.distance.value_or(kTreeK + 1);
      r.band_factor = 1.0 + 4.0 * params.m1 * params.m3 * params.q_node;
      ++r.trials;
      r.under += r_tilde <= r_true;
      r.in_band += r_true <= r_tilde * r.band_factor;
      const auto band = static_cast<std::int32_t>(kTreeK);
      for (std::uint32_t row = 0; row <= kTreeK; ++row) {
        for (std::int32_t diag = -band; diag <= band; ++diag) {
          ++r.cells;
          r.dominated += noisy.table.at(row, diag) >= exact.table.at(row, diag);
        }
      }
    }
    return r;
  }();
  return result;
}

// 7. Finite-eps edit distance underestimates, and the noisy LV table
// dominates the exact one cell by cell.
Outcome EditUnderestimate() {
  constexpr double kRequired = 0.99;
  const EditTrials& r = RunEditTrials();
  const double rate = Fraction(r.under, r.trials);
  return {
      rate >= kRequired && r.dominated == r.cells,
      Fmt("r~ <= r in %d/%d (%.3f, need >= %.2f); F >= F' in %llu/%llu cells",
          r.under, r.trials, rate, kRequired,
          static_cast<unsigned long long>(r.dominated),
          static_cast<unsigned long long>(r.cells))};
}

// 8. r <= r~ (1 + 4 M1 M3 q_node) on the trials of criterion 7.
Outcome EditErrorBand() {
  constexpr double kRequired = 0.95;
  const EditTrials& r = RunEditTrials();
  const double rate = Fraction(r.in_band, r.trials);
  return {rate >= kRequired,
          Fmt("factor %.2f: in band %d/%d (%.3f, need >= %.2f)", r.band_factor,
              r.in_band, r.trials, rate, kRequired)};
}

// 9. i1 + LCP(i1, i1 + d) <= i2 + LCP(i2, i2 + d) for i1 <= i2.
Outcome Monotonicity() {
  constexpr int kTriples = 10000;
  constexpr std::uint64_t kN = 128;
  constexpr std::int64_t kMaxShift = 16;
  Rng rng(DeriveSeed(kSuiteSeed, {9}));
  int ok = 0;
  PackedBitString a, b;
  for (int t = 0; t < kTriples; ++t) {
    if (t % 100 == 0) {
      a = oracle::RandomString(kN, rng);
      b = oracle::ApplyRandomEdits(a, static_cast<std::uint32_t>(rng() % 12),
                                   rng);
    }
    const std::int64_t d =
        static_cast<std::int64_t>(rng() % (2 * kMaxShift + 1)) - kMaxShift;
    // Valid i: 1 <= i <= n + 1 and 1 <= i + d <= n + 1.
    const std::int64_t lo = std::max<std::int64_t>(1, 1 - d);
    const std::int64_t hi = std::min<std::int64_t>(kN + 1, kN + 1 - d);
    std::uniform_int_distribution<std::int64_t> pick(lo, hi);
    std::int64_t i1 = pick(rng);
    std::int64_t i2 = pick(rng);
    if (i1 > i2) std::swap(i1, i2);
    const auto reach = [&](std::int64_t i) {
      return static_cast<std::uint64_t>(i) +
             oracle::ExactLcp(a, static_cast<std::uint64_t>(i), b,
                              static_cast<std::uint64_t>(i + d));
    };
    ok += reach(i1) <= reach(i2);
  }
  return {ok == kTriples, Fmt("%d/%d triples monotone", ok, kTriples)};
}

// 10. Median amplification keeps every estimate in band.
Outcome Amplification() {
  constexpr std::uint64_t kN = 256;
  constexpr std::uint32_t kK = 4;
  constexpr std::uint32_t kM = 20;
  constexpr double kBeta = 0.05;
  constexpr int kRebuilds = 100;
  constexpr double kQ = 0.01;
  constexpr double kRequired = 0.95;
  Rng rng(DeriveSeed(kSuiteSeed, {10}));
  const SketchParams unit_params = DefaultParams(kK, kInf, kN, Seed{});
  const double eps = EpsForFlip(kQ, unit_params.m1);
  // Lemma-level band: the expected noise M1 * M2 * M3 * q. At eps = inf the
  // band is 0, i.e. exactness.
  const double band = static_cast<double>(unit_params.m1) * unit_params.m2 *
                      unit_params.m3 * kQ;
  const std::uint32_t copies = CopiesFor(kM, kBeta);
  constexpr std::uint32_t kPrefixes[] = {1, 5, 15};

  int all_in_band = 0;
  int fail_finite[3] = {0, 0, 0};
  int fail_exact[3] = {0, 0, 0};
  for (int rebuild = 0; rebuild < kRebuilds; ++rebuild) {
    const PackedBitString b = oracle::RandomString(kN, rng);
    std::vector<PackedBitString> corpus;
    std::vector<double> truth;
    for (std::uint32_t s = 0; s < kM; ++s) {
      corpus.push_back(oracle::FlipRandomPositions(b, rng() % (kK + 1), rng));
      truth.push_back(
          static_cast<double>(oracle::ExactHamming(corpus.back(), b)));
    }
    const auto in_band = [&](const std::vector<StringEstimate>& est,
                             std::uint32_t prefix, double width) {
      for (std::uint32_t s = 0; s < kM; ++s) {
        const std::vector<double> head(est[s].per_copy.begin(),
                                       est[s].per_copy.begin() + prefix);
        const double value = prefix == est[s].per_copy.size()
                                 ? est[s].estimate
                                 : LowerMedian(head);
        if (std::abs(value - truth[s]) > width) return false;
      }
      return true;
    };

    BuildConfig config;
    config.k = kK;
    config.eps_per_copy = eps;
    config.beta = kBeta;
    config.public_seed_master =
        DeriveSeed(kSuiteSeed + 10, {static_cast<std::uint64_t>(rebuild)});
    const SketchStore store = BuildStore(corpus, config, rng);
    const auto estimates = QueryAllDetailed(store, b);
    all_in_band += in_band(estimates, store.copies(), band);
    for (int p = 0; p < 3; ++p) {
      fail_finite[p] += !in_band(estimates, kPrefixes[p], band);
    }

    // Same instance at eps = inf, 15 copies: exercises the hash-failure
    // side, where a single copy misses with a few percent probability.
    config.eps_per_copy = kInf;
    config.copies = kPrefixes[2];
    const SketchStore exact_store = BuildStore(corpus, config, rng);
    const auto exact_estimates = QueryAllDetailed(exact_store, b);
    for (int p = 0; p < 3; ++p) {
      fail_exact[p] += !in_band(exact_estimates, kPrefixes[p], 0.0);
    }
  }
  const double rate = Fraction(all_in_band, kRebuilds);
  const bool monotone =
      fail_finite[2] <= fail_finite[0] && fail_exact[2] <= fail_exact[0];
  return {rate >= kRequired && monotone,
          Fmt("copies=%u, band %.1f: all-in-band %d/%d (%.2f, need >= %.2f); "
              "failures at c=1/5/15: finite eps %d/%d/%d, eps=inf %d/%d/%d",
              copies, band, all_in_band, kRebuilds, rate, kRequired,
              fail_finite[0], fail_finite[1], fail_finite[2], fail_exact[0],
              fail_exact[1], fail_exact[2])};
}

// 11. Growth rates: build linear in m * n, LCP call cap, sublinear
// Hamming query.
Outcome Scaling() {
  constexpr double kBuildSlack = 2.5;
  constexpr std::uint32_t kRepeats = 7;
  Outcome out{true, ""};

  cli::BenchConfig base;
  base.mode = StoreMode::kHamming;
  base.n = 2048;
  base.m = 32;
  base.k = 2;
  base.eps = kInf;
  base.copies = 1;
  base.repeats = kRepeats;
  // Single-threaded so the ratios reflect work, not scheduling.
  base.threads = 1;
  base.seed = kSuiteSeed;
  const cli::BenchRow r00 = cli::BenchPoint(base);
  cli::BenchConfig c = base;
  c.n *= 2;
  const cli::BenchRow r10 = cli::BenchPoint(c);
  c = base;
  c.m *= 2;
  const cli::BenchRow r01 = cli::BenchPoint(c);
  const double n_ratio = r10.build_ms / r00.build_ms;
  const double m_ratio = r01.build_ms / r00.build_ms;
  const auto linear = [&](double ratio) {
    return ratio >= 2.0 / kBuildSlack && ratio <= 2.0 * kBuildSlack;
  };
  out.pass = linear(n_ratio) && linear(m_ratio);
  out.detail += Fmt("build x2n %.2f, x2m %.2f (need [%.1f, %.1f]); ", n_ratio,
                    m_ratio, 2.0 / kBuildSlack, 2.0 * kBuildSlack);

  // Hamming query: k log^3 k = 4 * 8 = 32 < n.
  cli::BenchConfig q = base;
  q.k = 4;
  q.n = 1024;
  q.m = 16;
  const cli::BenchRow q00 = cli::BenchPoint(q);
  q.n *= 2;
  q.m *= 2;
  const cli::BenchRow q11 = cli::BenchPoint(q);
  const double q_ratio = q11.query_ms / q00.query_ms;
  out.pass = out.pass && q_ratio < 4.0;
  out.detail += Fmt("query x(2n,2m) %.2f (need < 4); ", q_ratio);

  // LCP calls per edit query.
  Rng rng(DeriveSeed(kSuiteSeed, {11}));
  std::uint64_t max_calls = 0;
  bool calls_ok = true;
  int queries = 0;
  for (const std::uint32_t k : {2u, 4u, 8u, 16u}) {
    const std::uint64_t cap = 3 * std::uint64_t{k + 1} * (2 * k + 1);
    for (const double eps : {kInf, TreeEpsForFlip(kTreeFlip, 256, k)}) {
      for (int t = 0; t < 10; ++t) {
        const auto planted = oracle::PlantEditPair(
            256, static_cast<std::uint32_t>(rng() % (2 * k + 1)), rng);
        const DyadicTree tree = DyadicTree::Build(
            planted.a, k, eps, DerivePublicSeed(kSuiteSeed + 11, t), rng);
        const EditQueryResult r =
            EditQuery(tree, planted.b, LcpBackend::kWindowEncode);
        ++queries;
        calls_ok = calls_ok && r.lcp_calls <= cap;
        max_calls = std::max(max_calls, r.lcp_calls);
      }
    }
  }
  out.pass = out.pass && calls_ok;
  out.detail += Fmt("LCP calls <= 3(k+1)(2k+1) in all %d queries (max %llu)",
                    queries, static_cast<unsigned long long>(max_calls));
  return out;
}

int RunCli(const std::filesystem::path& dir, const std::string& args) {
  const std::string cmd = std::string(DPSD_CLI_PATH) + " " + args + " > " +
                          (dir / "stdout").string() + " 2> " +
                          (dir / "stderr").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::optional<ErrorCode> DecodeError(const std::vector<std::uint8_t>& bytes) {
  try {
    Deserialize(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// 12. Round trip, audit exit codes, corrupted stores.
Outcome Serialization() {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      ("dpsd_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto path = [&](const char* name) { return (dir / name).string(); };
  std::vector<std::string> failures;
  int checks = 0;
  const auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  };

  const int gen =
      RunCli(dir, "gen --n 64 --m 4 --seed 12 --output " + path("corpus.txt"));
  expect(gen == cli::kExitOk, "gen exit " + std::to_string(gen));
  for (const std::string mode : {"hamming", "edit"}) {
    const std::string store = path("store.bin");
    const int build =
        RunCli(dir, "build --input " + path("corpus.txt") + " --output " +
                        store + " --k 4 --eps 5 --copies 3 --mode " + mode);
    expect(build == cli::kExitOk,
           mode + " build exit " + std::to_string(build));
    const std::string raw = ReadAll(store);
    const std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
    try {
      expect(Serialize(Deserialize(bytes)) == bytes,
             mode + " round trip differs");
    } catch (const Error& e) {
      expect(false, mode + " round trip threw " + e.what());
    }

    std::vector<std::uint8_t> bad = bytes;
    bad[0] = 'Q';
    expect(DecodeError(bad) == ErrorCode::kBadMagic, mode + " bad magic");
    bad = bytes;
    bad[4] = 2;
    expect(DecodeError(bad) == ErrorCode::kVersionMismatch, mode + " version");
    bad.assign(bytes.begin(), bytes.end() - 3);
    expect(DecodeError(bad) == ErrorCode::kTruncatedStore,
           mode + " truncation");
    bad = bytes;
    // M1 field of the first tensor block, after the 29-byte header and seeds.
    bad[29 + 3 * 32] ^= 0x01;
    expect(DecodeError(bad) == ErrorCode::kVolumeMismatch, mode + " volume");

    const int audit_ok = RunCli(dir, "audit --trials 200 --input " + store);
    expect(audit_ok == cli::kExitOk,
           mode + " audit exit " + std::to_string(audit_ok));
  }
  const int audit_pass =
      RunCli(dir, "audit --k 8 --n 256 --eps 4 --trials 300 --seed 1");
  expect(audit_pass == cli::kExitOk,
         "audit exit " + std::to_string(audit_pass));
  const int audit_fault = RunCli(
      dir, "audit --k 8 --n 256 --eps 4 --trials 300 --seed 1 --inject-fault");
  expect(audit_fault == cli::kExitAuditViolation,
         "fault audit exit " + std::to_string(audit_fault));
  const int audit_usage = RunCli(dir, "audit --k 8");
  expect(audit_usage == cli::kExitUsage,
         "audit usage exit " + std::to_string(audit_usage));

  {
    std::string raw = ReadAll(path("store.bin"));
    raw.resize(raw.size() / 2);
    std::ofstream(path("cut.bin"), std::ios::binary) << raw;
  }
  const int cut = RunCli(dir, "query --input " + path("cut.bin") + " --query " +
                                  path("corpus.txt"));
  expect(
      cut == cli::kExitUsage &&
          ReadAll(dir / "stderr").find("TruncatedStore") != std::string::npos,
      "query on truncated store exit " + std::to_string(cut));
  const int missing = RunCli(dir, "query --input " + path("nope.bin") +
                                      " --query " + path("corpus.txt"));
  expect(missing == cli::kExitIo,
         "missing store exit " + std::to_string(missing));

  std::filesystem::remove_all(dir);
  std::string detail = Fmt("%d/%d checks ok",
                           checks - static_cast<int>(failures.size()), checks);
  for (const auto& f : failures) detail += " [" + f + "]";
  return {failures.empty(), detail};
}

}  // namespace
}  // namespace dpsd

int main(int argc, char** argv) {
  using dpsd::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "sensitivity bound", dpsd::kCap1, dpsd::SensitivityBound},
      {2, "noiseless hamming exactness", dpsd::kCap2, dpsd::NoiselessHamming},
      {3, "hamming noise band", dpsd::kCap3, dpsd::HammingNoiseBand},
      {4, "noiseless lcp exactness", dpsd::kCap4, dpsd::NoiselessLcp},
      {5, "lcp over-extension", dpsd::kCap5, dpsd::LcpOverExtension},
      {6, "noiseless edit exactness", dpsd::kCap6, dpsd::NoiselessEdit},
      {7, "edit underestimate", dpsd::kCap7, dpsd::EditUnderestimate},
      {8, "edit error band", dpsd::kCap7, dpsd::EditErrorBand},
      {9, "monotonicity", dpsd::kCap9, dpsd::Monotonicity},
      {10, "amplification", dpsd::kCap10, dpsd::Amplification},
      {11, "scaling", dpsd::kCap11, dpsd::Scaling},
      {12, "serialization", dpsd::kCap12, dpsd::Serialization},
  };
  std::optional<int> only;
  if (argc > 1) only = std::atoi(argv[1]);

  int failed = 0;
  int ran = 0;
  for (const Criterion& c : criteria) {
    if (only.has_value() && *only != c.id) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    dpsd::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_time = seconds <= c.cap_seconds;
    const bool pass = outcome.pass && in_time;
    failed += !pass;
    std::printf("%s %2d %-28s %s [%.1fs of %.0fs%s]\n", pass ? "PASS" : "FAIL",
                c.id, c.name, outcome.detail.c_str(), seconds, c.cap_seconds,
                in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion\n");
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
