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
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "dpsd/cli.h"
#include "dpsd/error.h"
#include "dpsd/oracle.h"
#include "json.hpp"

namespace dpsd::cli {

using nlohmann::json;

double ParseEps(const std::string& text) {
  std::string lower;
  for (const char ch : text) {
    lower.push_back(
        static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  if (lower == "inf" || lower == "infinity" || lower == "+inf") {
    return std::numeric_limits<double>::infinity();
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(value > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "--eps must be a positive number or 'inf', got '" + text + "'");
  }
  return value;
}

unsigned ResolveThreads(std::optional<unsigned> flag) {
  if (flag.has_value() && *flag > 0) return *flag;
  if (const char* env = std::getenv("DPSD_THREADS"); env != nullptr) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) return static_cast<unsigned>(parsed);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

json EpsJson(double eps) {
  if (std::isinf(eps)) return "inf";
  return eps;
}

LcpBackend ParseBackend(const std::string& name) {
  if (name == "window_encode") return LcpBackend::kWindowEncode;
  if (name == "tree_aligned") return LcpBackend::kTreeAligned;
  throw Error(ErrorCode::kInvalidArgument, "unknown backend '" + name + "'");
}

double ElapsedMs(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - since)
      .count();
}

// Negative control for the audit: three toggles per repetition instead of
// one, so a single changed symbol can move 6 * M1 cells.
HammingSketch TripleToggleEncode(const PackedBitString& a,
                                 const SketchParams& params) {
  const HashFamily family = FamilyFor(params);
  HammingSketch sketch(params.dims());
  for (std::uint64_t p = 1; p <= params.n; ++p) {
    const std::uint64_t x = EncodeSymbol(p, a.bit(p - 1));
    const std::uint32_t j = family.H(x) - 1;
    for (std::uint32_t i = 1; i <= params.m1; ++i) {
      const std::uint32_t c = family.G(x, i) - 1;
      for (std::uint32_t extra = 0; extra < 3; ++extra) {
        sketch.Toggle(i - 1, j, (c + extra) % params.m3);
      }
    }
  }
  return sketch;
}

std::ostream& OpenOutput(const std::optional<std::string>& path,
                         std::ofstream& file, std::ostream& fallback) {
  if (!path.has_value()) return fallback;
  file.open(*path, std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + *path);
  return file;
}

struct GenOptions {
  std::uint64_t n = 0;
  std::uint32_t m = 0;
  std::optional<std::uint32_t> k;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> planted;
  std::string mode = "hamming";
  std::string output;
};

int CmdGen(const GenOptions& o, std::ostream& out) {
  if (o.n == 0 || o.m == 0) {
    throw Error(ErrorCode::kInvalidArgument, "--n and --m must be positive");
  }
  if (o.k.has_value() && *o.k > o.n) {
    throw Error(
        ErrorCode::kKExceedsN,
        "--k " + std::to_string(*o.k) + " exceeds --n " + std::to_string(o.n));
  }
  const StoreMode mode = ParseStoreMode(o.mode);
  if (o.planted.has_value() && *o.planted > o.n) {
    throw Error(ErrorCode::kInvalidArgument, "--planted-distance exceeds --n");
  }
  const std::uint64_t master = o.seed.value_or(EntropySeed());
  Rng data(DeriveSeed(master, {kStreamData}));

  std::vector<PackedBitString> corpus;
  std::optional<PackedBitString> query;
  std::vector<std::uint64_t> truth;
  if (o.planted.has_value()) {
    query = oracle::RandomString(o.n, data);
    for (std::uint32_t s = 0; s < o.m; ++s) {
      if (mode == StoreMode::kHamming) {
        corpus.push_back(oracle::FlipRandomPositions(*query, *o.planted, data));
        truth.push_back(oracle::ExactHamming(corpus.back(), *query));
      } else {
        corpus.push_back(oracle::ApplyRandomEdits(*query, *o.planted, data));
        truth.push_back(*oracle::ExactEdit(corpus.back(), *query, *o.planted));
      }
    }
  } else {
    for (std::uint32_t s = 0; s < o.m; ++s) {
      corpus.push_back(oracle::RandomString(o.n, data));
    }
  }
  WriteCorpus(o.output, corpus);
  json summary = {{"command", "gen"},
                  {"corpus", o.output},
                  {"n", o.n},
                  {"m", o.m},
                  {"seed", master}};
  if (query.has_value()) {
    const std::string query_path = o.output + ".query";
    const std::string truth_path = o.output + ".truth";
    WriteCorpus(query_path, std::span(&*query, 1));
    std::ofstream truth_file(truth_path, std::ios::trunc);
    if (!truth_file) throw Error(ErrorCode::kIo, "cannot write " + truth_path);
    for (std::uint32_t s = 0; s < o.m; ++s) {
      truth_file
          << json{{"query", 0}, {"index", s}, {"distance", truth[s]}}.dump()
          << '\n';
    }
    if (!truth_file) throw Error(ErrorCode::kIo, "write failed: " + truth_path);
    summary["query"] = query_path;
    summary["truth"] = truth_path;
    summary["planted_distance"] = *o.planted;
    summary["mode"] = std::string(StoreModeName(mode));
  }
  out << summary.dump() << '\n';
  return kExitOk;
}

struct BuildOptions {
  std::string input;
  std::string output;
  std::uint32_t k = 0;
  std::string eps;
  double beta = 0.01;
  std::string mode = "hamming";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::uint32_t> copies;
};

int CmdBuild(const BuildOptions& o, std::ostream& out) {
  const double eps = ParseEps(o.eps);
  const StoreMode mode = ParseStoreMode(o.mode);
  if (!(o.beta > 0.0 && o.beta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "--beta must lie in (0, 1)");
  }
  auto t0 = std::chrono::steady_clock::now();
  const std::vector<PackedBitString> corpus = ReadCorpus(o.input);
  if (corpus.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "corpus " + o.input + " is empty");
  }
  const double read_ms = ElapsedMs(t0);
  if (o.k > corpus.front().length()) {
    throw Error(ErrorCode::kKExceedsN,
                "--k " + std::to_string(o.k) +
                    " exceeds n=" + std::to_string(corpus.front().length()));
  }

  BuildConfig config;
  config.k = o.k;
  config.eps_per_copy = eps;
  config.beta = o.beta;
  config.mode = mode;
  config.copies = o.copies;
  config.public_seed_master = o.seed;
  config.threads = ResolveThreads(o.threads);
  Rng noise(o.seed.has_value() ? DeriveSeed(*o.seed, {kStreamNoise})
                               : EntropySeed());

  t0 = std::chrono::steady_clock::now();
  const SketchStore store = BuildStore(corpus, config, noise);
  const double build_ms = ElapsedMs(t0);
  t0 = std::chrono::steady_clock::now();
  const std::vector<std::uint8_t> bytes = Serialize(store);
  {
    std::ofstream file(o.output, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::kIo, "cannot write " + o.output);
    file.write(reinterpret_cast<const char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()));
    if (!file) throw Error(ErrorCode::kIo, "write failed: " + o.output);
  }
  const double write_ms = ElapsedMs(t0);

  out << json{{"command", "build"},
              {"store", o.output},
              {"mode", std::string(StoreModeName(store.mode()))},
              {"m", store.m()},
              {"n", store.n()},
              {"k", store.k()},
              {"copies", store.copies()},
              {"eps_per_copy", EpsJson(store.eps_per_copy())},
              {"total_eps", EpsJson(store.total_eps())},
              {"bytes", bytes.size()},
              {"timings_ms",
               {{"read", read_ms}, {"build", build_ms}, {"write", write_ms}}}}
             .dump()
      << '\n';
  return kExitOk;
}

struct QueryOptions {
  std::string input;
  std::string query;
  std::optional<std::string> truth;
  std::optional<std::string> mode;
  std::string backend = "window_encode";
  std::optional<std::string> output;
  std::string format = "json";
  std::optional<unsigned> threads;
};

std::map<std::pair<std::uint64_t, std::uint64_t>, double> ReadTruth(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> truth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json record = json::parse(line);
      truth[{record.value("query", std::uint64_t{0}),
             record.at("index").get<std::uint64_t>()}] =
          record.at("distance").get<double>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return truth;
}

int CmdQuery(const QueryOptions& o, std::ostream& out) {
  const LcpBackend backend = ParseBackend(o.backend);
  if (o.format != "json" && o.format != "tsv") {
    throw Error(ErrorCode::kInvalidArgument, "--format must be json or tsv");
  }
  const SketchStore store = ReadStoreFile(o.input);
  if (o.mode.has_value() && ParseStoreMode(*o.mode) != store.mode()) {
    throw Error(ErrorCode::kInvalidArgument,
                "mode mismatch: store is " +
                    std::string(StoreModeName(store.mode())) + ", --mode is " +
                    *o.mode);
  }
  const std::vector<PackedBitString> queries = ReadCorpus(o.query);
  for (const auto& q : queries) {
    if (q.length() != store.n()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "query length " + std::to_string(q.length()) +
                      " vs store n=" + std::to_string(store.n()));
    }
  }
  std::optional<std::map<std::pair<std::uint64_t, std::uint64_t>, double>>
      truth;
  if (o.truth.has_value()) truth = ReadTruth(*o.truth);

  std::ofstream file;
  std::ostream& sink = OpenOutput(o.output, file, out);
  if (o.format == "tsv") {
    sink << "query\tindex\testimate" << (truth ? "\texact\tabs_error" : "")
         << '\n';
  }
  QueryConfig config;
  config.backend = backend;
  config.threads = ResolveThreads(o.threads);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const std::vector<StringEstimate> estimates =
        QueryAllDetailed(store, queries[q], config);
    for (std::size_t s = 0; s < estimates.size(); ++s) {
      const double estimate = estimates[s].estimate;
      const bool too_far = std::isinf(estimate);
      std::optional<double> exact;
      if (truth.has_value()) {
        const auto it = truth->find({q, s});
        if (it != truth->end()) exact = it->second;
      }
      if (o.format == "json") {
        json record = {{"query", q}, {"index", s}};
        record["estimate"] = too_far ? json(nullptr) : json(estimate);
        record["too_far"] = too_far;
        if (exact.has_value()) {
          record["exact"] = *exact;
          record["abs_error"] =
              too_far ? json(nullptr) : json(std::abs(estimate - *exact));
        }
        sink << record.dump() << '\n';
      } else {
        sink << q << '\t' << s << '\t';
        if (too_far) {
          sink << "TooFar";
        } else {
          sink << estimate;
        }
        if (truth.has_value()) {
          sink << '\t';
          if (exact.has_value()) sink << *exact;
          sink << '\t';
          if (exact.has_value() && !too_far)
            sink << std::abs(estimate - *exact);
        }
        sink << '\n';
      }
    }
  }
  if (!sink) throw Error(ErrorCode::kIo, "write failed");
  return kExitOk;
}

struct AuditOptions {
  std::optional<std::string> input;
  std::optional<std::uint32_t> k;
  std::optional<std::uint64_t> n;
  std::string eps = "inf";
  std::uint64_t trials = 1000;
  std::optional<std::uint64_t> seed;
  bool inject_fault = false;
};

int CmdAudit(const AuditOptions& o, std::ostream& out) {
  if (o.trials == 0) {
    throw Error(ErrorCode::kInvalidArgument, "--trials must be >= 1");
  }
  const std::uint64_t master = o.seed.value_or(EntropySeed());
  SketchParams params;
  std::string family = "hamming";
  if (o.input.has_value()) {
    const SketchStore store = ReadStoreFile(*o.input);
    if (store.mode() == StoreMode::kHamming) {
      params = DefaultParams(store.k(), store.eps_per_copy(), store.n(),
                             store.seeds().front());
    } else {
      params = NodeFamilyParams(MakeTreeParams(
          store.n(), store.k(), store.eps_per_copy(), store.seeds().front()));
      family = "tree_node";
    }
  } else {
    if (!o.k.has_value() || !o.n.has_value()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "audit needs --input or both --k and --n");
    }
    params =
        DefaultParams(*o.k, ParseEps(o.eps), *o.n, DerivePublicSeed(master, 0));
  }
  Rng rng(DeriveSeed(master, {kStreamData, 1}));
  const AuditReport report =
      o.inject_fault
          ? RunSensitivityAudit(params, o.trials, rng, TripleToggleEncode)
          : RunSensitivityAudit(params, o.trials, rng);
  json record = {{"command", "audit"},          {"family", family},
                 {"trials", report.trials},     {"m1", report.m1},
                 {"eps", EpsJson(report.eps)},  {"flip_prob", report.flip_prob},
                 {"max_diff", report.max_diff}, {"bound", report.bound},
                 {"violated", report.violated}};
  if (report.observed_eps.has_value()) {
    record["observed_eps"] = *report.observed_eps;
    record["worst_case_eps"] = *report.worst_case_eps;
    record["ratio_bound"] = "checked";
  } else {
    record["ratio_bound"] = "skipped";
  }
  out << record.dump() << '\n';
  return report.violated ? kExitAuditViolation : kExitOk;
}

struct BenchOptions {
  std::string mode = "hamming";
  std::uint64_t n = 256;
  std::uint32_t m = 4;
  std::uint32_t k = 4;
  std::string eps = "inf";
  std::uint32_t copies = 1;
  std::uint32_t trials = 5;
  std::uint64_t seed = 1;
  std::optional<unsigned> threads;
  std::string backend = "window_encode";
  std::string format = "tsv";
  std::optional<std::string> output;
};

int CmdBench(const BenchOptions& o, std::ostream& out) {
  BenchConfig config;
  config.mode = ParseStoreMode(o.mode);
  config.n = o.n;
  config.m = o.m;
  config.k = o.k;
  config.eps = ParseEps(o.eps);
  config.copies = o.copies;
  config.repeats = o.trials;
  config.backend = ParseBackend(o.backend);
  config.seed = o.seed;
  config.threads = ResolveThreads(o.threads);
  if (config.k > config.n) {
    throw Error(ErrorCode::kKExceedsN, "--k exceeds --n");
  }
  if (o.format != "json" && o.format != "tsv") {
    throw Error(ErrorCode::kInvalidArgument, "--format must be json or tsv");
  }
  const std::vector<BenchRow> rows = RunBenchGrid(config);
  std::ofstream file;
  std::ostream& sink = OpenOutput(o.output, file, out);
  if (o.format == "tsv") {
    WriteBenchTsv(sink, rows);
  } else {
    for (const BenchRow& r : rows) {
      sink << json{{"mode", std::string(StoreModeName(r.mode))},
                   {"n", r.n},
                   {"m", r.m},
                   {"k", r.k},
                   {"copies", r.copies},
                   {"build_ms", r.build_ms},
                   {"query_ms", r.query_ms},
                   {"lcp_calls", r.lcp_calls},
                   {"store_bytes", r.store_bytes}}
                  .dump()
           << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int Run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differentially private string-distance sketches", "dpsd"};
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a random corpus");
  gen_cmd->add_option("--n", gen.n, "String length")->required();
  gen_cmd->add_option("--m", gen.m, "Number of strings")->required();
  gen_cmd->add_option("--k", gen.k, "Distance cap (validated against n)");
  gen_cmd->add_option("--seed", gen.seed, "Master seed");
  gen_cmd->add_option("--planted-distance", gen.planted,
                      "Plant every string at this distance from one query");
  gen_cmd->add_option("--mode", gen.mode, "hamming | edit");
  gen_cmd->add_option("--output", gen.output, "Corpus path")->required();

  BuildOptions build;
  CLI::App* build_cmd = app.add_subcommand("build", "Build a sketch store");
  build_cmd->add_option("--input", build.input, "Corpus path")->required();
  build_cmd->add_option("--output", build.output, "Store path")->required();
  build_cmd->add_option("--k", build.k, "Distance cap")->required();
  build_cmd->add_option("--eps", build.eps, "Budget per copy, or inf")
      ->required();
  build_cmd->add_option("--beta", build.beta, "Failure probability");
  build_cmd->add_option("--mode", build.mode, "hamming | edit");
  build_cmd->add_option("--seed", build.seed, "Master seed");
  build_cmd->add_option("--threads", build.threads, "Worker threads");
  build_cmd->add_option("--copies", build.copies,
                        "Copy count (overrides --beta)");

  QueryOptions query;
  CLI::App* query_cmd = app.add_subcommand("query", "Query a sketch store");
  query_cmd->add_option("--input", query.input, "Store path")->required();
  query_cmd->add_option("--query", query.query, "Query strings, one per line")
      ->required();
  query_cmd->add_option("--truth", query.truth, "Ground-truth sidecar");
  query_cmd->add_option("--mode", query.mode, "Expected store mode");
  query_cmd->add_option("--backend", query.backend,
                        "window_encode | tree_aligned");
  query_cmd->add_option("--output", query.output, "Output path");
  query_cmd->add_option("--format", query.format, "json | tsv");
  query_cmd->add_option("--threads", query.threads, "Worker threads");

  AuditOptions audit;
  CLI::App* audit_cmd =
      app.add_subcommand("audit", "Check the encoder's sensitivity bound");
  audit_cmd->add_option("--input", audit.input, "Store to audit");
  audit_cmd->add_option("--k", audit.k, "Distance cap");
  audit_cmd->add_option("--n", audit.n, "String length");
  audit_cmd->add_option("--eps", audit.eps, "Budget, or inf");
  audit_cmd->add_option("--trials", audit.trials, "Neighbor pairs");
  audit_cmd->add_option("--seed", audit.seed, "Master seed");
  audit_cmd->add_flag("--inject-fault", audit.inject_fault)->group("");

  BenchOptions bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Timing grid");
  bench_cmd->add_option("--mode", bench.mode, "hamming | edit");
  bench_cmd->add_option("--n", bench.n, "Base string length");
  bench_cmd->add_option("--m", bench.m, "Base string count");
  bench_cmd->add_option("--k", bench.k, "Base distance cap");
  bench_cmd->add_option("--eps", bench.eps, "Budget per copy, or inf");
  bench_cmd->add_option("--copies", bench.copies, "Copies per string");
  bench_cmd->add_option("--trials", bench.trials, "Repeats per point");
  bench_cmd->add_option("--seed", bench.seed, "Master seed");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads");
  bench_cmd->add_option("--backend", bench.backend,
                        "window_encode | tree_aligned");
  bench_cmd->add_option("--format", bench.format, "tsv | json");
  bench_cmd->add_option("--output", bench.output, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return CmdGen(gen, out);
    if (build_cmd->parsed()) return CmdBuild(build, out);
    if (query_cmd->parsed()) return CmdQuery(query, out);
    if (audit_cmd->parsed()) return CmdAudit(audit, out);
    if (bench_cmd->parsed()) return CmdBench(bench, out);
  } catch (const Error& e) {
    err << "dpsd: " << e.what() << '\n';
    return e.code() == ErrorCode::kIo ? kExitIo : kExitUsage;
  } catch (const std::exception& e) {
    err << "dpsd: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace dpsd::cli
