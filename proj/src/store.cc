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

#include "dpsd/store.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>

#include "dpsd/edit.h"
#include "dpsd/error.h"
#include "parallel.h"

namespace dpsd {

std::string_view StoreModeName(StoreMode mode) {
  return mode == StoreMode::kEdit ? "edit" : "hamming";
}

StoreMode ParseStoreMode(std::string_view name) {
  if (name == "hamming") return StoreMode::kHamming;
  if (name == "edit") return StoreMode::kEdit;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mode '" + std::string(name) + "'");
}

std::uint32_t CopiesFor(std::uint64_t m, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "beta must lie in (0, 1), got " + std::to_string(beta));
  }
  if (m == 0) return 1;
  const double copies =
      std::ceil(18.0 * std::log(static_cast<double>(m) / beta));
  if (copies > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "copy count exceeds 65535");
  }
  return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(copies));
}

double LowerMedian(std::vector<double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "median of empty vector");
  }
  const std::size_t mid = (values.size() - 1) / 2;
  std::nth_element(values.begin(),
                   values.begin() + static_cast<std::ptrdiff_t>(mid),
                   values.end());
  return values[mid];
}

std::size_t SketchStore::Slot(std::uint32_t string, std::uint32_t copy) const {
  if (string >= m_ || copy >= copies_) {
    throw Error(ErrorCode::kOutOfRange, "structure (" + std::to_string(string) +
                                            ", " + std::to_string(copy) + ")");
  }
  return std::size_t{string} * copies_ + copy;
}

const DpHammingStructure& SketchStore::hamming(std::uint32_t string,
                                               std::uint32_t copy) const {
  if (mode_ != StoreMode::kHamming) {
    throw Error(ErrorCode::kInvalidArgument, "store is not in hamming mode");
  }
  return hamming_[Slot(string, copy)];
}

const DyadicTree& SketchStore::tree(std::uint32_t string,
                                    std::uint32_t copy) const {
  if (mode_ != StoreMode::kEdit) {
    throw Error(ErrorCode::kInvalidArgument, "store is not in edit mode");
  }
  return trees_[Slot(string, copy)];
}

SketchStore BuildStore(std::span<const PackedBitString> strings,
                       const BuildConfig& config, Rng& rng) {
  if (strings.empty() && config.empty_length == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "empty database needs an explicit string length");
  }
  const std::uint64_t n =
      strings.empty() ? config.empty_length : strings.front().length();
  for (std::size_t s = 0; s < strings.size(); ++s) {
    if (strings[s].length() != n) {
      throw Error(ErrorCode::kLengthMismatch,
                  "string " + std::to_string(s) + " has length " +
                      std::to_string(strings[s].length()) + ", expected " +
                      std::to_string(n));
    }
  }
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "n exceeds the store format");
  }
  SketchStore store;
  store.mode_ = config.mode;
  store.m_ = static_cast<std::uint32_t>(strings.size());
  store.n_ = n;
  store.k_ = config.k;
  store.eps_per_copy_ = config.eps_per_copy;
  store.copies_ =
      config.copies.value_or(CopiesFor(strings.size(), config.beta));
  if (store.copies_ == 0 ||
      store.copies_ > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "copy count out of range");
  }
  for (std::uint32_t c = 0; c < store.copies_; ++c) {
    store.seeds_.push_back(config.public_seed_master.has_value()
                               ? DerivePublicSeed(*config.public_seed_master, c)
                               : RandomSeed());
  }

  const std::uint64_t noise_master = rng();
  const std::size_t cells = std::size_t{store.m_} * store.copies_;
  auto cell_rng = [&](std::size_t slot) {
    return Rng(DeriveSeed(noise_master, {kStreamNoise, slot / store.copies_,
                                         slot % store.copies_}));
  };

  if (config.mode == StoreMode::kHamming) {
    std::vector<SketchEncoder> encoders;
    encoders.reserve(store.copies_);
    for (std::uint32_t c = 0; c < store.copies_; ++c) {
      encoders.emplace_back(
          DefaultParams(config.k, config.eps_per_copy, n, store.seeds_[c]));
    }
    std::vector<std::optional<DpHammingStructure>> built(cells);
    internal::ParallelFor(cells, config.threads, [&](std::size_t slot) {
      Rng noise = cell_rng(slot);
      built[slot] = DpHammingStructure::Init(
          strings[slot / store.copies_], encoders[slot % store.copies_], noise);
    });
    store.hamming_.reserve(cells);
    for (auto& s : built) store.hamming_.push_back(std::move(*s));
  } else {
    std::vector<TreeParams> params;
    for (std::uint32_t c = 0; c < store.copies_; ++c) {
      params.push_back(
          MakeTreeParams(n, config.k, config.eps_per_copy, store.seeds_[c]));
    }
    std::vector<std::optional<DyadicTree>> built(cells);
    internal::ParallelFor(cells, config.threads, [&](std::size_t slot) {
      Rng noise = cell_rng(slot);
      built[slot] = DyadicTree::Build(strings[slot / store.copies_],
                                      params[slot % store.copies_], &noise);
    });
    store.trees_.reserve(cells);
    for (auto& t : built) store.trees_.push_back(std::move(*t));
  }
  return store;
}

std::vector<StringEstimate> QueryAllDetailed(const SketchStore& store,
                                             const PackedBitString& b,
                                             const QueryConfig& config) {
  if (b.length() != store.n()) {
    throw Error(ErrorCode::kLengthMismatch,
                "query length " + std::to_string(b.length()) +
                    " vs store n=" + std::to_string(store.n()));
  }
  const std::uint32_t copies = store.copies();
  std::vector<StringEstimate> out(store.m());
  for (auto& e : out) e.per_copy.assign(copies, 0.0);
  std::vector<std::uint64_t> calls(std::size_t{store.m()} * copies, 0);

  if (store.m() == 0) return out;
  if (store.mode() == StoreMode::kHamming) {
    // The query is encoded once per copy and compared against every string.
    std::vector<HammingSketch> encoded(copies);
    internal::ParallelFor(copies, config.threads, [&](std::size_t c) {
      encoded[c] =
          Encode(b, store.hamming(0, static_cast<std::uint32_t>(c)).params());
    });
    internal::ParallelFor(
        std::size_t{store.m()} * copies, config.threads, [&](std::size_t slot) {
          const auto s = static_cast<std::uint32_t>(slot / copies);
          const auto c = static_cast<std::uint32_t>(slot % copies);
          out[s].per_copy[c] = store.hamming(s, c).QueryEncoded(encoded[c]);
        });
  } else {
    std::vector<std::optional<QuerySide>> sides(copies);
    const bool with_tree = config.backend == LcpBackend::kTreeAligned;
    internal::ParallelFor(copies, config.threads, [&](std::size_t c) {
      sides[c].emplace(store.tree(0, static_cast<std::uint32_t>(c)).params(), b,
                       with_tree);
    });
    internal::ParallelFor(
        std::size_t{store.m()} * copies, config.threads, [&](std::size_t slot) {
          const auto s = static_cast<std::uint32_t>(slot / copies);
          const auto c = static_cast<std::uint32_t>(slot % copies);
          const EditQueryResult r =
              EditQuery(store.tree(s, c), *sides[c], config.backend);
          out[s].per_copy[c] = r.distance.has_value()
                                   ? static_cast<double>(*r.distance)
                                   : std::numeric_limits<double>::infinity();
          calls[slot] = r.lcp_calls;
        });
  }
  for (std::uint32_t s = 0; s < store.m(); ++s) {
    out[s].estimate = LowerMedian(out[s].per_copy);
    for (std::uint32_t c = 0; c < copies; ++c) {
      out[s].lcp_calls += calls[std::size_t{s} * copies + c];
    }
  }
  return out;
}

std::vector<double> QueryAll(const SketchStore& store, const PackedBitString& b,
                             const QueryConfig& config) {
  std::vector<double> out;
  for (const auto& e : QueryAllDetailed(store, b, config)) {
    out.push_back(e.estimate);
  }
  return out;
}

namespace {

class ByteWriter {
 public:
  void U8(std::uint8_t v) { bytes_.push_back(v); }
  void U16(std::uint16_t v) { Le(v, 2); }
  void U32(std::uint32_t v) { Le(v, 4); }
  void F64(double v) { Le(std::bit_cast<std::uint64_t>(v), 8); }
  void Raw(std::span<const std::uint8_t> data) {
    bytes_.insert(bytes_.end(), data.begin(), data.end());
  }
  // Tensor bits LSB-first, padded to a byte boundary.
  void Bits(std::span<const std::uint64_t> words, std::uint64_t volume) {
    const std::uint64_t count = (volume + 7) / 8;
    for (std::uint64_t b = 0; b < count; ++b) {
      bytes_.push_back(
          static_cast<std::uint8_t>(words[b / 8] >> (8 * (b % 8))));
    }
  }
  std::vector<std::uint8_t> Take() { return std::move(bytes_); }

 private:
  void Le(std::uint64_t v, int width) {
    for (int b = 0; b < width; ++b) {
      bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
    }
  }
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t U8() { return static_cast<std::uint8_t>(Le(1)); }
  std::uint16_t U16() { return static_cast<std::uint16_t>(Le(2)); }
  std::uint32_t U32() { return static_cast<std::uint32_t>(Le(4)); }
  double F64() { return std::bit_cast<double>(Le(8)); }
  std::span<const std::uint8_t> Raw(std::size_t count) {
    Need(count);
    auto out = bytes_.subspan(pos_, count);
    pos_ += count;
    return out;
  }
  void Bits(std::span<std::uint64_t> words, std::uint64_t volume) {
    const std::uint64_t count = (volume + 7) / 8;
    const auto data = Raw(count);
    std::fill(words.begin(), words.end(), 0);
    for (std::uint64_t b = 0; b < count; ++b) {
      words[b / 8] |= std::uint64_t{data[b]} << (8 * (b % 8));
    }
    if (volume % 8 != 0 && (data[count - 1] >> (volume % 8)) != 0) {
      throw Error(ErrorCode::kMalformedStore, "nonzero tensor padding bits");
    }
  }
  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  void Need(std::size_t count) const {
    if (bytes_.size() - pos_ < count) {
      throw Error(ErrorCode::kTruncatedStore,
                  "need " + std::to_string(count) + " bytes at offset " +
                      std::to_string(pos_) + ", have " +
                      std::to_string(bytes_.size() - pos_));
    }
  }
  std::uint64_t Le(int width) {
    const auto data = Raw(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int b = width - 1; b >= 0; --b) v = (v << 8) | data[b];
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void WriteSketch(ByteWriter& w, const SketchDims& dims,
                 std::span<const std::uint64_t> words) {
  w.U32(dims.m1);
  w.U32(dims.m2);
  w.U32(dims.m3);
  w.Bits(words, dims.volume());
}

HammingSketch ReadSketch(ByteReader& r, const SketchDims& expected) {
  SketchDims dims;
  dims.m1 = r.U32();
  dims.m2 = r.U32();
  dims.m3 = r.U32();
  if (dims != expected) {
    throw Error(
        ErrorCode::kVolumeMismatch,
        "tensor " + std::to_string(dims.m1) + "x" + std::to_string(dims.m2) +
            "x" + std::to_string(dims.m3) + " does not match parameters " +
            std::to_string(expected.m1) + "x" + std::to_string(expected.m2) +
            "x" + std::to_string(expected.m3));
  }
  HammingSketch sketch(dims);
  r.Bits(sketch.mutable_words(), dims.volume());
  return sketch;
}

}  // namespace

std::vector<std::uint8_t> Serialize(const SketchStore& store) {
  ByteWriter w;
  w.Raw({reinterpret_cast<const std::uint8_t*>(kStoreMagic), 4});
  w.U16(kStoreVersion);
  w.U8(static_cast<std::uint8_t>(store.mode()));
  w.U32(store.m());
  w.U32(static_cast<std::uint32_t>(store.n()));
  w.U32(store.k());
  w.F64(store.eps_per_copy());
  w.U16(static_cast<std::uint16_t>(store.copies()));
  for (const Seed& seed : store.seeds()) w.Raw(seed);
  for (std::uint32_t s = 0; s < store.m(); ++s) {
    for (std::uint32_t c = 0; c < store.copies(); ++c) {
      if (store.mode() == StoreMode::kHamming) {
        const HammingSketch& sketch = store.hamming(s, c).noised_sketch();
        WriteSketch(w, sketch.dims(), sketch.words());
      } else {
        const DyadicTree& tree = store.tree(s, c);
        for (std::uint64_t f = 0; f < tree.node_count(); ++f) {
          WriteSketch(w, tree.params().dims(), tree.node_words(f));
        }
      }
    }
  }
  return w.Take();
}

SketchStore Deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const auto magic = r.Raw(4);
  if (std::memcmp(magic.data(), kStoreMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not a sketch store");
  }
  const std::uint16_t version = r.U16();
  if (version != kStoreVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "format version " + std::to_string(version) + ", expected " +
                    std::to_string(kStoreVersion));
  }
  const std::uint8_t mode = r.U8();
  if (mode > 1) {
    throw Error(ErrorCode::kMalformedStore,
                "unknown mode byte " + std::to_string(mode));
  }
  SketchStore store;
  store.mode_ = static_cast<StoreMode>(mode);
  store.m_ = r.U32();
  store.n_ = r.U32();
  store.k_ = r.U32();
  store.eps_per_copy_ = r.F64();
  store.copies_ = r.U16();
  if (store.copies_ == 0 || store.n_ == 0 || store.k_ == 0 ||
      store.k_ > store.n_ || !(store.eps_per_copy_ > 0.0)) {
    throw Error(ErrorCode::kMalformedStore, "invalid header parameters");
  }
  for (std::uint32_t c = 0; c < store.copies_; ++c) {
    Seed seed;
    const auto raw = r.Raw(seed.size());
    std::copy(raw.begin(), raw.end(), seed.begin());
    store.seeds_.push_back(seed);
  }
  if (store.mode_ == StoreMode::kHamming) {
    std::vector<SketchParams> params;
    for (const Seed& seed : store.seeds_) {
      params.push_back(
          DefaultParams(store.k_, store.eps_per_copy_, store.n_, seed));
    }
    for (std::uint32_t s = 0; s < store.m_; ++s) {
      for (std::uint32_t c = 0; c < store.copies_; ++c) {
        HammingSketch sketch = ReadSketch(r, params[c].dims());
        store.hamming_.push_back(
            DpHammingStructure::FromReleased(params[c], std::move(sketch)));
      }
    }
  } else {
    std::vector<TreeParams> params;
    for (const Seed& seed : store.seeds_) {
      params.push_back(
          MakeTreeParams(store.n_, store.k_, store.eps_per_copy_, seed));
    }
    for (std::uint32_t s = 0; s < store.m_; ++s) {
      for (std::uint32_t c = 0; c < store.copies_; ++c) {
        std::vector<HammingSketch> nodes;
        nodes.reserve(params[c].node_count());
        for (std::uint64_t f = 0; f < params[c].node_count(); ++f) {
          nodes.push_back(ReadSketch(r, params[c].dims()));
        }
        store.trees_.push_back(
            DyadicTree::FromReleased(params[c], std::move(nodes)));
      }
    }
  }
  if (!r.AtEnd()) {
    throw Error(ErrorCode::kMalformedStore, "trailing bytes after last tensor");
  }
  return store;
}

void WriteStoreFile(const std::string& path, const SketchStore& store) {
  const std::vector<std::uint8_t> bytes = Serialize(store);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

SketchStore ReadStoreFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return Deserialize(bytes);
}

}  // namespace dpsd
