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

#ifndef DPSD_DYADIC_TREE_H_
#define DPSD_DYADIC_TREE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpsd/bitstring.h"
#include "dpsd/hashing.h"
#include "dpsd/random.h"
#include "dpsd/sketch.h"

namespace dpsd {

// Parameters shared by every node of a dyadic tree and by the query side.
struct TreeParams {
  std::uint32_t k = 1;
  std::uint64_t true_length = 1;  // n before padding
  std::uint64_t padded_length = 1;
  std::uint32_t depth = 0;  // L, with padded_length = 2^L; L+1 levels
  std::uint32_t m1 = 10;
  std::uint32_t m2 = 1;
  std::uint32_t m3 = 10;
  double eps = 0.0;       // whole-tree budget
  double eps_node = 0.0;  // eps / (L + 1)
  double q_node = 0.0;    // flip probability applied to every node
  Seed seed{};

  SketchDims dims() const noexcept { return {m1, m2, m3}; }
  std::uint64_t node_count() const noexcept {
    return (std::uint64_t{2} << depth) - 1;
  }
  // 1.5 * M1 * M3 * q_node.
  double threshold() const noexcept { return 1.5 * m1 * m3 * q_node; }
};

// M1 = ceil(log2 k) + ceil(log2 log2 n') + 10, M2 = 1, M3 = 10 where n' is
// the padded length; per-node budget eps / (L + 1). kKExceedsN if k > n.
TreeParams MakeTreeParams(std::uint64_t n, std::uint32_t k, double eps,
                          const Seed& seed);

// Node (level, index): level 0 is the root, 0 <= index < 2^level. Covers the
// 1-indexed positions [index * 2^(L-level) + 1, (index + 1) * 2^(L-level)].
struct NodeId {
  std::uint32_t level = 0;
  std::uint64_t index = 0;

  std::uint64_t flat() const noexcept {
    return ((std::uint64_t{1} << level) - 1) + index;
  }
  std::uint64_t length(std::uint32_t depth) const noexcept {
    return std::uint64_t{1} << (depth - level);
  }
  std::uint64_t start(std::uint32_t depth) const noexcept {
    return index * length(depth) + 1;
  }
  std::uint64_t end(std::uint32_t depth) const noexcept {
    return (index + 1) * length(depth);
  }
  friend bool operator==(const NodeId&, const NodeId&) = default;
};

// Maximal dyadic nodes tiling [p_l, p_r], left to right. kOutOfRange unless
// 1 <= p_l <= p_r <= 2^depth.
std::vector<NodeId> CanonicalDecompose(std::uint32_t depth, std::uint64_t p_l,
                                       std::uint64_t p_r);

// Node-local encoder. A symbol at local offset t (0-indexed) with bit b of
// node (level, index) gets the label base(level, index mod 2) + t and the
// hash input x = 2 * label + b; it toggles cell (i, h(x), g(x, i)) exactly as
// the Hamming encoder does. Each (level, parity) slot has its own label range
// because a canonical decomposition holds at most one node per slot: plain
// offsets would let mismatches at equal offsets of two nodes cancel in the
// XOR. One mask of toggled cells is cached per x.
class NodeEncoder {
 public:
  explicit NodeEncoder(const TreeParams& params);

  std::size_t words_per_sketch() const noexcept { return words_; }

  // Size of the hash input domain, 4 * (2 * padded_length - 1).
  static std::uint64_t DomainSize(const TreeParams& params);

  // XORs into `acc` the encoding of s[start, start + length(node)) (0-indexed)
  // under the labels of `node`.
  void XorEncode(const PackedBitString& s, std::uint64_t start,
                 const NodeId& node, std::span<std::uint64_t> acc) const;

 private:
  std::uint32_t depth_;
  std::size_t words_;
  std::vector<std::uint64_t> level_base_;
  std::vector<std::uint64_t> masks_;
};

// Complete binary tree of per-node Hamming sketches over a padded string.
// Node sketches are stored level-major, left to right.
class DyadicTree {
 public:
  // Every node is encoded with node-local labels, then flipped with q_node
  // when `noise` is given. Passing no rng yields a noiseless tree.
  static DyadicTree Build(const PackedBitString& a, const TreeParams& params,
                          Rng* noise);
  static DyadicTree Build(const PackedBitString& a, std::uint32_t k, double eps,
                          const Seed& seed, Rng& noise);

  // Reassembles a released tree. kVolumeMismatch on wrong node count or
  // dims.
  static DyadicTree FromReleased(TreeParams params,
                                 std::vector<HammingSketch> nodes);

  const TreeParams& params() const noexcept { return params_; }
  std::uint32_t depth() const noexcept { return params_.depth; }
  std::uint64_t node_count() const noexcept { return params_.node_count(); }

  std::span<const std::uint64_t> node_words(std::uint64_t flat) const;
  HammingSketch NodeSketch(const NodeId& id) const;

  // XOR of the given nodes' sketches.
  HammingSketch IntervalSketch(std::span<const NodeId> nodes) const;
  HammingSketch IntervalSketch(std::uint64_t p_l, std::uint64_t p_r) const;

 private:
  DyadicTree(TreeParams params, std::size_t words_per_node);

  TreeParams params_;
  std::size_t words_per_node_;
  std::vector<std::uint64_t> words_;
};

enum class LcpBackend { kTreeAligned, kWindowEncode };

// Client-side state for LCP queries against one tree: the padded query
// string, the node encoder and, for the tree-aligned backend, a noiseless
// tree of the query string under the same public seed.
class QuerySide {
 public:
  QuerySide(const TreeParams& params, const PackedBitString& b, bool with_tree);

  const PackedBitString& padded() const noexcept { return padded_; }
  const TreeParams& params() const noexcept { return params_; }
  const std::optional<DyadicTree>& tree() const noexcept { return tree_; }

  // For every node [s, e] of `decomposition` (in A's coordinates), encodes
  // b[s+shift, e+shift] under that node's labels, then XORs them all.
  // kOutOfRange if a shifted span leaves [1, padded length].
  HammingSketch WindowSketch(std::span<const NodeId> decomposition,
                             std::int64_t shift) const;

 private:
  TreeParams params_;
  PackedBitString padded_;
  NodeEncoder encoder_;
  std::optional<DyadicTree> tree_;
};

struct LcpQueryResult {
  std::uint64_t w_tilde = 0;
  std::uint32_t steps = 0;
  std::vector<double> thresholded_distances;
};

// Binary search for the common-prefix length of A[i..] and B[j..]
// (1-indexed), accepting a candidate length when the sketch distance of the
// two windows is at most the tree's threshold. kOutOfRange unless
// 1 <= i, j <= n.
LcpQueryResult LcpQuery(const DyadicTree& a_tree, const QuerySide& query,
                        std::uint64_t i, std::uint64_t j, LcpBackend backend);

}  // namespace dpsd

#endif  // DPSD_DYADIC_TREE_H_
