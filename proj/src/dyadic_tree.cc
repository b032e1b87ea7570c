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

#include "dpsd/dyadic_tree.h"

#include <algorithm>
#include <bit>
#include <string>

#include "dpsd/error.h"
#include "dpsd/hamming.h"

namespace dpsd {

TreeParams MakeTreeParams(std::uint64_t n, std::uint32_t k, double eps,
                          const Seed& seed) {
  if (n == 0 || k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "k and n must be positive");
  }
  if (k > n) {
    throw Error(ErrorCode::kKExceedsN,
                "k=" + std::to_string(k) + " > n=" + std::to_string(n));
  }
  TreeParams p;
  p.k = k;
  p.true_length = n;
  p.padded_length = NextPow2(n);
  p.depth = static_cast<std::uint32_t>(std::countr_zero(p.padded_length));
  // log2 log2 n' is clamped at zero for n' <= 2.
  const std::uint32_t log_log_n = p.depth <= 1 ? 0 : CeilLog2(p.depth);
  p.m1 = CeilLog2(k) + log_log_n + 10;
  p.m2 = 1;
  p.m3 = 10;
  p.eps = eps;
  p.eps_node = eps / static_cast<double>(p.depth + 1);
  p.q_node = FlipProbability(p.eps_node, p.m1);
  p.seed = seed;
  return p;
}

std::vector<NodeId> CanonicalDecompose(std::uint32_t depth, std::uint64_t p_l,
                                       std::uint64_t p_r) {
  const std::uint64_t padded = std::uint64_t{1} << depth;
  if (p_l == 0 || p_l > p_r || p_r > padded) {
    throw Error(ErrorCode::kOutOfRange, "interval [" + std::to_string(p_l) +
                                            ", " + std::to_string(p_r) +
                                            "] outside [1, " +
                                            std::to_string(padded) + "]");
  }
  std::vector<NodeId> nodes;
  std::uint64_t pos = p_l;
  while (pos <= p_r) {
    const std::uint64_t offset = pos - 1;
    // Largest aligned block starting at pos that fits in the interval.
    std::uint64_t size = offset == 0 ? padded : (offset & (~offset + 1));
    size = std::min(size, std::bit_floor(p_r - pos + 1));
    const auto log_size = static_cast<std::uint32_t>(std::countr_zero(size));
    nodes.push_back({depth - log_size, offset / size});
    pos += size;
  }
  return nodes;
}

std::uint64_t NodeEncoder::DomainSize(const TreeParams& params) {
  return 4 * (2 * params.padded_length - 1);
}

NodeEncoder::NodeEncoder(const TreeParams& params)
    : depth_(params.depth),
      words_((params.dims().volume() + 63) / 64),
      level_base_(params.depth + 1, 0),
      masks_(DomainSize(params) * words_, 0) {
  std::uint64_t base = 0;
  for (std::uint32_t level = 0; level <= depth_; ++level) {
    level_base_[level] = base;
    base += 2 * (params.padded_length >> level);
  }
  const std::uint64_t domain = DomainSize(params);
  const HashFamily family(params.seed, domain, params.m1, params.m2, params.m3);
  const SketchDims dims = params.dims();
  for (std::uint64_t x = 0; x < domain; ++x) {
    std::uint64_t* mask = &masks_[x * words_];
    const std::uint32_t j = family.H(x) - 1;
    for (std::uint32_t i = 1; i <= params.m1; ++i) {
      const std::uint64_t cell =
          HammingSketch::CellIndex(dims, i - 1, j, family.G(x, i) - 1);
      mask[cell >> 6] ^= std::uint64_t{1} << (cell & 63);
    }
  }
}

void NodeEncoder::XorEncode(const PackedBitString& s, std::uint64_t start,
                            const NodeId& node,
                            std::span<std::uint64_t> acc) const {
  const std::uint64_t count = node.length(depth_);
  const std::uint64_t label0 =
      level_base_[node.level] + (node.index & 1) * count;
  for (std::uint64_t t = 0; t < count; ++t) {
    const std::uint64_t x = 2 * (label0 + t) + (s.bit(start + t) ? 1 : 0);
    const std::uint64_t* mask = &masks_[x * words_];
    for (std::size_t w = 0; w < words_; ++w) acc[w] ^= mask[w];
  }
}

DyadicTree::DyadicTree(TreeParams params, std::size_t words_per_node)
    : params_(std::move(params)),
      words_per_node_(words_per_node),
      words_(params_.node_count() * words_per_node, 0) {}

DyadicTree DyadicTree::Build(const PackedBitString& a, const TreeParams& params,
                             Rng* noise) {
  if (a.length() != params.true_length) {
    throw Error(ErrorCode::kLengthMismatch,
                "string length " + std::to_string(a.length()) +
                    " vs tree n=" + std::to_string(params.true_length));
  }
  const PackedBitString padded = PadToPow2(a);
  const NodeEncoder encoder(params);
  DyadicTree tree(params, encoder.words_per_sketch());
  const std::uint64_t volume = params.dims().volume();
  for (std::uint32_t level = 0; level <= params.depth; ++level) {
    for (std::uint64_t index = 0; index < (std::uint64_t{1} << level);
         ++index) {
      const NodeId id{level, index};
      const std::span<std::uint64_t> node(
          &tree.words_[id.flat() * tree.words_per_node_], tree.words_per_node_);
      encoder.XorEncode(padded, id.start(params.depth) - 1, id, node);
      if (noise != nullptr) FlipBits(node, volume, params.q_node, *noise);
    }
  }
  return tree;
}

DyadicTree DyadicTree::Build(const PackedBitString& a, std::uint32_t k,
                             double eps, const Seed& seed, Rng& noise) {
  return Build(a, MakeTreeParams(a.length(), k, eps, seed), &noise);
}

DyadicTree DyadicTree::FromReleased(TreeParams params,
                                    std::vector<HammingSketch> nodes) {
  if (nodes.size() != params.node_count()) {
    throw Error(ErrorCode::kVolumeMismatch,
                "tree has " + std::to_string(nodes.size()) + " nodes, want " +
                    std::to_string(params.node_count()));
  }
  const std::size_t words = (params.dims().volume() + 63) / 64;
  DyadicTree tree(std::move(params), words);
  for (std::size_t f = 0; f < nodes.size(); ++f) {
    if (nodes[f].dims() != tree.params_.dims()) {
      throw Error(ErrorCode::kVolumeMismatch,
                  "node " + std::to_string(f) + " has wrong dimensions");
    }
    std::copy(nodes[f].words().begin(), nodes[f].words().end(),
              tree.words_.begin() + static_cast<std::ptrdiff_t>(f * words));
  }
  return tree;
}

std::span<const std::uint64_t> DyadicTree::node_words(
    std::uint64_t flat) const {
  if (flat >= node_count()) {
    throw Error(ErrorCode::kOutOfRange, "node " + std::to_string(flat));
  }
  return {&words_[flat * words_per_node_], words_per_node_};
}

HammingSketch DyadicTree::NodeSketch(const NodeId& id) const {
  HammingSketch out(params_.dims());
  const auto src = node_words(id.flat());
  std::copy(src.begin(), src.end(), out.mutable_words().begin());
  return out;
}

HammingSketch DyadicTree::IntervalSketch(std::span<const NodeId> nodes) const {
  HammingSketch out(params_.dims());
  const auto acc = out.mutable_words();
  for (const NodeId& id : nodes) {
    const auto src = node_words(id.flat());
    for (std::size_t w = 0; w < words_per_node_; ++w) acc[w] ^= src[w];
  }
  return out;
}

HammingSketch DyadicTree::IntervalSketch(std::uint64_t p_l,
                                         std::uint64_t p_r) const {
  return IntervalSketch(CanonicalDecompose(params_.depth, p_l, p_r));
}

QuerySide::QuerySide(const TreeParams& params, const PackedBitString& b,
                     bool with_tree)
    : params_(params), encoder_(params) {
  if (b.length() != params.true_length) {
    throw Error(ErrorCode::kLengthMismatch,
                "query length " + std::to_string(b.length()) +
                    " vs database n=" + std::to_string(params.true_length));
  }
  padded_ = PadToPow2(b);
  if (with_tree) tree_ = DyadicTree::Build(b, params, nullptr);
}

HammingSketch QuerySide::WindowSketch(std::span<const NodeId> decomposition,
                                      std::int64_t shift) const {
  HammingSketch out(params_.dims());
  const auto padded = static_cast<std::int64_t>(params_.padded_length);
  for (const NodeId& id : decomposition) {
    const auto start =
        static_cast<std::int64_t>(id.start(params_.depth)) + shift;
    const auto length = static_cast<std::int64_t>(id.length(params_.depth));
    if (start < 1 || start + length - 1 > padded) {
      throw Error(ErrorCode::kOutOfRange,
                  "shifted window [" + std::to_string(start) + ", " +
                      std::to_string(start + length - 1) +
                      "] outside the query string");
    }
    encoder_.XorEncode(padded_, static_cast<std::uint64_t>(start - 1), id,
                       out.mutable_words());
  }
  return out;
}

LcpQueryResult LcpQuery(const DyadicTree& a_tree, const QuerySide& query,
                        std::uint64_t i, std::uint64_t j, LcpBackend backend) {
  const TreeParams& params = a_tree.params();
  const std::uint64_t n = params.true_length;
  if (i == 0 || j == 0 || i > n || j > n) {
    throw Error(ErrorCode::kOutOfRange, "LCP positions (" + std::to_string(i) +
                                            ", " + std::to_string(j) +
                                            ") outside [1, " +
                                            std::to_string(n) + "]");
  }
  if (backend == LcpBackend::kTreeAligned && !query.tree().has_value()) {
    throw Error(ErrorCode::kInvalidArgument,
                "tree-aligned backend needs a query-side tree");
  }
  const double threshold = params.threshold();
  const std::int64_t shift =
      static_cast<std::int64_t>(j) - static_cast<std::int64_t>(i);

  LcpQueryResult result;
  std::uint64_t lo = 0;
  std::uint64_t hi = n - std::max(i, j) + 1;
  while (lo != hi) {
    const std::uint64_t mid = (lo + hi + 1) / 2;
    const std::vector<NodeId> nodes =
        CanonicalDecompose(params.depth, i, i + mid - 1);
    const HammingSketch a_sketch = a_tree.IntervalSketch(nodes);
    const HammingSketch b_sketch =
        backend == LcpBackend::kWindowEncode
            ? query.WindowSketch(nodes, shift)
            : query.tree()->IntervalSketch(j, j + mid - 1);
    const double distance = SketchDistance(a_sketch, b_sketch);
    result.thresholded_distances.push_back(distance);
    ++result.steps;
    if (distance <= threshold) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  result.w_tilde = lo;
  return result;
}

}  // namespace dpsd
