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

#include "dpsd/bitstring.h"

#include <bit>
#include <fstream>

#include "dpsd/error.h"

namespace dpsd {

namespace {
std::size_t WordCount(std::size_t bits) { return (bits + 63) / 64; }
}  // namespace

PackedBitString::PackedBitString(std::size_t length)
    : length_(length), words_(WordCount(length), 0) {}

bool PackedBitString::get(std::size_t p) const {
  if (p == 0 || p > length_) {
    throw Error(ErrorCode::kOutOfRange, "position " + std::to_string(p) +
                                            " outside [1, " +
                                            std::to_string(length_) + "]");
  }
  return bit(p - 1);
}

PackedBitString PackedBitString::Slice(std::size_t start,
                                       std::size_t count) const {
  if (start == 0 || start + count - 1 > length_) {
    throw Error(ErrorCode::kOutOfRange, "slice outside string");
  }
  PackedBitString out(count);
  for (std::size_t t = 0; t < count; ++t) out.set_bit(t, bit(start - 1 + t));
  return out;
}

std::string PackedBitString::ToString() const {
  std::string out(length_, '0');
  for (std::size_t t = 0; t < length_; ++t) {
    if (bit(t)) out[t] = '1';
  }
  return out;
}

PackedBitString ParseLine(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::kEmptyString, "empty line");
  PackedBitString out(text.size());
  for (std::size_t t = 0; t < text.size(); ++t) {
    const char ch = text[t];
    if (ch == '1') {
      out.set_bit(t, true);
    } else if (ch != '0') {
      throw Error(ErrorCode::kInvalidCharacter,
                  "unexpected character at position " + std::to_string(t + 1),
                  t + 1);
    }
  }
  return out;
}

std::size_t NextPow2(std::size_t n) { return std::bit_ceil(n); }

PackedBitString PadToPow2(const PackedBitString& s) {
  const std::size_t target = NextPow2(s.length());
  if (target == s.length()) return s;
  PackedBitString out(target);
  for (std::size_t t = 0; t < s.length(); ++t) out.set_bit(t, s.bit(t));
  return out;
}

std::size_t HammingPopcount(const PackedBitString& a,
                            const PackedBitString& b) {
  if (a.length() != b.length()) {
    throw Error(
        ErrorCode::kLengthMismatch,
        std::to_string(a.length()) + " vs " + std::to_string(b.length()));
  }
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t total = 0;
  for (std::size_t w = 0; w < wa.size(); ++w) {
    total += static_cast<std::size_t>(std::popcount(wa[w] ^ wb[w]));
  }
  return total;
}

std::vector<PackedBitString> ReadCorpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<PackedBitString> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::ifstream::traits_type::eof()) break;
    PackedBitString s;
    try {
      s = ParseLine(line);
    } catch (const Error& e) {
      throw Error(
          e.code(),
          path.string() + ":" + std::to_string(line_no) + ": " + e.what(),
          e.position());
    }
    if (!out.empty() && s.length() != out.front().length()) {
      throw Error(ErrorCode::kLengthMismatch,
                  path.string() + ":" + std::to_string(line_no) +
                      ": ragged corpus, length " + std::to_string(s.length()) +
                      " vs " + std::to_string(out.front().length()));
    }
    out.push_back(std::move(s));
  }
  return out;
}

void WriteCorpus(const std::filesystem::path& path,
                 std::span<const PackedBitString> strings) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& s : strings) out << s.ToString() << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

}  // namespace dpsd
