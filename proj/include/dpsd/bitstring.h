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

#ifndef DPSD_BITSTRING_H_
#define DPSD_BITSTRING_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dpsd {

// A binary string of fixed length, packed 64 symbols per word. Symbol p
// (1-indexed) lives in word (p-1)/64 at bit (p-1)%64, so the little-endian
// byte image is LSB-first within each byte. Bits past length() are zero.
class PackedBitString {
 public:
  PackedBitString() = default;
  // All-zero string of the given length.
  explicit PackedBitString(std::size_t length);

  std::size_t length() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }

  // 1-indexed access; throws kOutOfRange outside [1, length()].
  bool get(std::size_t p) const;

  // 0-indexed unchecked access for hot loops.
  bool bit(std::size_t index) const noexcept {
    return (words_[index >> 6] >> (index & 63)) & 1u;
  }
  void set_bit(std::size_t index, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (index & 63);
    if (value) {
      words_[index >> 6] |= mask;
    } else {
      words_[index >> 6] &= ~mask;
    }
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  // Copy of positions [start, start + count - 1] (1-indexed).
  PackedBitString Slice(std::size_t start, std::size_t count) const;

  std::string ToString() const;

  friend bool operator==(const PackedBitString&,
                         const PackedBitString&) = default;

 private:
  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

// Parses a line of '0'/'1' characters. Errors: kEmptyString, or
// kInvalidCharacter with the 1-indexed offending position.
PackedBitString ParseLine(std::string_view text);

// Zero-pads to the smallest power of two >= length.
PackedBitString PadToPow2(const PackedBitString& s);

// Number of positions where a and b differ. kLengthMismatch on unequal
// lengths.
std::size_t HammingPopcount(const PackedBitString& a, const PackedBitString& b);

// Smallest power of two >= n (n >= 1).
std::size_t NextPow2(std::size_t n);

// Corpus files: one string per line, all lines the same length.
std::vector<PackedBitString> ReadCorpus(const std::filesystem::path& path);
void WriteCorpus(const std::filesystem::path& path,
                 std::span<const PackedBitString> strings);

}  // namespace dpsd

#endif  // DPSD_BITSTRING_H_
