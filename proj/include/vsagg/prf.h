/*
 * Copyright 2026 The vsagg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VSAGG_PRF_H_
#define VSAGG_PRF_H_

// Keyed expansion of (key, round) into pseudo-random field vectors.
//
// Keystream: AES-256 in counter mode. The cipher key is SHA-256 of the key
// material. The initial counter block holds the round index v0 little-endian
// in bytes 0..7 and zeros in bytes 8..15; the block counter increments in the
// low (big-endian) half, so distinct rounds never share counter blocks as
// long as fewer than 2^32 elements are requested.
//
// Sampling: each candidate is the next 8 keystream bytes read as a
// little-endian word, masked to the bit length of the bound, and rejected
// until it falls below the bound. For every bound in (2^60, 2^61) the mask is
// exactly 61 bits.

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "vsagg/field.h"

namespace vsagg {

class RandomSource;

// Security parameter lambda = 128 bits.
inline constexpr size_t kKeyBytes = 16;
inline constexpr size_t kMaxExpansionLength = size_t{1} << 32;

class KeyMaterial {
 public:
  KeyMaterial() = default;
  // Throws kInvalidArgument on an empty span.
  static KeyMaterial FromBytes(std::span<const uint8_t> bytes);
  static KeyMaterial Generate(RandomSource& rng);

  std::span<const uint8_t> bytes() const { return bytes_; }
  size_t size() const { return bytes_.size(); }
  bool empty() const { return bytes_.empty(); }

  friend bool operator==(const KeyMaterial&, const KeyMaterial&) = default;

 private:
  std::vector<uint8_t> bytes_;
};

// k1 || k2.
KeyMaterial ConcatKeys(const KeyMaterial& k1, const KeyMaterial& k2);

using CipherKey = std::array<uint8_t, 32>;

// SHA-256 of the master bytes. Throws kInvalidArgument on empty input.
CipherKey DeriveCipherKey(std::span<const uint8_t> master);
inline CipherKey DeriveCipherKey(const KeyMaterial& master) {
  return DeriveCipherKey(master.bytes());
}

// Raw AES-256-CTR keystream starting at the counter block for `v0`.
class Keystream {
 public:
  Keystream(const CipherKey& key, uint64_t v0);
  ~Keystream();
  Keystream(Keystream&&) noexcept;
  Keystream& operator=(Keystream&&) noexcept;
  Keystream(const Keystream&) = delete;
  Keystream& operator=(const Keystream&) = delete;

  void Fill(std::span<uint8_t> out);
  uint64_t NextWord();

 private:
  void Refill();

  struct CipherCtx;
  std::unique_ptr<CipherCtx> ctx_;
  std::array<uint8_t, 4096> buf_{};
  size_t pos_ = 4096;
};

struct ExpansionRequest {
  const KeyMaterial& key;
  uint64_t v0;
  size_t length;
  FieldModulus modulus;
};

// Uniform draws in [0, bound) for any bound >= 1. Throws kLengthOverflow when
// length >= 2^32 and kInvalidArgument for an empty key or length 0.
std::vector<uint64_t> ExpandBelow(const KeyMaterial& key, uint64_t v0,
                                  size_t length, uint64_t bound);

FieldVector Expand(const ExpansionRequest& req);
inline FieldVector Expand(const KeyMaterial& key, uint64_t v0, size_t length,
                          FieldModulus R) {
  return Expand(ExpansionRequest{key, v0, length, R});
}

// Expand over Z_{R-1}, then add one: every element lands in [1, R-1].
FieldVector ExpandUnit(const KeyMaterial& key, uint64_t v0, size_t length,
                       FieldModulus R);

}  // namespace vsagg

#endif  // VSAGG_PRF_H_
