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

#ifndef VSAGG_FIELD_H_
#define VSAGG_FIELD_H_

// Prime-field arithmetic for moduli below 2^61.
//
// Elements are kept in canonical form [0, R). The signed view in
// [-(R-1)/2, (R-1)/2] is only used when converting to and from real values.
// Products go through an unsigned 128-bit intermediate.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "vsagg/bytes.h"

namespace vsagg {

inline constexpr uint64_t kMaxModulusExclusive = uint64_t{1} << 61;

// Deterministic Miller-Rabin for all 64-bit inputs.
bool IsPrime(uint64_t n);

class FieldModulus {
 public:
  // Throws Error(kInvalidArgument) unless `value` is a prime in (2, 2^61).
  static FieldModulus Create(uint64_t value);

  uint64_t value() const { return value_; }
  // (R - 1) / 2, the largest magnitude of a signed representative.
  uint64_t half() const { return (value_ - 1) / 2; }

  friend bool operator==(FieldModulus a, FieldModulus b) = default;

 private:
  explicit FieldModulus(uint64_t v) : value_(v) {}
  uint64_t value_;
};

// Smallest prime strictly greater than `lower_bound`.
// Requires 2 <= lower_bound < 2^61 - 2^32; otherwise kBoundOutOfRange.
FieldModulus FindPrimeAbove(uint64_t lower_bound);

struct FieldElement {
  uint64_t residue = 0;

  friend bool operator==(FieldElement a, FieldElement b) = default;
};

// Throws kOutOfBounds if `residue` is not canonical under `R`.
FieldElement MakeElement(uint64_t residue, FieldModulus R);

inline FieldElement Add(FieldElement a, FieldElement b, FieldModulus R) {
  uint64_t s = a.residue + b.residue;  // < 2^62, no overflow
  return {s >= R.value() ? s - R.value() : s};
}

inline FieldElement Neg(FieldElement a, FieldModulus R) {
  return {a.residue == 0 ? 0 : R.value() - a.residue};
}

inline FieldElement Sub(FieldElement a, FieldElement b, FieldModulus R) {
  return Add(a, Neg(b, R), R);
}

inline FieldElement Mul(FieldElement a, FieldElement b, FieldModulus R) {
  unsigned __int128 p = static_cast<unsigned __int128>(a.residue) * b.residue;
  return {static_cast<uint64_t>(p % R.value())};
}

int64_t ToSigned(FieldElement a, FieldModulus R);
// Throws kOutOfBounds if |v| > (R-1)/2.
FieldElement FromSigned(int64_t v, FieldModulus R);
// Reduces any integer into [0, R).
FieldElement ReduceSigned(int64_t v, FieldModulus R);

// Fixed-length vector of canonical residues. The modulus is not stored; every
// operation takes it explicitly.
class FieldVector {
 public:
  FieldVector() = default;
  // Zero vector of length d (d >= 1).
  explicit FieldVector(size_t d);
  // Takes ownership; throws kOutOfBounds if any value is >= R.
  FieldVector(std::vector<uint64_t> values, FieldModulus R);
  FieldVector(std::initializer_list<uint64_t> values, FieldModulus R);

  // Skips the canonical-form check. Only for producers that already reduce.
  static FieldVector FromCanonical(std::vector<uint64_t> values);

  size_t size() const { return data_.size(); }
  FieldElement operator[](size_t i) const { return {data_[i]}; }
  std::span<const uint64_t> values() const { return data_; }

  friend bool operator==(const FieldVector&, const FieldVector&) = default;

 private:
  std::vector<uint64_t> data_;
};

FieldVector AddVectors(const FieldVector& a, const FieldVector& b, FieldModulus R);
FieldVector SubVectors(const FieldVector& a, const FieldVector& b, FieldModulus R);
// In-place a += b.
void AccumulateInto(std::vector<uint64_t>& acc, std::span<const uint64_t> b,
                    FieldModulus R);

// Sum_j a_j * b_j mod R. Throws kLengthMismatch.
FieldElement Dot(const FieldVector& a, const FieldVector& b, FieldModulus R);

// 8-byte little-endian word per element; vectors carry a 4-byte count prefix.
void WriteElement(ByteWriter& w, FieldElement e);
void WriteVector(ByteWriter& w, const FieldVector& v);
FieldElement ReadElement(ByteReader& r, FieldModulus R);
FieldVector ReadVector(ByteReader& r, FieldModulus R);

}  // namespace vsagg

#endif  // VSAGG_FIELD_H_
