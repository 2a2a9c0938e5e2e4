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

#include "vsagg/field.h"

#include <algorithm>
#include <string>
#include <utility>

#include "vsagg/errors.h"

namespace vsagg {
namespace {

using u128 = unsigned __int128;

uint64_t MulMod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<u128>(a) * b % m);
}

uint64_t PowMod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = MulMod(result, base, m);
    base = MulMod(base, base, m);
    exp >>= 1;
  }
  return result;
}

void CheckSameLength(size_t a, size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kLengthMismatch,
                "vector length mismatch: " + std::to_string(a) + " vs " +
                    std::to_string(b));
  }
}

}  // namespace

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  static constexpr uint64_t kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (uint64_t p : kSmall) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are a deterministic witness set below 3.3e24.
  for (uint64_t a : kSmall) {
    uint64_t x = PowMod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = MulMod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FieldModulus FieldModulus::Create(uint64_t value) {
  if (value <= 2 || value >= kMaxModulusExclusive || !IsPrime(value)) {
    throw Error(ErrorCode::kInvalidArgument,
                "modulus must be an odd prime below 2^61, got " +
                    std::to_string(value));
  }
  return FieldModulus(value);
}

FieldModulus FindPrimeAbove(uint64_t lower_bound) {
  constexpr uint64_t kLimit = kMaxModulusExclusive - (uint64_t{1} << 32);
  if (lower_bound < 2 || lower_bound >= kLimit) {
    throw Error(ErrorCode::kBoundOutOfRange,
                "prime search bound out of range: " + std::to_string(lower_bound));
  }
  for (uint64_t c = lower_bound + 1; c < kMaxModulusExclusive; ++c) {
    if (IsPrime(c)) return FieldModulus::Create(c);
  }
  throw Error(ErrorCode::kBoundOutOfRange,
              "no prime below 2^61 above " + std::to_string(lower_bound));
}

FieldElement MakeElement(uint64_t residue, FieldModulus R) {
  if (residue >= R.value()) {
    throw Error(ErrorCode::kOutOfBounds,
                "residue " + std::to_string(residue) + " not below modulus " +
                    std::to_string(R.value()));
  }
  return {residue};
}

int64_t ToSigned(FieldElement a, FieldModulus R) {
  if (a.residue <= R.half()) return static_cast<int64_t>(a.residue);
  return -static_cast<int64_t>(R.value() - a.residue);
}

FieldElement FromSigned(int64_t v, FieldModulus R) {
  uint64_t mag = v < 0 ? static_cast<uint64_t>(-(v + 1)) + 1 : static_cast<uint64_t>(v);
  if (mag > R.half()) {
    throw Error(ErrorCode::kOutOfBounds,
                "signed value " + std::to_string(v) + " exceeds (R-1)/2");
  }
  return v < 0 ? FieldElement{R.value() - mag} : FieldElement{mag};
}

FieldElement ReduceSigned(int64_t v, FieldModulus R) {
  int64_t m = static_cast<int64_t>(R.value());
  int64_t r = v % m;
  if (r < 0) r += m;
  return {static_cast<uint64_t>(r)};
}

FieldVector::FieldVector(size_t d) : data_(d, 0) {
  if (d == 0) throw Error(ErrorCode::kInvalidArgument, "vector length must be >= 1");
}

FieldVector::FieldVector(std::vector<uint64_t> values, FieldModulus R)
    : data_(std::move(values)) {
  if (data_.empty()) throw Error(ErrorCode::kInvalidArgument, "vector length must be >= 1");
  for (size_t i = 0; i < data_.size(); ++i) {
    if (data_[i] >= R.value()) {
      throw Error(ErrorCode::kOutOfBounds,
                  "element " + std::to_string(i) + " not canonical");
    }
  }
}

FieldVector::FieldVector(std::initializer_list<uint64_t> values, FieldModulus R)
    : FieldVector(std::vector<uint64_t>(values), R) {}

FieldVector FieldVector::FromCanonical(std::vector<uint64_t> values) {
  FieldVector v;
  v.data_ = std::move(values);
  return v;
}

FieldVector AddVectors(const FieldVector& a, const FieldVector& b, FieldModulus R) {
  CheckSameLength(a.size(), b.size());
  std::vector<uint64_t> out(a.values().begin(), a.values().end());
  AccumulateInto(out, b.values(), R);
  return FieldVector::FromCanonical(std::move(out));
}

FieldVector SubVectors(const FieldVector& a, const FieldVector& b, FieldModulus R) {
  CheckSameLength(a.size(), b.size());
  std::vector<uint64_t> out(a.size());
  const uint64_t m = R.value();
  auto av = a.values();
  auto bv = b.values();
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = av[i] >= bv[i] ? av[i] - bv[i] : av[i] + (m - bv[i]);
  }
  return FieldVector::FromCanonical(std::move(out));
}

void AccumulateInto(std::vector<uint64_t>& acc, std::span<const uint64_t> b,
                    FieldModulus R) {
  CheckSameLength(acc.size(), b.size());
  const uint64_t m = R.value();
  for (size_t i = 0; i < acc.size(); ++i) {
    uint64_t s = acc[i] + b[i];
    acc[i] = s >= m ? s - m : s;
  }
}

FieldElement Dot(const FieldVector& a, const FieldVector& b, FieldModulus R) {
  CheckSameLength(a.size(), b.size());
  auto av = a.values();
  auto bv = b.values();
  // Products are < 2^122, so 32 of them fit in the 128-bit accumulator.
  constexpr size_t kLazyBatch = 32;
  const uint64_t m = R.value();
  uint64_t total = 0;
  for (size_t start = 0; start < av.size(); start += kLazyBatch) {
    size_t end = std::min(av.size(), start + kLazyBatch);
    u128 acc = 0;
    for (size_t j = start; j < end; ++j) acc += static_cast<u128>(av[j]) * bv[j];
    total = static_cast<uint64_t>((acc + total) % m);
  }
  return {total};
}

void WriteElement(ByteWriter& w, FieldElement e) { w.PutU64(e.residue); }

void WriteVector(ByteWriter& w, const FieldVector& v) {
  w.PutU32(static_cast<uint32_t>(v.size()));
  for (uint64_t x : v.values()) w.PutU64(x);
}

FieldElement ReadElement(ByteReader& r, FieldModulus R) {
  size_t at = r.offset();
  uint64_t v = r.GetU64();
  if (v >= R.value()) {
    throw Error(ErrorCode::kOutOfBounds,
                "non-canonical field element at byte offset " + std::to_string(at));
  }
  return {v};
}

FieldVector ReadVector(ByteReader& r, FieldModulus R) {
  uint32_t count = r.GetU32();
  if (count == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "empty vector at byte offset " + std::to_string(r.offset() - 4));
  }
  std::vector<uint64_t> out;
  out.reserve(count);
  for (uint32_t i = 0; i < count; ++i) out.push_back(ReadElement(r, R).residue);
  return FieldVector::FromCanonical(std::move(out));
}

}  // namespace vsagg
