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

#ifndef VSAGG_TAGS_H_
#define VSAGG_TAGS_H_

// Linear verification tags over Z_{R_b}.
//
// A tag of w under the round key k_v is sum_j lift(w_j) * k_v[j] mod R_b,
// where lift maps a residue under R_w to its signed representative and then
// reduces it modulo R_b (the identity when R_w == R_b). Tags are additive in
// w as long as the integer sum of the tagged vectors does not wrap under R_w.

#include <cstdint>

#include "vsagg/bytes.h"
#include "vsagg/field.h"
#include "vsagg/prf.h"

namespace vsagg {

inline constexpr size_t kTagBytes = 8;

struct TagScalar {
  FieldElement value;

  friend bool operator==(TagScalar, TagScalar) = default;
};

struct VerificationKeyVector {
  FieldVector data;  // every element in [1, R_b - 1]
  uint64_t round = 0;
};

// k_v = expand(K_v, r, d, Z_{R_b - 1}) + 1.
VerificationKeyVector DeriveTagKey(const KeyMaterial& verification_key,
                                   uint64_t round, size_t d, FieldModulus R_b);

FieldElement LiftToTagField(FieldElement w, FieldModulus R_w, FieldModulus R_b);

// Throws kLengthMismatch.
TagScalar GenTag(const FieldVector& w, const VerificationKeyVector& k_v,
                 FieldModulus R_w, FieldModulus R_b);

// Recomputes the tag of the reconstructed aggregate and compares it with b.
bool Verify(const FieldVector& w_reconstructed, TagScalar b,
            const VerificationKeyVector& k_v, FieldModulus R_w, FieldModulus R_b);

void WriteTag(ByteWriter& w, TagScalar t);
TagScalar ReadTag(ByteReader& r, FieldModulus R_b);

}  // namespace vsagg

#endif  // VSAGG_TAGS_H_
