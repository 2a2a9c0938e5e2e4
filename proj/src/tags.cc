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

#include "vsagg/tags.h"

#include <vector>

namespace vsagg {

VerificationKeyVector DeriveTagKey(const KeyMaterial& verification_key,
                                   uint64_t round, size_t d, FieldModulus R_b) {
  return VerificationKeyVector{ExpandUnit(verification_key, round, d, R_b), round};
}

FieldElement LiftToTagField(FieldElement w, FieldModulus R_w, FieldModulus R_b) {
  if (R_w == R_b) return w;
  return ReduceSigned(ToSigned(w, R_w), R_b);
}

TagScalar GenTag(const FieldVector& w, const VerificationKeyVector& k_v,
                 FieldModulus R_w, FieldModulus R_b) {
  if (R_w == R_b) return TagScalar{Dot(w, k_v.data, R_b)};
  std::vector<uint64_t> lifted(w.size());
  for (size_t j = 0; j < w.size(); ++j) lifted[j] = LiftToTagField(w[j], R_w, R_b).residue;
  return TagScalar{Dot(FieldVector::FromCanonical(std::move(lifted)), k_v.data, R_b)};
}

bool Verify(const FieldVector& w_reconstructed, TagScalar b,
            const VerificationKeyVector& k_v, FieldModulus R_w, FieldModulus R_b) {
  return GenTag(w_reconstructed, k_v, R_w, R_b) == b;
}

void WriteTag(ByteWriter& w, TagScalar t) { WriteElement(w, t.value); }

TagScalar ReadTag(ByteReader& r, FieldModulus R_b) { return TagScalar{ReadElement(r, R_b)}; }

}  // namespace vsagg
