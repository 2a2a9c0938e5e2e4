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

#ifndef VSAGG_SHARING_H_
#define VSAGG_SHARING_H_

// 2-of-2 additive secret sharing over Z_R where one share can be a PRF
// output regenerated by the key holder instead of being transmitted.

#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "vsagg/field.h"
#include "vsagg/prf.h"

namespace vsagg {

class RandomSource;

enum class Holder { kComputationServer, kVerificationServer };

// Holder and origin are bookkeeping for assertions; they never hit the wire.
struct ShareVector {
  FieldVector data;
  Holder holder;
  std::string origin;
};

// secret - expand(key, round, |secret|, R).
ShareVector ShareWithPrf(const FieldVector& secret, const KeyMaterial& key,
                         uint64_t round, FieldModulus R,
                         Holder holder = Holder::kComputationServer,
                         std::string origin = {});

// (s1, secret - s1) with s1 uniform.
std::pair<FieldVector, FieldVector> ShareExplicit(const FieldVector& secret,
                                                  FieldModulus R,
                                                  RandomSource& rng);
std::pair<FieldElement, FieldElement> ShareExplicit(FieldElement secret,
                                                    FieldModulus R,
                                                    RandomSource& rng);

// s1 + s2. Throws kLengthMismatch.
FieldVector Reconstruct(const FieldVector& s1, const FieldVector& s2, FieldModulus R);

// Elementwise sum of shares from one holder. Throws kEmptyInput,
// kHolderMismatch or kLengthMismatch.
ShareVector AggregateShares(std::span<const ShareVector> shares, FieldModulus R);

// aggregate - expand(mask_key, round, |aggregate|, R). The receiver adds this
// to its own aggregate; the remaining counterpart is the public-key mask.
FieldVector Reshare(const ShareVector& aggregate, const KeyMaterial& mask_key,
                    uint64_t round, FieldModulus R);

}  // namespace vsagg

#endif  // VSAGG_SHARING_H_
