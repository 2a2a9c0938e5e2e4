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

#include "vsagg/sharing.h"

#include <vector>

#include "vsagg/errors.h"
#include "vsagg/random.h"

namespace vsagg {

ShareVector ShareWithPrf(const FieldVector& secret, const KeyMaterial& key,
                         uint64_t round, FieldModulus R, Holder holder,
                         std::string origin) {
  FieldVector mask = Expand(key, round, secret.size(), R);
  return ShareVector{SubVectors(secret, mask, R), holder, std::move(origin)};
}

std::pair<FieldVector, FieldVector> ShareExplicit(const FieldVector& secret,
                                                  FieldModulus R,
                                                  RandomSource& rng) {
  std::vector<uint64_t> first(secret.size());
  for (auto& x : first) x = rng.Uniform(R.value());
  FieldVector s1 = FieldVector::FromCanonical(std::move(first));
  FieldVector s2 = SubVectors(secret, s1, R);
  return {std::move(s1), std::move(s2)};
}

std::pair<FieldElement, FieldElement> ShareExplicit(FieldElement secret,
                                                    FieldModulus R,
                                                    RandomSource& rng) {
  FieldElement s1{rng.Uniform(R.value())};
  return {s1, Sub(secret, s1, R)};
}

FieldVector Reconstruct(const FieldVector& s1, const FieldVector& s2, FieldModulus R) {
  return AddVectors(s1, s2, R);
}

ShareVector AggregateShares(std::span<const ShareVector> shares, FieldModulus R) {
  if (shares.empty()) throw Error(ErrorCode::kEmptyInput, "no shares to aggregate");
  const Holder holder = shares.front().holder;
  std::vector<uint64_t> acc(shares.front().data.size(), 0);
  for (const auto& s : shares) {
    if (s.holder != holder) {
      throw Error(ErrorCode::kHolderMismatch, "shares from different holders");
    }
    AccumulateInto(acc, s.data.values(), R);
  }
  return ShareVector{FieldVector::FromCanonical(std::move(acc)), holder, "aggregate"};
}

FieldVector Reshare(const ShareVector& aggregate, const KeyMaterial& mask_key,
                    uint64_t round, FieldModulus R) {
  return SubVectors(aggregate.data, Expand(mask_key, round, aggregate.data.size(), R), R);
}

}  // namespace vsagg
