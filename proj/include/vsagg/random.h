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

#ifndef VSAGG_RANDOM_H_
#define VSAGG_RANDOM_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>

#include "vsagg/prf.h"

namespace vsagg {

class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void Fill(std::span<uint8_t> out) = 0;

  uint64_t NextU64();
  // Uniform in [0, bound), bound >= 1.
  uint64_t Uniform(uint64_t bound);
  // Uniform in [lo, hi) with 53 bits of resolution.
  double UniformReal(double lo, double hi);
  bool Bernoulli(double p);
};

// Operating-system CSPRNG.
class SystemRandom final : public RandomSource {
 public:
  void Fill(std::span<uint8_t> out) override;
};

// Seeded keystream generator for reproducible simulations. Forked children
// are keyed by (parent key, label) and are independent of the order in which
// they are created or consumed.
class DeterministicRandom final : public RandomSource {
 public:
  explicit DeterministicRandom(uint64_t seed);

  DeterministicRandom Fork(std::string_view label) const;
  DeterministicRandom Fork(std::string_view label, uint64_t index) const;

  void Fill(std::span<uint8_t> out) override;

 private:
  explicit DeterministicRandom(const CipherKey& key);

  CipherKey key_;
  Keystream stream_;
};

}  // namespace vsagg

#endif  // VSAGG_RANDOM_H_
