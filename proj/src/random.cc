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

#include "vsagg/random.h"

#include <openssl/rand.h>

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "vsagg/errors.h"

namespace vsagg {

uint64_t RandomSource::NextU64() {
  std::array<uint8_t, 8> b;
  Fill(b);
  return LoadU64Le(b.data());
}

uint64_t RandomSource::Uniform(uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "uniform bound must be >= 1");
  // Reject the tail of the 64-bit range that would bias the modulus.
  const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound);
  uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return x % bound;
}

double RandomSource::UniformReal(double lo, double hi) {
  double u = static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

bool RandomSource::Bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return UniformReal(0.0, 1.0) < p;
}

void SystemRandom::Fill(std::span<uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw Error(ErrorCode::kCrypto, "system randomness unavailable");
  }
}

namespace {

CipherKey SeedKey(uint64_t seed) {
  std::array<uint8_t, 16> material{};
  const char kTag[] = "vsagg-seed";
  std::copy(kTag, kTag + 8, material.begin());
  StoreU64Le(seed, material.data() + 8);
  return DeriveCipherKey(material);
}

}  // namespace

DeterministicRandom::DeterministicRandom(uint64_t seed)
    : DeterministicRandom(SeedKey(seed)) {}

DeterministicRandom::DeterministicRandom(const CipherKey& key)
    : key_(key), stream_(key, 0) {}

DeterministicRandom DeterministicRandom::Fork(std::string_view label) const {
  std::vector<uint8_t> material(key_.begin(), key_.end());
  material.insert(material.end(), label.begin(), label.end());
  return DeterministicRandom(DeriveCipherKey(material));
}

DeterministicRandom DeterministicRandom::Fork(std::string_view label,
                                              uint64_t index) const {
  std::string full(label);
  full += '#';
  full += std::to_string(index);
  return Fork(full);
}

void DeterministicRandom::Fill(std::span<uint8_t> out) { stream_.Fill(out); }

}  // namespace vsagg
