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

#include "vsagg/params.h"

#include <openssl/sha.h>

#include <bit>
#include <string>

#include "vsagg/errors.h"

namespace vsagg {

ProtocolParams MakeProtocolParams(size_t model_dimension, uint64_t n_max,
                                  int prime_bits, int delta_exp, bool weighted,
                                  double x_min, double x_max) {
  if (model_dimension == 0) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 1");
  if (prime_bits < 2 || prime_bits > 60) {
    throw Error(ErrorCode::kInvalidArgument,
                "prime_bits must be in [2, 60], got " + std::to_string(prime_bits));
  }
  FieldModulus R = FindPrimeAbove(uint64_t{1} << prime_bits);
  CodecParams codec = CodecParams::CreatePow2(delta_exp, R, n_max, x_min, x_max);
  return ProtocolParams{R, R, model_dimension + (weighted ? 1 : 0), codec, 128, weighted};
}

std::array<uint8_t, 32> ParamsDigest(const ProtocolParams& p) {
  ByteWriter w(80);
  w.PutU64(p.R_w.value());
  w.PutU64(p.R_b.value());
  w.PutU64(p.dimension);
  w.PutU64(std::bit_cast<uint64_t>(p.codec.delta()));
  w.PutU64(p.codec.n_max());
  w.PutU64(std::bit_cast<uint64_t>(p.codec.x_min()));
  w.PutU64(std::bit_cast<uint64_t>(p.codec.x_max()));
  w.PutU64(p.key_bits);
  w.PutU8(p.weighted ? 1 : 0);
  std::array<uint8_t, 32> out;
  SHA256(w.bytes().data(), w.size(), out.data());
  return out;
}

}  // namespace vsagg
