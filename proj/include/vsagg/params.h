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

#ifndef VSAGG_PARAMS_H_
#define VSAGG_PARAMS_H_

#include <array>
#include <cstddef>
#include <cstdint>

#include "vsagg/codec.h"
#include "vsagg/field.h"

namespace vsagg {

// Parameters every role must agree on. `dimension` is the length of the
// vectors on the wire; in weighted mode it includes the trailing weight slot.
struct ProtocolParams {
  FieldModulus R_w;
  FieldModulus R_b;
  size_t dimension;
  CodecParams codec;
  size_t key_bits = 128;
  bool weighted = false;

  // Model length seen by callers (dimension minus the weight slot).
  size_t model_dimension() const { return weighted ? dimension - 1 : dimension; }
};

// Default moduli: R_w = R_b = smallest prime above 2^prime_bits.
// Throws on capacity violations or a zero dimension.
ProtocolParams MakeProtocolParams(size_t model_dimension, uint64_t n_max,
                                  int prime_bits = 60, int delta_exp = 40,
                                  bool weighted = false, double x_min = -10.0,
                                  double x_max = 10.0);

// SHA-256 over a canonical encoding of every field.
std::array<uint8_t, 32> ParamsDigest(const ProtocolParams& params);

}  // namespace vsagg

#endif  // VSAGG_PARAMS_H_
