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

#ifndef VSAGG_CODEC_H_
#define VSAGG_CODEC_H_

// Fixed-point conversion between real-valued updates and vectors over Z_{R_w}.
//
// encode(x) = from_signed(round(x * delta)), ties away from zero.
// decode(v, m) = to_signed(v) / delta / m.
//
// Summation of m encoded vectors is exact (no wrap modulo R_w) whenever
// m * round(x_max * delta) < (R_w - 1) / 2 and
// m * round(x_min * delta) > -(R_w - 1) / 2.

#include <cstdint>
#include <span>
#include <vector>

#include "vsagg/field.h"

namespace vsagg {

class CodecParams {
 public:
  // Throws kCapacityViolation if n_max participants could wrap, and
  // kInvalidArgument for inconsistent bounds or a non-positive scale.
  static CodecParams Create(double delta, FieldModulus R_w, uint64_t n_max,
                            double x_min = -10.0, double x_max = 10.0);
  // delta = 2^delta_exp.
  static CodecParams CreatePow2(int delta_exp, FieldModulus R_w, uint64_t n_max,
                                double x_min = -10.0, double x_max = 10.0);

  double delta() const { return delta_; }
  FieldModulus modulus() const { return modulus_; }
  uint64_t n_max() const { return n_max_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }

 private:
  CodecParams(double delta, FieldModulus R_w, uint64_t n_max, double x_min,
              double x_max);

  double delta_;
  FieldModulus modulus_;
  uint64_t n_max_;
  double x_min_;
  double x_max_;
};

// Rounds value * delta to the nearest integer, ties away from zero.
int64_t QuantizeValue(double value, const CodecParams& params);

// Throws kOutOfBounds naming the first index outside [x_min, x_max].
FieldVector Encode(std::span<const double> values, const CodecParams& params);

// Throws kZeroParticipants when m == 0.
std::vector<double> Decode(const FieldVector& vec, const CodecParams& params,
                           uint64_t m);

// True iff m participants' worst-case sum cannot wrap modulo R_w.
bool CheckCapacity(const CodecParams& params, uint64_t m);

}  // namespace vsagg

#endif  // VSAGG_CODEC_H_
