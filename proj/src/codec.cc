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

#include "vsagg/codec.h"

#include <cmath>
#include <string>

#include "vsagg/errors.h"

namespace vsagg {

CodecParams::CodecParams(double delta, FieldModulus R_w, uint64_t n_max,
                         double x_min, double x_max)
    : delta_(delta),
      modulus_(R_w),
      n_max_(n_max),
      x_min_(x_min),
      x_max_(x_max) {}

CodecParams CodecParams::CreatePow2(int delta_exp, FieldModulus R_w,
                                    uint64_t n_max, double x_min, double x_max) {
  if (delta_exp < 0 || delta_exp > 60) {
    throw Error(ErrorCode::kInvalidArgument,
                "scaling exponent must be in [0, 60], got " + std::to_string(delta_exp));
  }
  return Create(std::ldexp(1.0, delta_exp), R_w, n_max, x_min, x_max);
}

CodecParams CodecParams::Create(double delta, FieldModulus R_w, uint64_t n_max,
                                double x_min, double x_max) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::kInvalidArgument, "scaling factor must be positive");
  }
  if (!(x_min <= 0.0 && 0.0 <= x_max) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw Error(ErrorCode::kInvalidArgument, "bounds must be finite and bracket zero");
  }
  if (n_max == 0) throw Error(ErrorCode::kInvalidArgument, "n_max must be >= 1");
  CodecParams p(delta, R_w, n_max, x_min, x_max);
  if (!CheckCapacity(p, n_max)) {
    throw Error(ErrorCode::kCapacityViolation,
                "n_max=" + std::to_string(n_max) +
                    " participants could overflow the modulus at this scale");
  }
  return p;
}

int64_t QuantizeValue(double value, const CodecParams& params) {
  // std::round breaks ties away from zero.
  return static_cast<int64_t>(std::round(value * params.delta()));
}

FieldVector Encode(std::span<const double> values, const CodecParams& params) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot encode an empty vector");
  std::vector<uint64_t> out(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    double v = values[i];
    if (!(v >= params.x_min() && v <= params.x_max())) {
      throw Error(ErrorCode::kOutOfBounds,
                  "value at index " + std::to_string(i) + " (" + std::to_string(v) +
                      ") outside [" + std::to_string(params.x_min()) + ", " +
                      std::to_string(params.x_max()) + "]");
    }
    out[i] = FromSigned(QuantizeValue(v, params), params.modulus()).residue;
  }
  return FieldVector::FromCanonical(std::move(out));
}

std::vector<double> Decode(const FieldVector& vec, const CodecParams& params,
                           uint64_t m) {
  if (m == 0) throw Error(ErrorCode::kZeroParticipants, "cannot decode with m = 0");
  std::vector<double> out(vec.size());
  const double scale = params.delta() * static_cast<double>(m);
  for (size_t i = 0; i < vec.size(); ++i) {
    out[i] = static_cast<double>(ToSigned(vec[i], params.modulus())) / scale;
  }
  return out;
}

bool CheckCapacity(const CodecParams& params, uint64_t m) {
  // Long double keeps huge scaled bounds comparable without integer overflow.
  const long double half = static_cast<long double>(params.modulus().half());
  const long double hi = std::round(static_cast<long double>(params.x_max()) * params.delta());
  const long double lo = std::round(static_cast<long double>(params.x_min()) * params.delta());
  const long double count = static_cast<long double>(m);
  return count * hi < half && count * lo > -half;
}

}  // namespace vsagg
