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

#ifndef VSAGG_BYTES_H_
#define VSAGG_BYTES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace vsagg {

using Bytes = std::vector<uint8_t>;

// Little-endian append-only encoder.
class ByteWriter {
 public:
  ByteWriter() = default;
  explicit ByteWriter(size_t reserve) { buf_.reserve(reserve); }

  void PutU8(uint8_t v) { buf_.push_back(v); }
  void PutU32(uint32_t v);
  void PutU64(uint64_t v);
  void PutBytes(std::span<const uint8_t> data);

  size_t size() const { return buf_.size(); }
  Bytes Take() && { return std::move(buf_); }
  const Bytes& bytes() const { return buf_; }

 private:
  Bytes buf_;
};

// Little-endian cursor over a borrowed buffer. Reads past the end throw
// Error(kTruncatedFrame) naming the offset at which data ran out.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t GetU8();
  uint32_t GetU32();
  uint64_t GetU64();
  std::span<const uint8_t> GetBytes(size_t n);

  size_t offset() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }

 private:
  void Require(size_t n) const;

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

uint64_t LoadU64Le(const uint8_t* p);
void StoreU64Le(uint64_t v, uint8_t* p);

}  // namespace vsagg

#endif  // VSAGG_BYTES_H_
