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

#include "vsagg/bytes.h"

#include <string>

#include "vsagg/errors.h"

namespace vsagg {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kBoundOutOfRange: return "bound-out-of-range";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kLengthOverflow: return "length-overflow";
    case ErrorCode::kOutOfBounds: return "out-of-bounds";
    case ErrorCode::kZeroParticipants: return "zero-participants";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kHolderMismatch: return "holder-mismatch";
    case ErrorCode::kDuplicateId: return "duplicate-id";
    case ErrorCode::kUnknownParticipant: return "unknown-participant";
    case ErrorCode::kStaleRound: return "stale-round";
    case ErrorCode::kEmptyIntersection: return "empty-intersection";
    case ErrorCode::kMissingShare: return "missing-share";
    case ErrorCode::kParticipantCountMismatch: return "participant-count-mismatch";
    case ErrorCode::kParameterMismatch: return "parameter-mismatch";
    case ErrorCode::kCapacityViolation: return "capacity-violation";
    case ErrorCode::kProtocolViolation: return "protocol-violation";
    case ErrorCode::kBadMagic: return "bad-magic";
    case ErrorCode::kTruncatedFrame: return "truncated-frame";
    case ErrorCode::kUnknownKind: return "unknown-kind";
    case ErrorCode::kPayloadLengthMismatch: return "length-mismatch";
    case ErrorCode::kOversizePayload: return "oversize-payload";
    case ErrorCode::kLinkClosed: return "link-closed";
    case ErrorCode::kTimeout: return "timeout";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kCrypto: return "crypto";
  }
  return "unknown";
}

uint64_t LoadU64Le(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void StoreU64Le(uint64_t v, uint8_t* p) {
  for (int i = 0; i < 8; ++i) {
    p[i] = static_cast<uint8_t>(v);
    v >>= 8;
  }
}

void ByteWriter::PutU32(uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    buf_.push_back(static_cast<uint8_t>(v));
    v >>= 8;
  }
}

void ByteWriter::PutU64(uint64_t v) {
  size_t at = buf_.size();
  buf_.resize(at + 8);
  StoreU64Le(v, buf_.data() + at);
}

void ByteWriter::PutBytes(std::span<const uint8_t> data) {
  buf_.insert(buf_.end(), data.begin(), data.end());
}

void ByteReader::Require(size_t n) const {
  if (remaining() < n) {
    throw Error(ErrorCode::kTruncatedFrame,
                "truncated input at byte offset " + std::to_string(data_.size()) +
                    ": needed " + std::to_string(n) + " bytes from offset " +
                    std::to_string(pos_));
  }
}

uint8_t ByteReader::GetU8() {
  Require(1);
  return data_[pos_++];
}

uint32_t ByteReader::GetU32() {
  Require(4);
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | data_[pos_ + i];
  pos_ += 4;
  return v;
}

uint64_t ByteReader::GetU64() {
  Require(8);
  uint64_t v = LoadU64Le(data_.data() + pos_);
  pos_ += 8;
  return v;
}

std::span<const uint8_t> ByteReader::GetBytes(size_t n) {
  Require(n);
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

}  // namespace vsagg
