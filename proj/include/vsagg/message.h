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

#ifndef VSAGG_MESSAGE_H_
#define VSAGG_MESSAGE_H_

// Wire schema.
//
// Frame layout, all integers little-endian:
//
//   offset  size  field
//   0       4     magic 0x44 0x41 0x47 0x31 ("DAG1")
//   4       1     kind
//   5       8     round
//   13      4     sender id
//   17      4     payload length
//   21      n     payload
//
// Payload layouts per kind (field elements are 8-byte words):
//
//   SETUP_KEY      1-byte key slot, 16-byte key                      17
//   SEED_PAIR      16-byte initialisation seed                       16
//   MODEL_SHARE    d elements (w_i1)                                 8d
//   TAG_SHARE      1 element (b_i2)                                  8
//   ONLINE_LIST    k sorted 4-byte user ids                          4k
//   RESHARE_MODEL  d elements (w_t)                                  8d
//   RESHARE_TAG    1 element (b_t)                                   8
//   PUBLISH_MODEL  8-byte m, then d elements (w''_1)                 8 + 8d
//   PUBLISH_TAG    1 element (b'_2), then 8-byte m                   16
//   PARAM_DIGEST   SHA-256 of the protocol parameters                32
//   ALARM          1-byte reason, expected tag, computed tag         17

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "vsagg/bytes.h"
#include "vsagg/field.h"
#include "vsagg/prf.h"
#include "vsagg/tags.h"

namespace vsagg {

inline constexpr uint8_t kFrameMagic[4] = {0x44, 0x41, 0x47, 0x31};
inline constexpr size_t kFrameHeaderBytes = 21;
inline constexpr size_t kMaxPayloadBytes = size_t{1} << 31;

using UserId = uint32_t;
inline constexpr UserId kComputationServerId = 0xFFFFFFF0u;
inline constexpr UserId kVerificationServerId = 0xFFFFFFF1u;

enum class MessageKind : uint8_t {
  kSetupKey = 1,
  kSeedPair = 2,
  kModelShare = 3,
  kTagShare = 4,
  kOnlineList = 5,
  kReshareModel = 6,
  kReshareTag = 7,
  kPublishModel = 8,
  kPublishTag = 9,
  kParamDigest = 10,
  kAlarm = 11,
};

std::string_view MessageKindName(MessageKind kind);

struct Message {
  MessageKind kind = MessageKind::kAlarm;
  uint64_t round = 0;
  UserId sender = 0;
  Bytes payload;

  friend bool operator==(const Message&, const Message&) = default;
};

// Throws kOversizePayload or kPayloadLengthMismatch.
Bytes Serialize(const Message& msg);
void SerializeTo(const Message& msg, ByteWriter& out);

// Exact inverse of Serialize on a single complete frame. Throws kBadMagic,
// kTruncatedFrame, kUnknownKind or kPayloadLengthMismatch; each message names
// the byte offset of the problem. Trailing bytes are a length mismatch.
Message Deserialize(std::span<const uint8_t> frame);

// Parses a concatenation of frames.
std::vector<Message> DeserializeStream(std::span<const uint8_t> bytes);

// Total frame length announced by a 21-byte header (validates magic/kind).
size_t FrameLength(std::span<const uint8_t> header);

// True if `payload_size` is a legal payload length for `kind`.
bool PayloadLengthValid(MessageKind kind, size_t payload_size);

// Typed payloads.

enum class KeySlot : uint8_t {
  kUserModelKey = 1,     // K_vi, user -> VS
  kUserTagKey = 2,       // K_ci, user -> CS
  kCsVerifyKey = 3,      // K_cv, CS -> user
  kCsGlobalKey = 4,      // K_cg, CS -> user
  kVsVerifyKey = 5,      // K_vv, VS -> user
  kVsGlobalKey = 6,      // K_vg, VS -> user
};

enum class AlarmReason : uint8_t {
  kTagMismatch = 1,
  kParticipantCountMismatch = 2,
  kParameterMismatch = 3,
};

struct SetupKeyPayload {
  KeySlot slot;
  KeyMaterial key;
};

struct PublishedModel {
  uint64_t m = 0;
  FieldVector w;
};

struct PublishedTag {
  TagScalar b;
  uint64_t m = 0;
};

struct AlarmPayload {
  AlarmReason reason;
  TagScalar expected;
  TagScalar computed;
};

Message MakeSetupKey(UserId sender, KeySlot slot, const KeyMaterial& key);
Message MakeSeed(UserId sender, const KeyMaterial& seed);
Message MakeModelShare(uint64_t round, UserId sender, const FieldVector& share);
Message MakeTagShare(uint64_t round, UserId sender, TagScalar share);
Message MakeOnlineList(uint64_t round, UserId sender, std::span<const UserId> ids);
Message MakeReshareModel(uint64_t round, const FieldVector& w_t);
Message MakeReshareTag(uint64_t round, TagScalar b_t);
Message MakePublishModel(uint64_t round, uint64_t m, const FieldVector& w);
Message MakePublishTag(uint64_t round, TagScalar b, uint64_t m);
Message MakeParamDigest(UserId sender, std::span<const uint8_t, 32> digest);
Message MakeAlarm(uint64_t round, UserId sender, const AlarmPayload& alarm);

// Parsers check the kind (kProtocolViolation) and canonical form.
SetupKeyPayload ParseSetupKey(const Message& msg);
KeyMaterial ParseSeed(const Message& msg);
FieldVector ParseVectorPayload(const Message& msg, FieldModulus R);  // MODEL_SHARE, RESHARE_MODEL
TagScalar ParseScalarPayload(const Message& msg, FieldModulus R);    // TAG_SHARE, RESHARE_TAG
std::vector<UserId> ParseOnlineList(const Message& msg);
PublishedModel ParsePublishModel(const Message& msg, FieldModulus R_w);
PublishedTag ParsePublishTag(const Message& msg, FieldModulus R_b);
std::vector<uint8_t> ParseParamDigest(const Message& msg);
AlarmPayload ParseAlarm(const Message& msg);

}  // namespace vsagg

#endif  // VSAGG_MESSAGE_H_
