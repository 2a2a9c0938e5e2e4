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

#include "vsagg/message.h"

#include <algorithm>
#include <string>

#include "vsagg/errors.h"

namespace vsagg {
namespace {

[[noreturn]] void Fail(ErrorCode code, size_t offset, const std::string& what) {
  throw Error(code, what + " at byte offset " + std::to_string(offset));
}

bool KnownKind(uint8_t k) {
  return k >= static_cast<uint8_t>(MessageKind::kSetupKey) &&
         k <= static_cast<uint8_t>(MessageKind::kAlarm);
}

void ExpectKind(const Message& msg, std::initializer_list<MessageKind> kinds) {
  if (std::find(kinds.begin(), kinds.end(), msg.kind) == kinds.end()) {
    throw Error(ErrorCode::kProtocolViolation,
                "unexpected message kind " + std::string(MessageKindName(msg.kind)));
  }
}

Message Build(MessageKind kind, uint64_t round, UserId sender, Bytes payload) {
  return Message{kind, round, sender, std::move(payload)};
}

}  // namespace

std::string_view MessageKindName(MessageKind kind) {
  switch (kind) {
    case MessageKind::kSetupKey: return "SETUP_KEY";
    case MessageKind::kSeedPair: return "SEED_PAIR";
    case MessageKind::kModelShare: return "MODEL_SHARE";
    case MessageKind::kTagShare: return "TAG_SHARE";
    case MessageKind::kOnlineList: return "ONLINE_LIST";
    case MessageKind::kReshareModel: return "RESHARE_MODEL";
    case MessageKind::kReshareTag: return "RESHARE_TAG";
    case MessageKind::kPublishModel: return "PUBLISH_MODEL";
    case MessageKind::kPublishTag: return "PUBLISH_TAG";
    case MessageKind::kParamDigest: return "PARAM_DIGEST";
    case MessageKind::kAlarm: return "ALARM";
  }
  return "UNKNOWN";
}

bool PayloadLengthValid(MessageKind kind, size_t n) {
  switch (kind) {
    case MessageKind::kSetupKey: return n == 1 + kKeyBytes;
    case MessageKind::kSeedPair: return n == kKeyBytes;
    case MessageKind::kModelShare:
    case MessageKind::kReshareModel: return n >= 8 && n % 8 == 0;
    case MessageKind::kTagShare:
    case MessageKind::kReshareTag: return n == 8;
    case MessageKind::kOnlineList: return n % 4 == 0;
    case MessageKind::kPublishModel: return n >= 16 && n % 8 == 0;
    case MessageKind::kPublishTag: return n == 16;
    case MessageKind::kParamDigest: return n == 32;
    case MessageKind::kAlarm: return n == 17;
  }
  return false;
}

void SerializeTo(const Message& msg, ByteWriter& out) {
  if (msg.payload.size() > kMaxPayloadBytes) {
    throw Error(ErrorCode::kOversizePayload,
                "payload of " + std::to_string(msg.payload.size()) + " bytes exceeds 2^31");
  }
  if (!PayloadLengthValid(msg.kind, msg.payload.size())) {
    throw Error(ErrorCode::kPayloadLengthMismatch,
                std::string(MessageKindName(msg.kind)) + " payload of " +
                    std::to_string(msg.payload.size()) + " bytes violates its layout");
  }
  out.PutBytes(kFrameMagic);
  out.PutU8(static_cast<uint8_t>(msg.kind));
  out.PutU64(msg.round);
  out.PutU32(msg.sender);
  out.PutU32(static_cast<uint32_t>(msg.payload.size()));
  out.PutBytes(msg.payload);
}

Bytes Serialize(const Message& msg) {
  ByteWriter w(kFrameHeaderBytes + msg.payload.size());
  SerializeTo(msg, w);
  return std::move(w).Take();
}

size_t FrameLength(std::span<const uint8_t> header) {
  if (header.size() < kFrameHeaderBytes) {
    Fail(ErrorCode::kTruncatedFrame, header.size(), "truncated frame header");
  }
  for (size_t i = 0; i < 4; ++i) {
    if (header[i] != kFrameMagic[i]) Fail(ErrorCode::kBadMagic, i, "bad frame magic");
  }
  if (!KnownKind(header[4])) {
    Fail(ErrorCode::kUnknownKind, 4, "unknown message kind " + std::to_string(header[4]));
  }
  ByteReader r(header.subspan(17, 4));
  uint32_t len = r.GetU32();
  if (len > kMaxPayloadBytes) Fail(ErrorCode::kOversizePayload, 17, "oversize payload");
  if (!PayloadLengthValid(static_cast<MessageKind>(header[4]), len)) {
    Fail(ErrorCode::kPayloadLengthMismatch, 17,
         "payload length " + std::to_string(len) + " violates the layout of " +
             std::string(MessageKindName(static_cast<MessageKind>(header[4]))));
  }
  return kFrameHeaderBytes + len;
}

Message Deserialize(std::span<const uint8_t> frame) {
  size_t total = FrameLength(frame);
  if (frame.size() < total) {
    Fail(ErrorCode::kTruncatedFrame, frame.size(),
         "frame truncated (expected " + std::to_string(total) + " bytes)");
  }
  if (frame.size() > total) {
    Fail(ErrorCode::kPayloadLengthMismatch, total, "trailing bytes after frame");
  }
  ByteReader r(frame);
  r.GetBytes(4);
  Message msg;
  msg.kind = static_cast<MessageKind>(r.GetU8());
  msg.round = r.GetU64();
  msg.sender = r.GetU32();
  uint32_t len = r.GetU32();
  auto payload = r.GetBytes(len);
  msg.payload.assign(payload.begin(), payload.end());
  return msg;
}

std::vector<Message> DeserializeStream(std::span<const uint8_t> bytes) {
  std::vector<Message> out;
  size_t pos = 0;
  while (pos < bytes.size()) {
    try {
      size_t len = FrameLength(bytes.subspan(pos));
      if (bytes.size() - pos < len) {
        Fail(ErrorCode::kTruncatedFrame, bytes.size() - pos, "frame truncated");
      }
      out.push_back(Deserialize(bytes.subspan(pos, len)));
      pos += len;
    } catch (const Error& e) {
      // Re-anchor the offset to the whole stream.
      throw Error(e.code(), std::string(e.what()) + " (frame starting at stream offset " +
                                std::to_string(pos) + ")");
    }
  }
  return out;
}

Message MakeSetupKey(UserId sender, KeySlot slot, const KeyMaterial& key) {
  if (key.size() != kKeyBytes) {
    throw Error(ErrorCode::kInvalidArgument, "setup keys must be 16 bytes");
  }
  ByteWriter w(1 + kKeyBytes);
  w.PutU8(static_cast<uint8_t>(slot));
  w.PutBytes(key.bytes());
  return Build(MessageKind::kSetupKey, 0, sender, std::move(w).Take());
}

Message MakeSeed(UserId sender, const KeyMaterial& seed) {
  if (seed.size() != kKeyBytes) {
    throw Error(ErrorCode::kInvalidArgument, "seeds must be 16 bytes");
  }
  Bytes b(seed.bytes().begin(), seed.bytes().end());
  return Build(MessageKind::kSeedPair, 0, sender, std::move(b));
}

namespace {

Bytes ElementsPayload(std::span<const uint64_t> values, size_t prefix_words = 0,
                      uint64_t prefix = 0) {
  ByteWriter w(8 * (values.size() + prefix_words));
  if (prefix_words) w.PutU64(prefix);
  for (uint64_t v : values) w.PutU64(v);
  return std::move(w).Take();
}

}  // namespace

Message MakeModelShare(uint64_t round, UserId sender, const FieldVector& share) {
  return Build(MessageKind::kModelShare, round, sender, ElementsPayload(share.values()));
}

Message MakeTagShare(uint64_t round, UserId sender, TagScalar share) {
  uint64_t v = share.value.residue;
  return Build(MessageKind::kTagShare, round, sender, ElementsPayload({&v, 1}));
}

Message MakeOnlineList(uint64_t round, UserId sender, std::span<const UserId> ids) {
  ByteWriter w(4 * ids.size());
  for (UserId id : ids) w.PutU32(id);
  return Build(MessageKind::kOnlineList, round, sender, std::move(w).Take());
}

Message MakeReshareModel(uint64_t round, const FieldVector& w_t) {
  return Build(MessageKind::kReshareModel, round, kVerificationServerId,
               ElementsPayload(w_t.values()));
}

Message MakeReshareTag(uint64_t round, TagScalar b_t) {
  uint64_t v = b_t.value.residue;
  return Build(MessageKind::kReshareTag, round, kComputationServerId, ElementsPayload({&v, 1}));
}

Message MakePublishModel(uint64_t round, uint64_t m, const FieldVector& w) {
  return Build(MessageKind::kPublishModel, round, kComputationServerId,
               ElementsPayload(w.values(), 1, m));
}

Message MakePublishTag(uint64_t round, TagScalar b, uint64_t m) {
  ByteWriter w(16);
  WriteTag(w, b);
  w.PutU64(m);
  return Build(MessageKind::kPublishTag, round, kVerificationServerId, std::move(w).Take());
}

Message MakeParamDigest(UserId sender, std::span<const uint8_t, 32> digest) {
  return Build(MessageKind::kParamDigest, 0, sender, Bytes(digest.begin(), digest.end()));
}

Message MakeAlarm(uint64_t round, UserId sender, const AlarmPayload& alarm) {
  ByteWriter w(17);
  w.PutU8(static_cast<uint8_t>(alarm.reason));
  WriteTag(w, alarm.expected);
  WriteTag(w, alarm.computed);
  return Build(MessageKind::kAlarm, round, sender, std::move(w).Take());
}

SetupKeyPayload ParseSetupKey(const Message& msg) {
  ExpectKind(msg, {MessageKind::kSetupKey});
  ByteReader r(msg.payload);
  uint8_t slot = r.GetU8();
  if (slot < 1 || slot > 6) Fail(ErrorCode::kProtocolViolation, 0, "unknown key slot");
  return SetupKeyPayload{static_cast<KeySlot>(slot), KeyMaterial::FromBytes(r.GetBytes(kKeyBytes))};
}

KeyMaterial ParseSeed(const Message& msg) {
  ExpectKind(msg, {MessageKind::kSeedPair});
  return KeyMaterial::FromBytes(msg.payload);
}

FieldVector ParseVectorPayload(const Message& msg, FieldModulus R) {
  ExpectKind(msg, {MessageKind::kModelShare, MessageKind::kReshareModel});
  ByteReader r(msg.payload);
  std::vector<uint64_t> out(msg.payload.size() / 8);
  for (auto& v : out) v = ReadElement(r, R).residue;
  return FieldVector::FromCanonical(std::move(out));
}

TagScalar ParseScalarPayload(const Message& msg, FieldModulus R) {
  ExpectKind(msg, {MessageKind::kTagShare, MessageKind::kReshareTag});
  ByteReader r(msg.payload);
  return ReadTag(r, R);
}

std::vector<UserId> ParseOnlineList(const Message& msg) {
  ExpectKind(msg, {MessageKind::kOnlineList});
  ByteReader r(msg.payload);
  std::vector<UserId> ids(msg.payload.size() / 4);
  for (auto& id : ids) id = r.GetU32();
  return ids;
}

PublishedModel ParsePublishModel(const Message& msg, FieldModulus R_w) {
  ExpectKind(msg, {MessageKind::kPublishModel});
  ByteReader r(msg.payload);
  PublishedModel out;
  out.m = r.GetU64();
  std::vector<uint64_t> w(r.remaining() / 8);
  for (auto& v : w) v = ReadElement(r, R_w).residue;
  out.w = FieldVector::FromCanonical(std::move(w));
  return out;
}

PublishedTag ParsePublishTag(const Message& msg, FieldModulus R_b) {
  ExpectKind(msg, {MessageKind::kPublishTag});
  ByteReader r(msg.payload);
  PublishedTag out;
  out.b = ReadTag(r, R_b);
  out.m = r.GetU64();
  return out;
}

std::vector<uint8_t> ParseParamDigest(const Message& msg) {
  ExpectKind(msg, {MessageKind::kParamDigest});
  return msg.payload;
}

AlarmPayload ParseAlarm(const Message& msg) {
  ExpectKind(msg, {MessageKind::kAlarm});
  ByteReader r(msg.payload);
  AlarmPayload a;
  a.reason = static_cast<AlarmReason>(r.GetU8());
  a.expected = TagScalar{FieldElement{r.GetU64()}};
  a.computed = TagScalar{FieldElement{r.GetU64()}};
  return a;
}

}  // namespace vsagg
