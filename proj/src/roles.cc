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

#include "vsagg/roles.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "vsagg/codec.h"
#include "vsagg/errors.h"
#include "vsagg/random.h"
#include "vsagg/sharing.h"

namespace vsagg {
namespace {

FieldElement ExpandScalar(const KeyMaterial& key, uint64_t round, FieldModulus R) {
  return Expand(key, round, 1, R)[0];
}

void CheckDigest(const Message& msg, const std::array<uint8_t, 32>& mine) {
  std::vector<uint8_t> theirs = ParseParamDigest(msg);
  if (!std::equal(theirs.begin(), theirs.end(), mine.begin(), mine.end())) {
    throw Error(ErrorCode::kParameterMismatch,
                "protocol parameter digest from sender " + std::to_string(msg.sender) +
                    " does not match");
  }
}

std::string JoinIds(const std::vector<UserId>& ids) {
  std::string out;
  for (UserId id : ids) {
    if (!out.empty()) out += ",";
    out += std::to_string(id);
  }
  return out;
}

void AddAt(std::vector<uint64_t>& v, size_t coordinate, uint64_t magnitude, FieldModulus R) {
  size_t j = coordinate % v.size();
  v[j] = Add(FieldElement{v[j]}, FieldElement{magnitude % R.value()}, R).residue;
}

}  // namespace

RoundContext ServersIntersectOnline(uint64_t round, std::span<const UserId> cs_ids,
                                    std::span<const UserId> vs_ids) {
  RoundContext ctx;
  ctx.round = round;
  ctx.cs_online.assign(cs_ids.begin(), cs_ids.end());
  ctx.vs_online.assign(vs_ids.begin(), vs_ids.end());
  std::sort(ctx.cs_online.begin(), ctx.cs_online.end());
  std::sort(ctx.vs_online.begin(), ctx.vs_online.end());
  ctx.cs_online.erase(std::unique(ctx.cs_online.begin(), ctx.cs_online.end()), ctx.cs_online.end());
  ctx.vs_online.erase(std::unique(ctx.vs_online.begin(), ctx.vs_online.end()), ctx.vs_online.end());
  std::set_intersection(ctx.cs_online.begin(), ctx.cs_online.end(), ctx.vs_online.begin(),
                        ctx.vs_online.end(), std::back_inserter(ctx.participants));
  ctx.m = ctx.participants.size();
  if (ctx.m == 0) {
    throw Error(ErrorCode::kEmptyIntersection,
                "round " + std::to_string(round) + ": no user reached both servers");
  }
  return ctx;
}

FieldVector InitModelFromSeeds(const KeyMaterial& s1, const KeyMaterial& s2, size_t d,
                               FieldModulus R_w) {
  return Expand(ConcatKeys(s1, s2), 0, d, R_w);
}

std::string_view DeviationKindName(Deviation::Kind kind) {
  switch (kind) {
    case Deviation::Kind::kNone: return "none";
    case Deviation::Kind::kTamperModelShare: return "tamper_model_share";
    case Deviation::Kind::kTamperAggregate: return "tamper_aggregate";
    case Deviation::Kind::kDropParticipant: return "drop_participant";
    case Deviation::Kind::kLieAboutM: return "lie_about_m";
    case Deviation::Kind::kForgeTag: return "forge_tag";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// User

User::User(UserId id, const ProtocolParams& params, RandomSource& rng)
    : id_(id),
      params_(params),
      digest_(ParamsDigest(params)),
      model_key_(KeyMaterial::Generate(rng)),
      tag_key_(KeyMaterial::Generate(rng)) {
  if (id >= kComputationServerId) {
    throw Error(ErrorCode::kInvalidArgument, "user id collides with a server id");
  }
}

Message User::CsRegistration() const { return MakeSetupKey(id_, KeySlot::kUserTagKey, tag_key_); }

Message User::VsRegistration() const {
  return MakeSetupKey(id_, KeySlot::kUserModelKey, model_key_);
}

void User::HandleSetup(const Message& msg) {
  const bool from_cs = msg.sender == kComputationServerId;
  const bool from_vs = msg.sender == kVerificationServerId;
  if (!from_cs && !from_vs) {
    throw Error(ErrorCode::kProtocolViolation, "setup message from a non-server sender");
  }
  switch (msg.kind) {
    case MessageKind::kParamDigest:
      CheckDigest(msg, digest_);
      break;
    case MessageKind::kSeedPair:
      (from_cs ? cs_seed_ : vs_seed_) = ParseSeed(msg);
      break;
    case MessageKind::kSetupKey: {
      SetupKeyPayload p = ParseSetupKey(msg);
      if (from_cs && p.slot == KeySlot::kCsVerifyKey) {
        cs_verify_key_ = p.key;
      } else if (from_cs && p.slot == KeySlot::kCsGlobalKey) {
        cs_global_key_ = p.key;
      } else if (from_vs && p.slot == KeySlot::kVsVerifyKey) {
        vs_verify_key_ = p.key;
      } else if (from_vs && p.slot == KeySlot::kVsGlobalKey) {
        vs_global_key_ = p.key;
      } else {
        throw Error(ErrorCode::kProtocolViolation, "unexpected key slot for sender");
      }
      break;
    }
    default:
      throw Error(ErrorCode::kProtocolViolation,
                  "unexpected setup message " + std::string(MessageKindName(msg.kind)));
  }
  if (!cs_verify_key_.empty() && !vs_verify_key_.empty()) {
    verification_key_ = ConcatKeys(cs_verify_key_, vs_verify_key_);
  }
  if (!cs_seed_.empty() && !vs_seed_.empty() && current_model_.empty()) {
    std::vector<double> init = Decode(InitialModel(), params_.codec, 1);
    init.resize(params_.model_dimension());
    current_model_ = std::move(init);
  }
}

bool User::ready() const {
  return !verification_key_.empty() && !cs_global_key_.empty() && !vs_global_key_.empty() &&
         !cs_seed_.empty() && !vs_seed_.empty();
}

const KeyMaterial& User::verification_key() const {
  if (verification_key_.empty()) {
    throw Error(ErrorCode::kProtocolViolation, "verification key not yet established");
  }
  return verification_key_;
}

FieldVector User::InitialModel() const {
  if (cs_seed_.empty() || vs_seed_.empty()) {
    throw Error(ErrorCode::kProtocolViolation, "initialisation seeds not yet received");
  }
  return InitModelFromSeeds(cs_seed_, vs_seed_, params_.dimension, params_.R_w);
}

ShareMessages User::Share(std::span<const double> update, uint64_t round) {
  if (update.size() != params_.model_dimension()) {
    throw Error(ErrorCode::kLengthMismatch,
                "update has " + std::to_string(update.size()) + " coordinates, expected " +
                    std::to_string(params_.model_dimension()));
  }
  if (!params_.weighted) return ShareEncoded(Encode(update, params_.codec), round);
  return ShareWeighted(update, 1.0, round);
}

ShareMessages User::ShareWeighted(std::span<const double> update, double alpha,
                                  uint64_t round) {
  if (!params_.weighted) {
    throw Error(ErrorCode::kInvalidArgument, "session was not configured for weights");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidArgument, "weight must be positive and finite");
  }
  if (update.size() != params_.model_dimension()) {
    throw Error(ErrorCode::kLengthMismatch, "update length does not match the model");
  }
  std::vector<double> scaled(update.size() + 1);
  for (size_t j = 0; j < update.size(); ++j) scaled[j] = alpha * update[j];
  scaled.back() = alpha;
  return ShareEncoded(Encode(scaled, params_.codec), round);
}

ShareMessages User::ShareEncoded(const FieldVector& encoded, uint64_t round) {
  if (!ready()) throw Error(ErrorCode::kProtocolViolation, "user setup incomplete");
  if (last_shared_round_ && round <= *last_shared_round_) {
    throw Error(ErrorCode::kStaleRound,
                "round " + std::to_string(round) + " not after last shared round " +
                    std::to_string(*last_shared_round_));
  }
  const size_t d = params_.dimension;
  ShareVector w1 = ShareWithPrf(encoded, model_key_, round, params_.R_w);
  VerificationKeyVector k_v = DeriveTagKey(verification_key_, round, d, params_.R_b);
  TagScalar b = GenTag(encoded, k_v, params_.R_w, params_.R_b);
  FieldElement b1 = ExpandScalar(tag_key_, round, params_.R_b);
  TagScalar b2{Sub(b.value, b1, params_.R_b)};
  last_shared_round_ = round;
  return ShareMessages{MakeModelShare(round, id_, w1.data), MakeTagShare(round, id_, b2)};
}

ReconstructResult User::Reconstruct(const FieldVector& w1, TagScalar b2, uint64_t m_cs,
                                    uint64_t m_vs, uint64_t round) {
  if (!ready()) throw Error(ErrorCode::kProtocolViolation, "user setup incomplete");
  if (last_verified_round_ && round <= *last_verified_round_) {
    throw Error(ErrorCode::kStaleRound,
                "round " + std::to_string(round) + " already reconstructed");
  }
  if (m_cs != m_vs) {
    throw Error(ErrorCode::kParticipantCountMismatch,
                "servers disagree on participant count: CS " + std::to_string(m_cs) +
                    ", VS " + std::to_string(m_vs));
  }
  if (m_cs == 0) throw Error(ErrorCode::kZeroParticipants, "published m is zero");
  const size_t d = params_.dimension;
  if (w1.size() != d) {
    throw Error(ErrorCode::kLengthMismatch, "published model has the wrong dimension");
  }

  ReconstructResult out;
  out.m = m_cs;
  out.aggregate = ::vsagg::Reconstruct(w1, Expand(vs_global_key_, round, d, params_.R_w), params_.R_w);
  TagScalar b{Add(ExpandScalar(cs_global_key_, round, params_.R_b), b2.value, params_.R_b)};
  VerificationKeyVector k_v = DeriveTagKey(verification_key_, round, d, params_.R_b);
  TagScalar t = GenTag(out.aggregate, k_v, params_.R_w, params_.R_b);
  out.verified = (t == b);
  if (!out.verified) {
    out.alarm = Alarm{round, AlarmReason::kTagMismatch, b, t};
    return out;
  }
  if (params_.weighted) {
    std::vector<double> sums = Decode(out.aggregate, params_.codec, 1);
    const double weight_sum = sums.back();
    sums.pop_back();
    if (weight_sum > 0.0) {
      for (auto& v : sums) v /= weight_sum;
    }
    out.weight_sum = weight_sum;
    out.model = std::move(sums);
  } else {
    out.model = Decode(out.aggregate, params_.codec, m_cs);
  }
  current_model_ = out.model;
  last_verified_round_ = round;
  return out;
}

ReconstructResult User::Reconstruct(const Message& publish_model, const Message& publish_tag,
                                    uint64_t round) {
  PublishedModel pm = ParsePublishModel(publish_model, params_.R_w);
  PublishedTag pt = ParsePublishTag(publish_tag, params_.R_b);
  if (publish_model.round != round || publish_tag.round != round) {
    throw Error(ErrorCode::kProtocolViolation, "publication for a different round");
  }
  return Reconstruct(pm.w, pt.b, pm.m, pt.m, round);
}

// ---------------------------------------------------------------------------
// Computation server

ComputationServer::ComputationServer(const ProtocolParams& params, RandomSource& rng)
    : params_(params),
      verify_key_(KeyMaterial::Generate(rng)),
      global_key_(KeyMaterial::Generate(rng)),
      seed_(KeyMaterial::Generate(rng)) {}

std::vector<Message> ComputationServer::SetupMessages() const {
  auto digest = ParamsDigest(params_);
  return {MakeParamDigest(kComputationServerId, digest),
          MakeSetupKey(kComputationServerId, KeySlot::kCsVerifyKey, verify_key_),
          MakeSetupKey(kComputationServerId, KeySlot::kCsGlobalKey, global_key_),
          MakeSeed(kComputationServerId, seed_)};
}

void ComputationServer::HandleRegistration(const Message& msg) {
  SetupKeyPayload p = ParseSetupKey(msg);
  if (p.slot != KeySlot::kUserTagKey || msg.sender >= kComputationServerId) {
    throw Error(ErrorCode::kProtocolViolation, "CS expects a user tag key registration");
  }
  std::lock_guard<std::mutex> lock(mu_);
  if (!tag_keys_.emplace(msg.sender, p.key).second) {
    throw Error(ErrorCode::kDuplicateId,
                "user " + std::to_string(msg.sender) + " already registered at CS");
  }
}

void ComputationServer::CheckPeerDigest(const Message& msg) const {
  CheckDigest(msg, ParamsDigest(params_));
}

void ComputationServer::AcceptModelShare(const Message& msg) {
  if (msg.kind != MessageKind::kModelShare) {
    throw Error(ErrorCode::kProtocolViolation, "CS expected MODEL_SHARE");
  }
  FieldVector share = ParseVectorPayload(msg, params_.R_w);
  if (share.size() != params_.dimension) {
    throw Error(ErrorCode::kPayloadLengthMismatch,
                "model share of dimension " + std::to_string(share.size()) + ", expected " +
                    std::to_string(params_.dimension));
  }
  std::lock_guard<std::mutex> lock(mu_);
  if (!tag_keys_.contains(msg.sender)) {
    throw Error(ErrorCode::kUnknownParticipant,
                "model share from unregistered user " + std::to_string(msg.sender));
  }
  if (!shares_[msg.round].emplace(msg.sender, std::move(share)).second) {
    throw Error(ErrorCode::kDuplicateId, "duplicate model share from user " +
                                             std::to_string(msg.sender) + " in round " +
                                             std::to_string(msg.round));
  }
}

std::vector<UserId> ComputationServer::OnlineIds(uint64_t round) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<UserId> ids;
  auto it = shares_.find(round);
  if (it != shares_.end()) {
    for (const auto& [id, share] : it->second) ids.push_back(id);
  }
  return ids;
}

TagScalar ComputationServer::TagAggregate(const RoundContext& ctx) const {
  const FieldModulus R_b = params_.R_b;
  FieldElement b1{0};
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (UserId id : ctx.participants) {
      auto it = tag_keys_.find(id);
      if (it == tag_keys_.end()) {
        throw Error(ErrorCode::kUnknownParticipant,
                    "no tag key for participant " + std::to_string(id));
      }
      b1 = Add(b1, ExpandScalar(it->second, ctx.round, R_b), R_b);
    }
  }
  FieldElement b1_mask = ExpandScalar(global_key_, ctx.round, R_b);
  TagScalar b_t{Sub(b1, b1_mask, R_b)};
  if (Deviates(Deviation::Kind::kForgeTag, ctx.round)) {
    b_t = TagScalar{FieldElement{deviation_.magnitude % R_b.value()}};
  }
  return b_t;
}

PublishedModel ComputationServer::FinalizeModel(const RoundContext& ctx, const FieldVector& w_t) {
  const FieldModulus R_w = params_.R_w;
  if (w_t.size() != params_.dimension) {
    throw Error(ErrorCode::kLengthMismatch, "w_t has the wrong dimension");
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto& round_shares = shares_[ctx.round];
  std::vector<UserId> missing;
  for (UserId id : ctx.participants) {
    if (!round_shares.contains(id)) missing.push_back(id);
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kMissingShare,
                "round " + std::to_string(ctx.round) + ": missing model shares from " +
                    JoinIds(missing));
  }
  const size_t victim = ctx.participants.empty() ? 0 : deviation_.victim_index % ctx.participants.size();
  std::vector<uint64_t> acc(params_.dimension, 0);
  for (size_t idx = 0; idx < ctx.participants.size(); ++idx) {
    if (idx == victim && Deviates(Deviation::Kind::kDropParticipant, ctx.round)) continue;
    const FieldVector& share = round_shares.at(ctx.participants[idx]);
    if (idx == victim && Deviates(Deviation::Kind::kTamperModelShare, ctx.round)) {
      std::vector<uint64_t> tampered(share.values().begin(), share.values().end());
      AddAt(tampered, deviation_.coordinate, deviation_.magnitude, R_w);
      AccumulateInto(acc, tampered, R_w);
    } else {
      AccumulateInto(acc, share.values(), R_w);
    }
  }
  AccumulateInto(acc, w_t.values(), R_w);
  if (Deviates(Deviation::Kind::kTamperAggregate, ctx.round)) {
    AddAt(acc, deviation_.coordinate, deviation_.magnitude, R_w);
  }
  PublishedModel out;
  out.m = ctx.m + (Deviates(Deviation::Kind::kLieAboutM, ctx.round) ? 1 : 0);
  out.w = FieldVector::FromCanonical(std::move(acc));
  latest_ = MakePublishModel(ctx.round, out.m, out.w);
  shares_.erase(ctx.round);
  return out;
}

std::optional<Message> ComputationServer::LatestPublication() const {
  std::lock_guard<std::mutex> lock(mu_);
  return latest_;
}

void ComputationServer::DiscardRound(uint64_t round) {
  std::lock_guard<std::mutex> lock(mu_);
  shares_.erase(round);
}

void ComputationServer::RecordAlarm(const Message& msg) {
  AlarmPayload a = ParseAlarm(msg);
  std::lock_guard<std::mutex> lock(mu_);
  alarms_.push_back(a);
}

std::vector<AlarmPayload> ComputationServer::alarms() const {
  std::lock_guard<std::mutex> lock(mu_);
  return alarms_;
}

size_t ComputationServer::registered_users() const {
  std::lock_guard<std::mutex> lock(mu_);
  return tag_keys_.size();
}

bool ComputationServer::IsRegistered(UserId id) const {
  std::lock_guard<std::mutex> lock(mu_);
  return tag_keys_.contains(id);
}

// ---------------------------------------------------------------------------
// Verification server

VerificationServer::VerificationServer(const ProtocolParams& params, RandomSource& rng)
    : params_(params),
      verify_key_(KeyMaterial::Generate(rng)),
      global_key_(KeyMaterial::Generate(rng)),
      seed_(KeyMaterial::Generate(rng)) {}

std::vector<Message> VerificationServer::SetupMessages() const {
  auto digest = ParamsDigest(params_);
  return {MakeParamDigest(kVerificationServerId, digest),
          MakeSetupKey(kVerificationServerId, KeySlot::kVsVerifyKey, verify_key_),
          MakeSetupKey(kVerificationServerId, KeySlot::kVsGlobalKey, global_key_),
          MakeSeed(kVerificationServerId, seed_)};
}

void VerificationServer::HandleRegistration(const Message& msg) {
  SetupKeyPayload p = ParseSetupKey(msg);
  if (p.slot != KeySlot::kUserModelKey || msg.sender >= kComputationServerId) {
    throw Error(ErrorCode::kProtocolViolation, "VS expects a user model key registration");
  }
  std::lock_guard<std::mutex> lock(mu_);
  if (!model_keys_.emplace(msg.sender, p.key).second) {
    throw Error(ErrorCode::kDuplicateId,
                "user " + std::to_string(msg.sender) + " already registered at VS");
  }
}

void VerificationServer::CheckPeerDigest(const Message& msg) const {
  CheckDigest(msg, ParamsDigest(params_));
}

void VerificationServer::AcceptTagShare(const Message& msg) {
  if (msg.kind != MessageKind::kTagShare) {
    throw Error(ErrorCode::kProtocolViolation, "VS expected TAG_SHARE");
  }
  TagScalar share = ParseScalarPayload(msg, params_.R_b);
  std::lock_guard<std::mutex> lock(mu_);
  if (!model_keys_.contains(msg.sender)) {
    throw Error(ErrorCode::kUnknownParticipant,
                "tag share from unregistered user " + std::to_string(msg.sender));
  }
  if (!tag_shares_[msg.round].emplace(msg.sender, share).second) {
    throw Error(ErrorCode::kDuplicateId, "duplicate tag share from user " +
                                             std::to_string(msg.sender) + " in round " +
                                             std::to_string(msg.round));
  }
}

std::vector<UserId> VerificationServer::OnlineIds(uint64_t round) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<UserId> ids;
  auto it = tag_shares_.find(round);
  if (it != tag_shares_.end()) {
    for (const auto& [id, share] : it->second) ids.push_back(id);
  }
  return ids;
}

FieldVector VerificationServer::ModelAggregate(const RoundContext& ctx) const {
  const FieldModulus R_w = params_.R_w;
  const size_t d = params_.dimension;
  const size_t victim = ctx.participants.empty() ? 0 : deviation_.victim_index % ctx.participants.size();
  std::vector<uint64_t> acc(d, 0);
  std::vector<const KeyMaterial*> keys;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (UserId id : ctx.participants) {
      auto it = model_keys_.find(id);
      if (it == model_keys_.end()) {
        throw Error(ErrorCode::kUnknownParticipant,
                    "no model key for participant " + std::to_string(id));
      }
      keys.push_back(&it->second);
    }
  }
  for (size_t idx = 0; idx < keys.size(); ++idx) {
    if (idx == victim && Deviates(Deviation::Kind::kDropParticipant, ctx.round)) continue;
    std::vector<uint64_t> regenerated = ExpandBelow(*keys[idx], ctx.round, d, R_w.value());
    if (idx == victim && Deviates(Deviation::Kind::kTamperModelShare, ctx.round)) {
      AddAt(regenerated, deviation_.coordinate, deviation_.magnitude, R_w);
    }
    AccumulateInto(acc, regenerated, R_w);
  }
  FieldVector w_t = SubVectors(FieldVector::FromCanonical(std::move(acc)),
                               Expand(global_key_, ctx.round, d, R_w), R_w);
  if (Deviates(Deviation::Kind::kTamperAggregate, ctx.round)) {
    std::vector<uint64_t> v(w_t.values().begin(), w_t.values().end());
    AddAt(v, deviation_.coordinate, deviation_.magnitude, R_w);
    w_t = FieldVector::FromCanonical(std::move(v));
  }
  return w_t;
}

PublishedTag VerificationServer::FinalizeTag(const RoundContext& ctx, TagScalar b_t) {
  const FieldModulus R_b = params_.R_b;
  std::lock_guard<std::mutex> lock(mu_);
  auto& round_shares = tag_shares_[ctx.round];
  std::vector<UserId> missing;
  for (UserId id : ctx.participants) {
    if (!round_shares.contains(id)) missing.push_back(id);
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kMissingShare,
                "round " + std::to_string(ctx.round) + ": missing tag shares from " +
                    JoinIds(missing));
  }
  FieldElement b2{0};
  for (UserId id : ctx.participants) b2 = Add(b2, round_shares.at(id).value, R_b);
  PublishedTag out;
  out.b = TagScalar{Add(b2, b_t.value, R_b)};
  if (Deviates(Deviation::Kind::kForgeTag, ctx.round)) {
    out.b = TagScalar{FieldElement{deviation_.magnitude % R_b.value()}};
  }
  out.m = ctx.m + (Deviates(Deviation::Kind::kLieAboutM, ctx.round) ? 1 : 0);
  latest_ = MakePublishTag(ctx.round, out.b, out.m);
  tag_shares_.erase(ctx.round);
  return out;
}

std::optional<Message> VerificationServer::LatestPublication() const {
  std::lock_guard<std::mutex> lock(mu_);
  return latest_;
}

void VerificationServer::DiscardRound(uint64_t round) {
  std::lock_guard<std::mutex> lock(mu_);
  tag_shares_.erase(round);
}

void VerificationServer::RecordAlarm(const Message& msg) {
  AlarmPayload a = ParseAlarm(msg);
  std::lock_guard<std::mutex> lock(mu_);
  alarms_.push_back(a);
}

std::vector<AlarmPayload> VerificationServer::alarms() const {
  std::lock_guard<std::mutex> lock(mu_);
  return alarms_;
}

size_t VerificationServer::registered_users() const {
  std::lock_guard<std::mutex> lock(mu_);
  return model_keys_.size();
}

bool VerificationServer::IsRegistered(UserId id) const {
  std::lock_guard<std::mutex> lock(mu_);
  return model_keys_.contains(id);
}

// ---------------------------------------------------------------------------
// Setup and join

User JoinNewUser(ComputationServer& cs, VerificationServer& vs, const ProtocolParams& params,
                 UserId id, RandomSource& rng) {
  if (cs.IsRegistered(id) || vs.IsRegistered(id)) {
    throw Error(ErrorCode::kDuplicateId, "user id " + std::to_string(id) + " already in use");
  }
  User user(id, params, rng);
  for (const Message& m : cs.SetupMessages()) user.HandleSetup(m);
  for (const Message& m : vs.SetupMessages()) user.HandleSetup(m);
  cs.HandleRegistration(user.CsRegistration());
  vs.HandleRegistration(user.VsRegistration());
  return user;
}

SetupResult Setup(uint32_t n, const ProtocolParams& params, RandomSource& rng) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "setup needs at least one user");
  SetupResult out;
  out.cs = std::make_unique<ComputationServer>(params, rng);
  out.vs = std::make_unique<VerificationServer>(params, rng);
  out.cs->CheckPeerDigest(out.vs->SetupMessages().front());
  out.vs->CheckPeerDigest(out.cs->SetupMessages().front());
  out.users.reserve(n);
  for (UserId id = 1; id <= n; ++id) {
    out.users.push_back(JoinNewUser(*out.cs, *out.vs, params, id, rng));
  }
  return out;
}

}  // namespace vsagg
