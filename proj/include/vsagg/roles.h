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

#ifndef VSAGG_ROLES_H_
#define VSAGG_ROLES_H_

// Protocol roles: users, the computation server (CS) and the verification
// server (VS).
//
// Per round r, with participants P = (CS-online ∩ VS-online):
//
//   user i    w_i1 = enc(w_i) - F(K_vi, r, d)             -> CS
//             b_i2 = tag(enc(w_i), k_v) - F(K_ci, r, 1)   -> VS
//   VS        w_t  = sum_P F(K_vi, r, d) - F(K_vg, r, d)  -> CS
//   CS        b_t  = sum_P F(K_ci, r, 1) - F(K_cg, r, 1)  -> VS
//   CS        publishes w''_1 = sum_P w_i1 + w_t, and m
//   VS        publishes b'_2  = sum_P b_i2 + b_t, and m
//   user      w' = w''_1 + F(K_vg, r, d),  b = F(K_cg, r, 1) + b'_2
//             accept iff tag(w', k_v) == b and both servers report the same m
//
// with k_v = F(K_cv || K_vv, r, d, Z_{R_b - 1}) + 1.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "vsagg/message.h"
#include "vsagg/params.h"
#include "vsagg/prf.h"
#include "vsagg/tags.h"

namespace vsagg {

class RandomSource;

struct RoundContext {
  uint64_t round = 0;
  std::vector<UserId> cs_online;
  std::vector<UserId> vs_online;
  std::vector<UserId> participants;  // sorted ascending
  uint64_t m = 0;
};

// Sorted intersection of the two servers' online sets. Throws
// kEmptyIntersection when no user reached both servers.
RoundContext ServersIntersectOnline(uint64_t round, std::span<const UserId> cs_ids,
                                    std::span<const UserId> vs_ids);

// F(s1 || s2, 0, d, Z_{R_w}).
FieldVector InitModelFromSeeds(const KeyMaterial& s1, const KeyMaterial& s2,
                               size_t d, FieldModulus R_w);

struct Alarm {
  uint64_t round = 0;
  AlarmReason reason = AlarmReason::kTagMismatch;
  TagScalar expected;
  TagScalar computed;
};

struct ShareMessages {
  Message to_cs;
  Message to_vs;
};

struct ReconstructResult {
  bool verified = false;
  uint64_t m = 0;
  // Decoded mean; empty when verification failed.
  std::vector<double> model;
  // Weighted mode only: the recovered sum of weights.
  std::optional<double> weight_sum;
  // w' as reconstructed, regardless of the verification outcome.
  FieldVector aggregate;
  std::optional<Alarm> alarm;
};

class User {
 public:
  // Samples the per-user keys K_vi and K_ci.
  User(UserId id, const ProtocolParams& params, RandomSource& rng);

  UserId id() const { return id_; }
  const ProtocolParams& params() const { return params_; }

  // Registration of the user-sampled keys: K_ci to CS, K_vi to VS.
  Message CsRegistration() const;
  Message VsRegistration() const;

  // SETUP_KEY, SEED_PAIR or PARAM_DIGEST from either server.
  void HandleSetup(const Message& msg);
  bool ready() const;

  // K_v = K_cv || K_vv. Throws kProtocolViolation before setup completes.
  const KeyMaterial& verification_key() const;
  FieldVector InitialModel() const;

  // Throws kOutOfBounds (codec), kStaleRound, kInvalidArgument (length).
  ShareMessages Share(std::span<const double> update, uint64_t round);
  // Weighted mode: shares [alpha * update || alpha].
  ShareMessages ShareWeighted(std::span<const double> update, double alpha,
                              uint64_t round);

  // Throws kParticipantCountMismatch when the servers disagree on m and
  // kStaleRound when `round` was already reconstructed. A failed tag check is
  // not an exception: the result carries verified = false and an alarm, and
  // the user's model is left untouched.
  ReconstructResult Reconstruct(const FieldVector& w1, TagScalar b2, uint64_t m_cs,
                                uint64_t m_vs, uint64_t round);
  ReconstructResult Reconstruct(const Message& publish_model,
                                const Message& publish_tag, uint64_t round);

  const std::vector<double>& current_model() const { return current_model_; }
  std::optional<uint64_t> last_verified_round() const { return last_verified_round_; }
  std::optional<uint64_t> last_shared_round() const { return last_shared_round_; }

  const KeyMaterial& model_key() const { return model_key_; }
  const KeyMaterial& tag_key() const { return tag_key_; }
  const KeyMaterial& global_model_key() const { return vs_global_key_; }
  const KeyMaterial& global_tag_key() const { return cs_global_key_; }

 private:
  ShareMessages ShareEncoded(const FieldVector& encoded, uint64_t round);

  UserId id_;
  ProtocolParams params_;
  std::array<uint8_t, 32> digest_;

  KeyMaterial model_key_;     // K_vi
  KeyMaterial tag_key_;       // K_ci
  KeyMaterial cs_verify_key_; // K_cv
  KeyMaterial cs_global_key_; // K_cg
  KeyMaterial vs_verify_key_; // K_vv
  KeyMaterial vs_global_key_; // K_vg
  KeyMaterial verification_key_;
  KeyMaterial cs_seed_;
  KeyMaterial vs_seed_;

  std::vector<double> current_model_;
  std::optional<uint64_t> last_shared_round_;
  std::optional<uint64_t> last_verified_round_;
};

// A corrupted server's deviation from the protocol, applied to its own
// computation in one round. Used for adversary injection.
struct Deviation {
  enum class Kind {
    kNone,
    kTamperModelShare,  // CS: alter a received w_i1; VS: alter a regenerated w_i2
    kTamperAggregate,   // CS: alter w''_1; VS: alter w_t
    kDropParticipant,   // omit one participant's contribution after intersection
    kLieAboutM,         // publish m + 1
    kForgeTag,          // CS: replace b_t; VS: replace b'_2 (with `magnitude`)
  };

  Kind kind = Kind::kNone;
  uint64_t round = 0;
  size_t victim_index = 0;  // index into the participant list, modulo m
  size_t coordinate = 0;    // modulo d
  uint64_t magnitude = 1;   // field offset (or the forged tag value)
};

std::string_view DeviationKindName(Deviation::Kind kind);

class ComputationServer {
 public:
  // Samples K_cv, K_cg and the seed s1.
  ComputationServer(const ProtocolParams& params, RandomSource& rng);

  // SETUP_KEY(K_cv), SETUP_KEY(K_cg), SEED_PAIR(s1), PARAM_DIGEST.
  std::vector<Message> SetupMessages() const;
  // SETUP_KEY(kUserTagKey) from a user. Throws kDuplicateId.
  void HandleRegistration(const Message& msg);
  // PARAM_DIGEST from a peer. Throws kParameterMismatch.
  void CheckPeerDigest(const Message& msg) const;

  // MODEL_SHARE. Throws kUnknownParticipant, kDuplicateId (second share for
  // the same round) or kPayloadLengthMismatch (wrong dimension).
  void AcceptModelShare(const Message& msg);
  std::vector<UserId> OnlineIds(uint64_t round) const;

  // b_t = sum_P F(K_ci, r, 1) - F(K_cg, r, 1).
  TagScalar TagAggregate(const RoundContext& ctx) const;
  // w''_1 = sum_P w_i1 + w_t, published with m. Throws kMissingShare.
  PublishedModel FinalizeModel(const RoundContext& ctx, const FieldVector& w_t);

  std::optional<Message> LatestPublication() const;
  void DiscardRound(uint64_t round);
  void RecordAlarm(const Message& msg);
  std::vector<AlarmPayload> alarms() const;

  void SetDeviation(Deviation d) { deviation_ = d; }
  void ClearDeviation() { deviation_ = {}; }

  size_t registered_users() const;
  bool IsRegistered(UserId id) const;
  const KeyMaterial& verify_key() const { return verify_key_; }
  const KeyMaterial& global_key() const { return global_key_; }

 private:
  bool Deviates(Deviation::Kind kind, uint64_t round) const {
    return deviation_.kind == kind && deviation_.round == round;
  }

  ProtocolParams params_;
  KeyMaterial verify_key_;  // K_cv
  KeyMaterial global_key_;  // K_cg
  KeyMaterial seed_;        // s1
  Deviation deviation_;

  mutable std::mutex mu_;
  std::map<UserId, KeyMaterial> tag_keys_;  // K_ci
  std::map<uint64_t, std::map<UserId, FieldVector>> shares_;
  std::optional<Message> latest_;
  std::vector<AlarmPayload> alarms_;
};

class VerificationServer {
 public:
  // Samples K_vv, K_vg and the seed s2.
  VerificationServer(const ProtocolParams& params, RandomSource& rng);

  std::vector<Message> SetupMessages() const;
  // SETUP_KEY(kUserModelKey) from a user. Throws kDuplicateId.
  void HandleRegistration(const Message& msg);
  void CheckPeerDigest(const Message& msg) const;

  // TAG_SHARE. Same error contract as ComputationServer::AcceptModelShare.
  void AcceptTagShare(const Message& msg);
  std::vector<UserId> OnlineIds(uint64_t round) const;

  // w_t = sum_P F(K_vi, r, d) - F(K_vg, r, d). Throws kUnknownParticipant.
  FieldVector ModelAggregate(const RoundContext& ctx) const;
  // b'_2 = sum_P b_i2 + b_t, published with m. Throws kMissingShare.
  PublishedTag FinalizeTag(const RoundContext& ctx, TagScalar b_t);

  std::optional<Message> LatestPublication() const;
  void DiscardRound(uint64_t round);
  void RecordAlarm(const Message& msg);
  std::vector<AlarmPayload> alarms() const;

  void SetDeviation(Deviation d) { deviation_ = d; }
  void ClearDeviation() { deviation_ = {}; }

  size_t registered_users() const;
  bool IsRegistered(UserId id) const;
  const KeyMaterial& verify_key() const { return verify_key_; }
  const KeyMaterial& global_key() const { return global_key_; }

 private:
  bool Deviates(Deviation::Kind kind, uint64_t round) const {
    return deviation_.kind == kind && deviation_.round == round;
  }

  ProtocolParams params_;
  KeyMaterial verify_key_;  // K_vv
  KeyMaterial global_key_;  // K_vg
  KeyMaterial seed_;        // s2
  Deviation deviation_;

  mutable std::mutex mu_;
  std::map<UserId, KeyMaterial> model_keys_;  // K_vi
  std::map<uint64_t, std::map<UserId, TagScalar>> tag_shares_;
  std::optional<Message> latest_;
  std::vector<AlarmPayload> alarms_;
};

struct SetupResult {
  std::vector<User> users;
  std::unique_ptr<ComputationServer> cs;
  std::unique_ptr<VerificationServer> vs;
};

// In-process setup for users 1..n: key sampling, registration, distribution
// and parameter-digest exchange, all through the message handlers.
SetupResult Setup(uint32_t n, const ProtocolParams& params, RandomSource& rng);

// Adds a user after setup. Throws kDuplicateId if `id` is already known.
User JoinNewUser(ComputationServer& cs, VerificationServer& vs,
                 const ProtocolParams& params, UserId id, RandomSource& rng);

}  // namespace vsagg

#endif  // VSAGG_ROLES_H_
