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

#include "vsagg/session.h"

#include <algorithm>
#include <chrono>
#include <string>

#include "vsagg/codec.h"

namespace vsagg {
namespace {

using Clock = std::chrono::steady_clock;

double MsSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

bool RoundOutcome::all_verified() const {
  if (aborted) return false;
  for (const auto& u : users) {
    if (u.participated && !u.verified) return false;
  }
  return true;
}

Session::Session(ProtocolParams params, Network& net, uint64_t seed, SessionOptions options)
    : params_(std::move(params)), net_(net), options_(options), master_(seed) {}

Session::~Session() = default;

User& Session::user(UserId id) {
  auto it = users_.find(id);
  if (it == users_.end()) {
    throw Error(ErrorCode::kUnknownParticipant, "no user with id " + std::to_string(id));
  }
  return it->second;
}

std::vector<UserId> Session::user_ids() const {
  std::vector<UserId> ids;
  for (const auto& [id, u] : users_) ids.push_back(id);
  return ids;
}

Message Session::RecvExpect(const Endpoint& at, MessageKind kind, uint64_t round) {
  auto& stash = stash_[at];
  for (auto it = stash.begin(); it != stash.end(); ++it) {
    if (it->kind == kind && it->round == round) {
      Message msg = std::move(*it);
      stash.erase(it);
      return msg;
    }
  }
  while (true) {
    Message msg = net_.Recv(at, options_.recv_timeout);
    if (msg.kind == kind && msg.round == round) return msg;
    stash.push_back(std::move(msg));
  }
}

void Session::Setup(uint32_t n) {
  if (cs_) throw Error(ErrorCode::kProtocolViolation, "session already set up");
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "setup needs at least one user");
  {
    DeterministicRandom cs_rng = master_.Fork("cs");
    DeterministicRandom vs_rng = master_.Fork("vs");
    cs_ = std::make_unique<ComputationServer>(params_, cs_rng);
    vs_ = std::make_unique<VerificationServer>(params_, vs_rng);
  }
  net_.Send(Endpoint::Cs(), Endpoint::Vs(), cs_->SetupMessages().front());
  net_.Send(Endpoint::Vs(), Endpoint::Cs(), vs_->SetupMessages().front());
  vs_->CheckPeerDigest(RecvExpect(Endpoint::Vs(), MessageKind::kParamDigest, 0));
  cs_->CheckPeerDigest(RecvExpect(Endpoint::Cs(), MessageKind::kParamDigest, 0));
  for (uint32_t i = 0; i < n; ++i) Join();
}

void Session::DistributeSetup(User& user) {
  const Endpoint at = Endpoint::User(user.id());
  const auto cs_msgs = cs_->SetupMessages();
  const auto vs_msgs = vs_->SetupMessages();
  for (const Message& m : cs_msgs) net_.Send(Endpoint::Cs(), at, m);
  for (const Message& m : vs_msgs) net_.Send(Endpoint::Vs(), at, m);
  for (size_t i = 0; i < cs_msgs.size() + vs_msgs.size(); ++i) {
    user.HandleSetup(net_.Recv(at, options_.recv_timeout));
  }
  net_.Send(at, Endpoint::Cs(), user.CsRegistration());
  net_.Send(at, Endpoint::Vs(), user.VsRegistration());
  cs_->HandleRegistration(RecvExpect(Endpoint::Cs(), MessageKind::kSetupKey, 0));
  vs_->HandleRegistration(RecvExpect(Endpoint::Vs(), MessageKind::kSetupKey, 0));
}

UserId Session::Join() {
  if (!cs_) throw Error(ErrorCode::kProtocolViolation, "join before setup");
  const UserId id = next_id_;
  if (cs_->IsRegistered(id) || vs_->IsRegistered(id)) {
    throw Error(ErrorCode::kDuplicateId, "user id " + std::to_string(id) + " already in use");
  }
  DeterministicRandom rng = master_.Fork("user", id);
  auto [it, inserted] = users_.emplace(id, User(id, params_, rng));
  DistributeSetup(it->second);
  ++next_id_;
  return id;
}

ReconstructResult Session::VerifyLatest(UserId id) {
  User& u = user(id);
  std::optional<Message> pm = cs_->LatestPublication();
  std::optional<Message> pt = vs_->LatestPublication();
  if (!pm || !pt) throw Error(ErrorCode::kProtocolViolation, "nothing published yet");
  const Endpoint at = Endpoint::User(id);
  net_.Send(Endpoint::Cs(), at, *pm);
  net_.Send(Endpoint::Vs(), at, *pt);
  Message model_msg = RecvExpect(at, MessageKind::kPublishModel, pm->round);
  Message tag_msg = RecvExpect(at, MessageKind::kPublishTag, pt->round);
  return u.Reconstruct(model_msg, tag_msg, pm->round);
}

void Session::RaiseAlarm(UserId id, const Alarm& alarm) {
  Message msg = MakeAlarm(alarm.round, id,
                          AlarmPayload{alarm.reason, alarm.expected, alarm.computed});
  net_.Send(Endpoint::User(id), Endpoint::Cs(), msg);
  net_.Send(Endpoint::User(id), Endpoint::Vs(), msg);
  cs_->RecordAlarm(RecvExpect(Endpoint::Cs(), MessageKind::kAlarm, alarm.round));
  vs_->RecordAlarm(RecvExpect(Endpoint::Vs(), MessageKind::kAlarm, alarm.round));
}

RoundOutcome Session::RunRound(uint64_t round, const std::vector<UserSubmission>& submissions) {
  if (!cs_) throw Error(ErrorCode::kProtocolViolation, "round before setup");
  RoundOutcome out;
  out.round = round;
  std::map<UserId, UserRoundResult> results;

  // Share.
  size_t expect_cs = 0, expect_vs = 0;
  double share_ms = 0;
  size_t sharers = 0;
  for (const auto& sub : submissions) {
    UserRoundResult& res = results[sub.id];
    res.id = sub.id;
    try {
      User& u = user(sub.id);
      auto start = Clock::now();
      ShareMessages msgs = params_.weighted ? u.ShareWeighted(sub.update, sub.weight, round)
                                            : u.Share(sub.update, round);
      share_ms += MsSince(start);
      ++sharers;
      if (sub.reach_cs) {
        net_.Send(Endpoint::User(sub.id), Endpoint::Cs(), msgs.to_cs);
        ++expect_cs;
      }
      if (sub.reach_vs) {
        net_.Send(Endpoint::User(sub.id), Endpoint::Vs(), msgs.to_vs);
        ++expect_vs;
      }
    } catch (const Error& e) {
      res.error = e.code();
      res.error_message = e.what();
    }
  }
  if (sharers > 0) out.timings.user_share_ms = share_ms / static_cast<double>(sharers);

  auto collect = [&](const Endpoint& at, MessageKind kind, size_t expected, auto&& accept) {
    size_t got = 0;
    auto& stash = stash_[at];
    for (auto it = stash.begin(); it != stash.end() && got < expected;) {
      if (it->kind == kind && it->round == round) {
        try {
          accept(*it);
          ++got;
        } catch (const Error&) {
        }
        it = stash.erase(it);
      } else {
        ++it;
      }
    }
    while (got < expected) {
      Message msg;
      try {
        msg = net_.Recv(at, options_.recv_timeout);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kTimeout) break;
        throw;
      }
      if (msg.kind != kind) {
        stash.push_back(std::move(msg));
        continue;
      }
      if (msg.round != round) continue;  // late share from an earlier round
      try {
        accept(msg);
        ++got;
      } catch (const Error&) {
        // Rejected shares (duplicates, unknown senders) do not count.
      }
    }
  };
  collect(Endpoint::Cs(), MessageKind::kModelShare, expect_cs,
          [&](const Message& m) { cs_->AcceptModelShare(m); });
  collect(Endpoint::Vs(), MessageKind::kTagShare, expect_vs,
          [&](const Message& m) { vs_->AcceptTagShare(m); });

  // Online-set exchange and intersection.
  const std::vector<UserId> cs_ids = cs_->OnlineIds(round);
  const std::vector<UserId> vs_ids = vs_->OnlineIds(round);
  net_.Send(Endpoint::Cs(), Endpoint::Vs(), MakeOnlineList(round, kComputationServerId, cs_ids));
  net_.Send(Endpoint::Vs(), Endpoint::Cs(), MakeOnlineList(round, kVerificationServerId, vs_ids));
  std::vector<UserId> cs_view_of_vs =
      ParseOnlineList(RecvExpect(Endpoint::Cs(), MessageKind::kOnlineList, round));
  std::vector<UserId> vs_view_of_cs =
      ParseOnlineList(RecvExpect(Endpoint::Vs(), MessageKind::kOnlineList, round));

  auto abort_round = [&](const Error& e) {
    out.aborted = true;
    out.abort_code = e.code();
    out.abort_reason = e.what();
    cs_->DiscardRound(round);
    vs_->DiscardRound(round);
    for (auto& [id, r] : results) out.users.push_back(r);
    return out;
  };

  RoundContext ctx;
  try {
    ctx = ServersIntersectOnline(round, cs_ids, cs_view_of_vs);
    RoundContext vs_ctx = ServersIntersectOnline(round, vs_view_of_cs, vs_ids);
    if (vs_ctx.participants != ctx.participants) {
      throw Error(ErrorCode::kProtocolViolation, "servers derived different participant sets");
    }
    if (!CheckCapacity(params_.codec, ctx.m)) {
      throw Error(ErrorCode::kCapacityViolation,
                  "m = " + std::to_string(ctx.m) + " exceeds the codec capacity");
    }
  } catch (const Error& e) {
    return abort_round(e);
  }
  out.context = ctx;

  // Aggregate.
  PublishedModel pm;
  PublishedTag pt;
  try {
    auto vs_start = Clock::now();
    FieldVector w_t = vs_->ModelAggregate(ctx);
    out.timings.vs_aggregate_ms += MsSince(vs_start);
    net_.Send(Endpoint::Vs(), Endpoint::Cs(), MakeReshareModel(round, w_t));

    auto cs_start = Clock::now();
    TagScalar b_t = cs_->TagAggregate(ctx);
    out.timings.cs_aggregate_ms += MsSince(cs_start);
    net_.Send(Endpoint::Cs(), Endpoint::Vs(), MakeReshareTag(round, b_t));

    Message reshare_model = RecvExpect(Endpoint::Cs(), MessageKind::kReshareModel, round);
    cs_start = Clock::now();
    pm = cs_->FinalizeModel(ctx, ParseVectorPayload(reshare_model, params_.R_w));
    out.timings.cs_aggregate_ms += MsSince(cs_start);

    Message reshare_tag = RecvExpect(Endpoint::Vs(), MessageKind::kReshareTag, round);
    vs_start = Clock::now();
    pt = vs_->FinalizeTag(ctx, ParseScalarPayload(reshare_tag, params_.R_b));
    out.timings.vs_aggregate_ms += MsSince(vs_start);
  } catch (const Error& e) {
    return abort_round(e);
  }
  out.published_model = pm;
  out.published_tag = pt;

  // Reconstruct.
  const Message pm_msg = MakePublishModel(round, pm.m, pm.w);
  const Message pt_msg = MakePublishTag(round, pt.b, pt.m);
  double rec_ms = 0;
  for (UserId id : ctx.participants) {
    UserRoundResult& res = results[id];
    res.id = id;
    res.participated = true;
    const Endpoint at = Endpoint::User(id);
    net_.Send(Endpoint::Cs(), at, pm_msg);
    net_.Send(Endpoint::Vs(), at, pt_msg);
    Message got_model = RecvExpect(at, MessageKind::kPublishModel, round);
    Message got_tag = RecvExpect(at, MessageKind::kPublishTag, round);
    auto start = Clock::now();
    std::optional<Alarm> alarm;
    try {
      ReconstructResult r = user(id).Reconstruct(got_model, got_tag, round);
      res.verified = r.verified;
      res.model = std::move(r.model);
      res.weight_sum = r.weight_sum;
      alarm = r.alarm;
    } catch (const Error& e) {
      res.error = e.code();
      res.error_message = e.what();
      if (e.code() == ErrorCode::kParticipantCountMismatch) {
        alarm = Alarm{round, AlarmReason::kParticipantCountMismatch,
                      TagScalar{FieldElement{pm.m}}, TagScalar{FieldElement{pt.m}}};
      }
    }
    rec_ms += MsSince(start);
    if (alarm) {
      RaiseAlarm(id, *alarm);
      ++out.alarms_raised;
    }
  }
  out.timings.user_reconstruct_ms = rec_ms / static_cast<double>(ctx.participants.size());
  for (auto& [id, r] : results) out.users.push_back(std::move(r));
  return out;
}

}  // namespace vsagg
