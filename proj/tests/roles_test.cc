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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include "vsagg/errors.h"
#include "vsagg/random.h"

namespace vsagg {
namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

std::vector<double> UpdateFor(UserId id, uint64_t round, size_t d) {
  std::vector<double> u(d);
  for (size_t j = 0; j < d; ++j) {
    u[j] = 0.01 * static_cast<double>(id) - 0.02 * static_cast<double>(j) +
           0.001 * static_cast<double>(round);
  }
  return u;
}

struct DirectRound {
  RoundContext ctx;
  PublishedModel pm;
  PublishedTag pt;
};

// One round with every user reaching both servers, no transport.
DirectRound RunDirect(SetupResult& s, uint64_t round) {
  const size_t d = s.users.front().params().model_dimension();
  for (User& u : s.users) {
    ShareMessages m = u.Share(UpdateFor(u.id(), round, d), round);
    s.cs->AcceptModelShare(m.to_cs);
    s.vs->AcceptTagShare(m.to_vs);
  }
  DirectRound out;
  out.ctx = ServersIntersectOnline(round, s.cs->OnlineIds(round), s.vs->OnlineIds(round));
  FieldVector w_t = s.vs->ModelAggregate(out.ctx);
  TagScalar b_t = s.cs->TagAggregate(out.ctx);
  out.pm = s.cs->FinalizeModel(out.ctx, w_t);
  out.pt = s.vs->FinalizeTag(out.ctx, b_t);
  return out;
}

std::vector<double> ExpectedMean(const std::vector<User>& users, uint64_t round, size_t d) {
  std::vector<double> mean(d, 0.0);
  for (const User& u : users) {
    auto x = UpdateFor(u.id(), round, d);
    for (size_t j = 0; j < d; ++j) mean[j] += x[j];
  }
  for (auto& v : mean) v /= static_cast<double>(users.size());
  return mean;
}

class RolesTest : public ::testing::Test {
 protected:
  static constexpr size_t kDim = 5;
  RolesTest() : params_(MakeProtocolParams(kDim, 8)), rng_(11) {}
  ProtocolParams params_;
  DeterministicRandom rng_;
};

TEST_F(RolesTest, SetupDistributesConsistentKeys) {
  SetupResult s = ::vsagg::Setup(4, params_, rng_);
  ASSERT_EQ(s.users.size(), 4u);
  EXPECT_EQ(s.cs->registered_users(), 4u);
  EXPECT_EQ(s.vs->registered_users(), 4u);
  std::set<std::vector<uint8_t>> model_keys, tag_keys;
  for (const User& u : s.users) {
    EXPECT_TRUE(u.ready());
    EXPECT_EQ(u.verification_key(), s.users.front().verification_key());
    EXPECT_EQ(u.verification_key(), ConcatKeys(s.cs->verify_key(), s.vs->verify_key()));
    EXPECT_EQ(u.global_tag_key(), s.cs->global_key());
    EXPECT_EQ(u.global_model_key(), s.vs->global_key());
    EXPECT_EQ(u.InitialModel(), s.users.front().InitialModel());
    auto mk = u.model_key().bytes();
    auto tk = u.tag_key().bytes();
    model_keys.emplace(mk.begin(), mk.end());
    tag_keys.emplace(tk.begin(), tk.end());
  }
  EXPECT_EQ(model_keys.size(), 4u);
  EXPECT_EQ(tag_keys.size(), 4u);
}

TEST_F(RolesTest, SetupIsDeterministicPerSeed) {
  DeterministicRandom a(5), b(5), c(6);
  SetupResult sa = ::vsagg::Setup(3, params_, a);
  SetupResult sb = ::vsagg::Setup(3, params_, b);
  SetupResult sc = ::vsagg::Setup(3, params_, c);
  EXPECT_EQ(sa.users[2].model_key(), sb.users[2].model_key());
  EXPECT_EQ(sa.users[0].verification_key(), sb.users[0].verification_key());
  EXPECT_NE(sa.users[0].verification_key(), sc.users[0].verification_key());
}

TEST_F(RolesTest, InitialModelDependsOnBothSeeds) {
  DeterministicRandom rng(1);
  KeyMaterial s1 = KeyMaterial::Generate(rng);
  KeyMaterial s2 = KeyMaterial::Generate(rng);
  KeyMaterial s2b = KeyMaterial::Generate(rng);
  FieldVector a = InitModelFromSeeds(s1, s2, 16, params_.R_w);
  EXPECT_EQ(a, InitModelFromSeeds(s1, s2, 16, params_.R_w));
  EXPECT_NE(a, InitModelFromSeeds(s1, s2b, 16, params_.R_w));
  EXPECT_NE(a, InitModelFromSeeds(s2b, s2, 16, params_.R_w));
}

TEST(IntersectTest, Examples) {
  std::vector<UserId> cs = {1, 2, 3, 5}, vs = {2, 3, 4, 5};
  RoundContext ctx = ServersIntersectOnline(1, cs, vs);
  EXPECT_EQ(ctx.participants, (std::vector<UserId>{2, 3, 5}));
  EXPECT_EQ(ctx.m, 3u);
  std::vector<UserId> a = {3, 1, 1}, b = {1, 3};
  EXPECT_EQ(ServersIntersectOnline(1, a, b).participants, (std::vector<UserId>{1, 3}));
  std::vector<UserId> x = {1}, y = {2};
  EXPECT_EQ(CodeOf([&] { ServersIntersectOnline(1, x, y); }), ErrorCode::kEmptyIntersection);
}

TEST_F(RolesTest, HonestRoundVerifiesForEveryUser) {
  SetupResult s = ::vsagg::Setup(4, params_, rng_);
  for (uint64_t r = 1; r <= 3; ++r) {
    DirectRound dr = RunDirect(s, r);
    EXPECT_EQ(dr.pm.m, 4u);
    EXPECT_EQ(dr.pt.m, 4u);
    auto expected = ExpectedMean(s.users, r, kDim);
    for (User& u : s.users) {
      ReconstructResult res = u.Reconstruct(dr.pm.w, dr.pt.b, dr.pm.m, dr.pt.m, r);
      ASSERT_TRUE(res.verified);
      EXPECT_FALSE(res.alarm.has_value());
      for (size_t j = 0; j < kDim; ++j) EXPECT_NEAR(res.model[j], expected[j], 1e-9);
      EXPECT_EQ(u.current_model(), res.model);
      EXPECT_EQ(u.last_verified_round(), r);
    }
  }
}

TEST_F(RolesTest, ServerViewsAreMasked) {
  SetupResult s = ::vsagg::Setup(2, params_, rng_);
  User& u = s.users[0];
  std::vector<double> x = UpdateFor(u.id(), 1, kDim);
  ShareMessages m = u.Share(x, 1);
  FieldVector w1 = ParseVectorPayload(m.to_cs, params_.R_w);
  FieldVector enc = Encode(x, params_.codec);
  EXPECT_NE(w1, enc);
  EXPECT_EQ(AddVectors(w1, Expand(u.model_key(), 1, kDim, params_.R_w), params_.R_w), enc);
}

TEST_F(RolesTest, RegistrationAndShareErrors) {
  SetupResult s = ::vsagg::Setup(2, params_, rng_);
  EXPECT_EQ(CodeOf([&] { s.cs->HandleRegistration(s.users[0].CsRegistration()); }),
            ErrorCode::kDuplicateId);
  EXPECT_EQ(CodeOf([&] { s.vs->HandleRegistration(s.users[0].VsRegistration()); }),
            ErrorCode::kDuplicateId);

  ShareMessages m = s.users[0].Share(UpdateFor(1, 1, kDim), 1);
  s.cs->AcceptModelShare(m.to_cs);
  EXPECT_EQ(CodeOf([&] { s.cs->AcceptModelShare(m.to_cs); }), ErrorCode::kDuplicateId);
  s.vs->AcceptTagShare(m.to_vs);
  EXPECT_EQ(CodeOf([&] { s.vs->AcceptTagShare(m.to_vs); }), ErrorCode::kDuplicateId);

  Message stranger = m.to_cs;
  stranger.sender = 99;
  EXPECT_EQ(CodeOf([&] { s.cs->AcceptModelShare(stranger); }), ErrorCode::kUnknownParticipant);
  Message stranger_tag = m.to_vs;
  stranger_tag.sender = 99;
  EXPECT_EQ(CodeOf([&] { s.vs->AcceptTagShare(stranger_tag); }), ErrorCode::kUnknownParticipant);

  EXPECT_EQ(CodeOf([&] { s.users[0].Share(UpdateFor(1, 1, kDim), 1); }), ErrorCode::kStaleRound);
  EXPECT_EQ(CodeOf([&] { s.users[1].Share(UpdateFor(2, 1, kDim - 1), 1); }),
            ErrorCode::kLengthMismatch);
  std::vector<double> too_big(kDim, 1e6);
  EXPECT_EQ(CodeOf([&] { s.users[1].Share(too_big, 1); }), ErrorCode::kOutOfBounds);

  // User 2 never shared, so a context naming it is missing a share.
  RoundContext ctx;
  ctx.round = 1;
  ctx.participants = {1, 2};
  ctx.m = 2;
  FieldVector w_t = s.vs->ModelAggregate(ctx);
  EXPECT_EQ(CodeOf([&] { s.cs->FinalizeModel(ctx, w_t); }), ErrorCode::kMissingShare);
  EXPECT_EQ(CodeOf([&] { s.vs->FinalizeTag(ctx, TagScalar{{0}}); }), ErrorCode::kMissingShare);
}

TEST_F(RolesTest, StaleReconstructAndCountMismatch) {
  SetupResult s = ::vsagg::Setup(2, params_, rng_);
  DirectRound dr = RunDirect(s, 1);
  User& u = s.users[0];
  EXPECT_EQ(CodeOf([&] { u.Reconstruct(dr.pm.w, dr.pt.b, 2, 3, 1); }),
            ErrorCode::kParticipantCountMismatch);
  ASSERT_TRUE(u.Reconstruct(dr.pm.w, dr.pt.b, dr.pm.m, dr.pt.m, 1).verified);
  EXPECT_EQ(CodeOf([&] { u.Reconstruct(dr.pm.w, dr.pt.b, dr.pm.m, dr.pt.m, 1); }),
            ErrorCode::kStaleRound);
}

TEST_F(RolesTest, MismatchedParametersRejected) {
  SetupResult s = ::vsagg::Setup(1, params_, rng_);
  ProtocolParams other = MakeProtocolParams(kDim + 1, 8);
  DeterministicRandom rng(3);
  ComputationServer cs2(other, rng);
  EXPECT_EQ(CodeOf([&] { s.vs->CheckPeerDigest(cs2.SetupMessages().front()); }),
            ErrorCode::kParameterMismatch);
  User stray(7, other, rng);
  EXPECT_EQ(CodeOf([&] {
              for (const Message& m : s.cs->SetupMessages()) stray.HandleSetup(m);
            }),
            ErrorCode::kParameterMismatch);
}

TEST_F(RolesTest, JoinedUserParticipatesNextRound) {
  SetupResult s = ::vsagg::Setup(3, params_, rng_);
  DirectRound r1 = RunDirect(s, 1);
  for (User& u : s.users) ASSERT_TRUE(u.Reconstruct(r1.pm.w, r1.pt.b, r1.pm.m, r1.pt.m, 1).verified);

  User joined = JoinNewUser(*s.cs, *s.vs, params_, 4, rng_);
  EXPECT_TRUE(joined.ready());
  EXPECT_EQ(joined.verification_key(), s.users[0].verification_key());
  EXPECT_EQ(joined.InitialModel(), s.users[0].InitialModel());
  EXPECT_EQ(CodeOf([&] { JoinNewUser(*s.cs, *s.vs, params_, 4, rng_); }), ErrorCode::kDuplicateId);
  // The newcomer can check the round it missed.
  ReconstructResult check = joined.Reconstruct(r1.pm.w, r1.pt.b, r1.pm.m, r1.pt.m, 1);
  EXPECT_TRUE(check.verified);

  s.users.push_back(std::move(joined));
  DirectRound r2 = RunDirect(s, 2);
  EXPECT_EQ(r2.pm.m, 4u);
  auto expected = ExpectedMean(s.users, 2, kDim);
  for (User& u : s.users) {
    ReconstructResult res = u.Reconstruct(r2.pm.w, r2.pt.b, r2.pm.m, r2.pt.m, 2);
    ASSERT_TRUE(res.verified);
    for (size_t j = 0; j < kDim; ++j) EXPECT_NEAR(res.model[j], expected[j], 1e-9);
  }
}

TEST(WeightedRoles, WeightedMeanAndWeightSum) {
  ProtocolParams params = MakeProtocolParams(3, 4, 60, 40, /*weighted=*/true);
  ASSERT_EQ(params.dimension, 4u);
  DeterministicRandom rng(9);
  SetupResult s = ::vsagg::Setup(2, params, rng);
  std::vector<double> x1 = {1.0, -2.0, 0.5}, x2 = {3.0, 2.0, -0.5};
  ShareMessages a = s.users[0].ShareWeighted(x1, 1.0, 1);
  ShareMessages b = s.users[1].ShareWeighted(x2, 3.0, 1);
  for (const ShareMessages* m : {&a, &b}) {
    s.cs->AcceptModelShare(m->to_cs);
    s.vs->AcceptTagShare(m->to_vs);
  }
  RoundContext ctx = ServersIntersectOnline(1, s.cs->OnlineIds(1), s.vs->OnlineIds(1));
  FieldVector w_t = s.vs->ModelAggregate(ctx);
  TagScalar b_t = s.cs->TagAggregate(ctx);
  PublishedModel pm = s.cs->FinalizeModel(ctx, w_t);
  PublishedTag pt = s.vs->FinalizeTag(ctx, b_t);
  ReconstructResult res = s.users[0].Reconstruct(pm.w, pt.b, pm.m, pt.m, 1);
  ASSERT_TRUE(res.verified);
  ASSERT_TRUE(res.weight_sum.has_value());
  EXPECT_EQ(*res.weight_sum, 4.0);
  ASSERT_EQ(res.model.size(), 3u);
  const double tol = 0.5 / params.codec.delta();
  for (size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(res.model[j], (1.0 * x1[j] + 3.0 * x2[j]) / 4.0, tol);
  }
}

struct DeviationCase {
  bool on_cs;
  Deviation::Kind kind;
};

class DeviationTest : public ::testing::TestWithParam<DeviationCase> {};

TEST_P(DeviationTest, EveryUserDetects) {
  const DeviationCase c = GetParam();
  ProtocolParams params = MakeProtocolParams(6, 8);
  DeterministicRandom rng(21);
  SetupResult s = ::vsagg::Setup(4, params, rng);
  for (uint64_t r = 1; r <= 3; ++r) {
    Deviation dev{c.kind, r, static_cast<size_t>(r), static_cast<size_t>(2 * r), 12345 + r};
    if (c.on_cs) {
      s.cs->SetDeviation(dev);
    } else {
      s.vs->SetDeviation(dev);
    }
    DirectRound dr = RunDirect(s, r);
    for (User& u : s.users) {
      if (c.kind == Deviation::Kind::kLieAboutM) {
        EXPECT_EQ(CodeOf([&] { u.Reconstruct(dr.pm.w, dr.pt.b, dr.pm.m, dr.pt.m, r); }),
                  ErrorCode::kParticipantCountMismatch);
        continue;
      }
      ReconstructResult res = u.Reconstruct(dr.pm.w, dr.pt.b, dr.pm.m, dr.pt.m, r);
      EXPECT_FALSE(res.verified) << DeviationKindName(c.kind) << " round " << r;
      ASSERT_TRUE(res.alarm.has_value());
      EXPECT_EQ(res.alarm->reason, AlarmReason::kTagMismatch);
      EXPECT_TRUE(res.model.empty());
      EXPECT_TRUE(u.current_model().empty() || u.last_verified_round() != r);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    AllActions, DeviationTest,
    ::testing::Values(DeviationCase{true, Deviation::Kind::kTamperModelShare},
                      DeviationCase{true, Deviation::Kind::kTamperAggregate},
                      DeviationCase{true, Deviation::Kind::kDropParticipant},
                      DeviationCase{true, Deviation::Kind::kLieAboutM},
                      DeviationCase{true, Deviation::Kind::kForgeTag},
                      DeviationCase{false, Deviation::Kind::kTamperModelShare},
                      DeviationCase{false, Deviation::Kind::kTamperAggregate},
                      DeviationCase{false, Deviation::Kind::kDropParticipant},
                      DeviationCase{false, Deviation::Kind::kLieAboutM},
                      DeviationCase{false, Deviation::Kind::kForgeTag}),
    [](const ::testing::TestParamInfo<DeviationCase>& info) {
      return std::string(info.param.on_cs ? "Cs_" : "Vs_") +
             std::string(DeviationKindName(info.param.kind));
    });

}  // namespace
}  // namespace vsagg
