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

// Acceptance checks: prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "vsagg/errors.h"
#include "vsagg/harness.h"
#include "vsagg/prf.h"
#include "vsagg/roles.h"
#include "vsagg/session.h"

namespace vsagg {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED(" << what << ")";
    }
  }
};

std::vector<UserSubmission> Submissions(Session& s, uint64_t round, uint64_t seed) {
  std::vector<UserSubmission> subs;
  for (UserId id : s.user_ids()) {
    UserSubmission sub;
    sub.id = id;
    sub.update = SyntheticUpdate(seed, round, id, s.params().model_dimension(), 1.0);
    subs.push_back(std::move(sub));
  }
  return subs;
}

std::vector<double> OracleOver(const std::vector<UserSubmission>& subs,
                               const std::vector<UserId>& participants,
                               const CodecParams& codec) {
  std::vector<std::vector<double>> xs;
  for (const auto& s : subs) {
    if (std::binary_search(participants.begin(), participants.end(), s.id)) xs.push_back(s.update);
  }
  return PlaintextOracle(xs, codec);
}

double MaxAbsDiff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// 1. Oracle equivalence over randomized configurations.
Verdict OracleEquivalence() {
  Verdict v;
  const auto start = Clock::now();
  const uint32_t ns[] = {1, 2, 3, 10, 50};
  const size_t ds[] = {1, 2, 100, 20000};
  const double drops[] = {0.0, 0.05, 0.5};
  std::vector<std::tuple<uint32_t, size_t, double>> grid;
  for (uint32_t n : ns)
    for (size_t d : ds)
      for (double p : drops) grid.emplace_back(n, d, p);
  std::mt19937_64 gen(2024);
  std::shuffle(grid.begin(), grid.end(), gen);
  grid.resize(50);

  size_t rounds = 0, aborted = 0, verified = 0;
  double worst = 0;
  for (size_t i = 0; i < grid.size(); ++i) {
    auto [n, d, p] = grid[i];
    RunConfig c;
    c.users = n;
    c.dim = d;
    c.dropout = p;
    c.rounds = 2;
    c.seed = 1000 + i;
    MetricsReport r = RunSimulation(c);
    const double tol = 0.5 / std::ldexp(1.0, c.delta_exp);
    for (const RoundReport& rr : r.rounds) {
      ++rounds;
      if (rr.aborted) {
        ++aborted;
        v.Require(rr.abort_reason.find("no user reached both servers") != std::string::npos,
                  "unexpected abort: " + rr.abort_reason);
        continue;
      }
      verified += rr.verified_users;
      worst = std::max(worst, rr.oracle_max_deviation);
      v.Require(rr.failed_users == 0, "honest round failed to verify");
      v.Require(rr.verified_users == rr.participants.size(), "participant did not verify");
      v.Require(rr.oracle_max_deviation <= tol, "oracle deviation above 0.5/delta");
    }
  }
  const double secs = SecondsSince(start);
  v.Require(secs <= 120.0, "runtime above 2 minutes");
  v.detail << " configs=50 rounds=" << rounds << " aborted_empty=" << aborted
           << " verified_users=" << verified << " max_dev=" << worst << " secs=" << secs;
  return v;
}

// 2. Every injected deviation detected at the 2^60 prime.
Verdict TamperDetection() {
  Verdict v;
  const size_t kTrials = 1000;
  const size_t kUsers = 3, kDim = 8;
  const Deviation::Kind kinds[] = {
      Deviation::Kind::kTamperModelShare, Deviation::Kind::kTamperAggregate,
      Deviation::Kind::kForgeTag, Deviation::Kind::kLieAboutM, Deviation::Kind::kDropParticipant};
  for (Deviation::Kind kind : kinds) {
    for (bool on_cs : {true, false}) {
      InMemoryNetwork net;
      Session s(MakeProtocolParams(kDim, kUsers), net, 77);
      s.Setup(kUsers);
      const ProtocolParams& params = s.params();
      DeterministicRandom rng = DeterministicRandom(5).Fork(DeviationKindName(kind), on_cs);
      size_t detected = 0;
      for (uint64_t r = 1; r <= kTrials; ++r) {
        Deviation dev;
        dev.kind = kind;
        dev.round = r;
        dev.victim_index = rng.Uniform(kUsers);
        dev.coordinate = rng.Uniform(kDim);
        dev.magnitude = kind == Deviation::Kind::kForgeTag
                            ? rng.Uniform(params.R_b.value())
                            : 1 + rng.Uniform(params.R_w.value() - 1);
        if (on_cs) {
          s.cs().SetDeviation(dev);
        } else {
          s.vs().SetDeviation(dev);
        }
        RoundOutcome out = s.RunRound(r, Submissions(s, r, 5));
        bool caught = !out.aborted && out.alarms_raised > 0;
        for (const auto& u : out.users) caught = caught && u.participated && !u.verified;
        detected += caught ? 1 : 0;
      }
      v.Require(detected == kTrials, std::string(on_cs ? "cs:" : "vs:") +
                                         std::string(DeviationKindName(kind)));
      v.detail << " " << (on_cs ? "cs:" : "vs:") << DeviationKindName(kind) << "=" << detected
               << "/" << kTrials;
    }
  }
  return v;
}

// 3. Forgery pass rate at a small tag modulus.
Verdict ForgeryBound() {
  Verdict v;
  const auto start = Clock::now();
  CalibrationResult c = ForgeryCalibration(11, 100000, 17);
  const double secs = SecondsSince(start);
  v.Require(c.trials >= 100000, "trials");
  v.Require(c.tamper_within_band(), "tamper rate outside band");
  v.Require(c.guess_within_band(), "guess rate outside band");
  v.Require(c.below_bound(), "rate above bound plus band");
  v.Require(secs <= 60.0, "runtime above 1 minute");
  v.detail << " R_b=11 trials=" << c.trials << " tamper_rate=" << c.tamper_rate
           << " guess_rate=" << c.guess_rate << " target=" << 1.0 / 11 << " band=" << c.band
           << " secs=" << secs;
  return v;
}

// 4. Upload payload at d = 20000.
Verdict TrafficReproduction() {
  Verdict v;
  const size_t d = 20000;
  InMemoryNetwork net;
  Session s(MakeProtocolParams(d, 4), net, 4);
  s.Setup(3);
  RoundOutcome out = s.RunRound(1, Submissions(s, 1, 4));
  v.Require(out.all_verified(), "round did not verify");
  for (UserId id : s.user_ids()) {
    const uint64_t model = net.ledger().LinkInRound(Endpoint::User(id), Endpoint::Cs(), 1).payload_bytes;
    const uint64_t tag = net.ledger().LinkInRound(Endpoint::User(id), Endpoint::Vs(), 1).payload_bytes;
    v.Require(model == 160000, "model share payload");
    v.Require(tag == 8, "tag share payload");
    v.Require(model + tag == 160008, "upload total");
  }
  RunConfig c;
  c.users = 3;
  c.dim = d;
  MetricsReport r = RunSimulation(c);
  v.Require(r.rounds.front().user_upload_payload_bytes == 160008, "report upload bytes");
  v.detail << " model_share=160000B (" << 160000.0 / 1024 << " KB) tag_share=8B upload="
           << r.rounds.front().user_upload_payload_bytes << "B";
  return v;
}

// 5. Scaling shapes and lenient ceilings.
Verdict ScalingShapes() {
  Verdict v;
  auto bench = [](uint32_t users, size_t dim, int reps) {
    BenchConfig c;
    c.users = users;
    c.dim = dim;
    c.reps = reps;
    return Bench(c);
  };
  std::vector<double> share_d, eval_d;
  for (size_t d : {20000, 40000, 80000}) {
    // 100 users keep the tag phase well above timer resolution.
    BenchResult b = bench(100, d, 30);
    share_d.push_back(b.share.median_ms);
    eval_d.push_back(b.tag_eval.median_ms);
  }
  const double r1 = share_d[1] / share_d[0], r2 = share_d[2] / share_d[1];
  v.Require(r1 >= 1.5 && r1 <= 2.5 && r2 >= 1.5 && r2 <= 2.5, "share not linear in d");
  const double eval_spread = *std::max_element(eval_d.begin(), eval_d.end()) /
                             *std::min_element(eval_d.begin(), eval_d.end());
  v.Require(eval_spread <= 1.5, "tag evaluation varies with d");

  std::vector<double> share_n;
  BenchResult at20k;
  for (uint32_t n : {10u, 100u, 1000u}) {
    BenchResult b = bench(n, 20000, 10);
    share_n.push_back(b.share.median_ms);
    if (n == 10) at20k = b;
  }
  const double n_spread = *std::max_element(share_n.begin(), share_n.end()) /
                          *std::min_element(share_n.begin(), share_n.end());
  v.Require(n_spread <= 1.5, "share varies with n");
  const double user_ms = at20k.share.median_ms + at20k.proof.median_ms;
  v.Require(user_ms <= 300.0, "share + proof above 300 ms");
  v.Require(at20k.verify.median_ms <= 200.0, "verify above 200 ms");
  v.detail << " share_ratio_d=" << r1 << "," << r2 << " eval_spread_d=" << eval_spread
           << " share_spread_n=" << n_spread << " share+proof_ms=" << user_ms
           << " verify_ms=" << at20k.verify.median_ms;
  return v;
}

// 6. Shuffled delivery yields identical publications.
Verdict OrderingInvariance() {
  Verdict v;
  auto run = [](std::optional<uint64_t> shuffle) {
    auto net = shuffle ? std::make_unique<InMemoryNetwork>(*shuffle)
                       : std::make_unique<InMemoryNetwork>();
    Session s(MakeProtocolParams(50, 16), *net, 66);
    s.Setup(8);
    std::vector<RoundOutcome> outs;
    for (uint64_t r = 1; r <= 3; ++r) {
      auto subs = Submissions(s, r, 66);
      // Fixed dropout pattern: user r misses the VS, user r + 4 misses both.
      subs[r - 1].reach_vs = false;
      subs[r + 3].reach_cs = subs[r + 3].reach_vs = false;
      outs.push_back(s.RunRound(r, subs));
    }
    return outs;
  };
  const auto base = run(std::nullopt);
  for (const auto& o : base) v.Require(o.all_verified(), "baseline round failed");
  size_t identical = 0;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const auto got = run(seed);
    bool same = true;
    for (size_t r = 0; r < base.size(); ++r) {
      same = same && got[r].all_verified() && got[r].published_model && got[r].published_tag &&
             got[r].published_model->w == base[r].published_model->w &&
             got[r].published_model->m == base[r].published_model->m &&
             got[r].published_tag->b == base[r].published_tag->b &&
             got[r].context.participants == base[r].context.participants;
      for (size_t i = 0; same && i < base[r].users.size(); ++i) {
        same = got[r].users[i].model == base[r].users[i].model;
      }
    }
    identical += same ? 1 : 0;
  }
  v.Require(identical == 10, "shuffled run diverged");
  v.detail << " shuffles=10 identical=" << identical << " participants_per_round="
           << base[0].context.m;
  return v;
}

// 7. Late join and multi-round freshness.
Verdict JoinAndMultiRound() {
  Verdict v;
  InMemoryNetwork net;
  Session s(MakeProtocolParams(10, 16), net, 88);
  s.Setup(4);
  for (uint64_t r = 1; r <= 3; ++r) {
    v.Require(s.RunRound(r, Submissions(s, r, 88)).all_verified(), "pre-join round failed");
  }
  const UserId joined = s.Join();
  ReconstructResult check = s.VerifyLatest(joined);
  v.Require(check.verified, "joined user could not verify round 3");
  v.Require(check.model == s.user(1).current_model(), "joined user's view of round 3 differs");
  double worst = 0;
  for (uint64_t r = 4; r <= 5; ++r) {
    auto subs = Submissions(s, r, 88);
    RoundOutcome out = s.RunRound(r, subs);
    v.Require(out.all_verified(), "post-join round failed");
    v.Require(std::binary_search(out.context.participants.begin(),
                                 out.context.participants.end(), joined),
              "joined user not a participant");
    const auto oracle = OracleOver(subs, out.context.participants, s.params().codec);
    for (const auto& u : out.users) worst = std::max(worst, MaxAbsDiff(u.model, oracle));
  }
  v.Require(worst <= 0.5 / s.params().codec.delta(), "post-join oracle mismatch");

  ProtocolParams params = MakeProtocolParams(10, 4);
  DeterministicRandom rng(3);
  SetupResult direct = Setup(1, params, rng);
  const std::vector<double> x(10, 0.125);
  ShareMessages a = direct.users[0].Share(x, 7);
  ShareMessages b = direct.users[0].Share(x, 8);
  v.Require(a.to_cs.payload != b.to_cs.payload, "model shares repeat across rounds");
  v.Require(a.to_vs.payload != b.to_vs.payload, "tag shares repeat across rounds");
  v.detail << " joined_id=" << joined << " verified_round3=" << check.verified
           << " max_dev_rounds4_5=" << worst;
  return v;
}

// 8. Weighted aggregation.
Verdict WeightedAggregation() {
  Verdict v;
  InMemoryNetwork net;
  ProtocolParams params = MakeProtocolParams(4, 2, 60, 40, /*weighted=*/true);
  Session s(params, net, 99);
  s.Setup(2);
  const std::vector<double> x1 = {1.0, -2.0, 0.5, 0.0}, x2 = {3.0, 2.0, -0.5, 1.0};
  std::vector<UserSubmission> subs(2);
  subs[0].id = 1;
  subs[0].update = x1;
  subs[0].weight = 1.0;
  subs[1].id = 2;
  subs[1].update = x2;
  subs[1].weight = 3.0;
  RoundOutcome out = s.RunRound(1, subs);
  v.Require(out.all_verified(), "weighted round failed");
  const auto oracle = PlaintextOracle({x1, x2}, params.codec, {1.0, 3.0});
  const double tol = 0.5 / params.codec.delta();
  double worst = 0;
  for (const auto& u : out.users) {
    v.Require(u.weight_sum.has_value() && *u.weight_sum == 4.0, "weight sum not exactly 4");
    worst = std::max(worst, MaxAbsDiff(u.model, oracle));
    for (size_t j = 0; j < x1.size(); ++j) {
      worst = std::max(worst, std::abs(u.model[j] - (x1[j] + 3.0 * x2[j]) / 4.0));
    }
  }
  v.Require(worst <= tol, "weighted mean off by more than 0.5/delta");
  v.detail << " weight_sum=" << (out.users.front().weight_sum ? *out.users.front().weight_sum : -1)
           << " max_dev=" << worst;
  return v;
}

// 9. PRF invariants.
Verdict PrfInvariants() {
  Verdict v;
  DeterministicRandom rng(12);
  const KeyMaterial key = KeyMaterial::Generate(rng);
  const FieldModulus big = FindPrimeAbove(uint64_t{1} << 60);
  v.Require(Expand(key, 3, 1000, big) == Expand(key, 3, 1000, big), "not deterministic");
  v.Require(Expand(key, 3, 1000, big) != Expand(key, 4, 1000, big), "round ignored");
  const FieldVector long_run = Expand(key, 5, 5000, big);
  const FieldVector short_run = Expand(key, 5, 1234, big);
  v.Require(std::equal(short_run.values().begin(), short_run.values().end(),
                       long_run.values().begin()),
            "prefix unstable");
  bool in_range = true;
  for (uint64_t bound : std::vector<uint64_t>{1, 2, 3, 17, 1000, uint64_t{1} << 32, big.value()}) {
    for (uint64_t x : ExpandBelow(key, 9, 20000, bound)) in_range = in_range && x < bound;
  }
  v.Require(in_range, "value out of range");
  const FieldVector draws = Expand(key, 42, 100000, FieldModulus::Create(17));
  std::vector<double> counts(17, 0);
  for (uint64_t x : draws.values()) counts[x] += 1;
  const double expected = 100000.0 / 17;
  double chi2 = 0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  v.Require(chi2 < 39.252, "chi-squared above the 0.001 critical value");
  v.detail << " chi2=" << chi2 << " critical=39.252";
  return v;
}

}  // namespace
}  // namespace vsagg

int main() {
  using vsagg::Verdict;
  struct Check {
    const char* name;
    std::function<Verdict()> run;
  };
  const Check checks[] = {
      {"AC1 oracle equivalence", vsagg::OracleEquivalence},
      {"AC2 tamper detection", vsagg::TamperDetection},
      {"AC3 forgery bound calibration", vsagg::ForgeryBound},
      {"AC4 traffic reproduction", vsagg::TrafficReproduction},
      {"AC5 scaling shapes", vsagg::ScalingShapes},
      {"AC6 ordering invariance", vsagg::OrderingInvariance},
      {"AC7 join and multi-round", vsagg::JoinAndMultiRound},
      {"AC8 weighted aggregation", vsagg::WeightedAggregation},
      {"AC9 prf invariants", vsagg::PrfInvariants},
  };
  int failures = 0;
  for (const Check& c : checks) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " exception: " << e.what();
    }
    std::printf("[%s] %s:%s\n", v.pass ? "PASS" : "FAIL", c.name, v.detail.str().c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
