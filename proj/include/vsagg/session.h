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

#ifndef VSAGG_SESSION_H_
#define VSAGG_SESSION_H_

// Round orchestration over a Network. Every protocol quantity travels as a
// framed message, so the traffic ledger sees exactly what each role sends.

#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vsagg/errors.h"
#include "vsagg/params.h"
#include "vsagg/random.h"
#include "vsagg/roles.h"
#include "vsagg/transport.h"

namespace vsagg {

struct SessionOptions {
  // Share deadline: a server stops collecting once every expected share has
  // arrived or a receive waits this long.
  std::chrono::milliseconds recv_timeout{5000};
};

struct UserSubmission {
  UserId id = 0;
  std::vector<double> update;
  double weight = 1.0;  // weighted mode only
  bool reach_cs = true;
  bool reach_vs = true;
};

struct UserRoundResult {
  UserId id = 0;
  bool participated = false;
  bool verified = false;
  std::vector<double> model;
  std::optional<double> weight_sum;
  std::optional<ErrorCode> error;
  std::string error_message;
};

struct RoundTimings {
  double user_share_ms = 0;        // mean over submitting users
  double cs_aggregate_ms = 0;
  double vs_aggregate_ms = 0;
  double user_reconstruct_ms = 0;  // mean over participants
};

struct RoundOutcome {
  uint64_t round = 0;
  bool aborted = false;
  std::optional<ErrorCode> abort_code;
  std::string abort_reason;
  RoundContext context;
  std::optional<PublishedModel> published_model;
  std::optional<PublishedTag> published_tag;
  std::vector<UserRoundResult> users;
  size_t alarms_raised = 0;
  RoundTimings timings;

  // True iff the round ran and every participant verified.
  bool all_verified() const;
};

class Session {
 public:
  Session(ProtocolParams params, Network& net, uint64_t seed, SessionOptions options = {});
  ~Session();

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  // Users 1..n. Servers exchange parameter digests, distribute their keys and
  // seeds, and collect the user-sampled keys.
  void Setup(uint32_t n);
  // Registers the next free id through the same message flow.
  UserId Join();

  // Re-sends the servers' latest publications to `id` and reconstructs them.
  // Used by a newly joined user to check the current aggregate.
  ReconstructResult VerifyLatest(UserId id);

  RoundOutcome RunRound(uint64_t round, const std::vector<UserSubmission>& submissions);

  const ProtocolParams& params() const { return params_; }
  Network& network() { return net_; }
  ComputationServer& cs() { return *cs_; }
  VerificationServer& vs() { return *vs_; }
  User& user(UserId id);
  std::vector<UserId> user_ids() const;

 private:
  Message RecvExpect(const Endpoint& at, MessageKind kind, uint64_t round);
  void DistributeSetup(User& user);
  void RaiseAlarm(UserId id, const Alarm& alarm);

  ProtocolParams params_;
  Network& net_;
  SessionOptions options_;
  DeterministicRandom master_;
  std::unique_ptr<ComputationServer> cs_;
  std::unique_ptr<VerificationServer> vs_;
  std::map<UserId, User> users_;
  UserId next_id_ = 1;
  std::map<Endpoint, std::deque<Message>> stash_;
};

}  // namespace vsagg

#endif  // VSAGG_SESSION_H_
