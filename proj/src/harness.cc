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

#include "vsagg/harness.h"

#include <openssl/sha.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "vsagg/errors.h"
#include "vsagg/params.h"
#include "vsagg/random.h"
#include "vsagg/sharing.h"
#include "vsagg/tags.h"

namespace vsagg {
namespace {

using Clock = std::chrono::steady_clock;
using Json = nlohmann::ordered_json;

double MsSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<std::string> SplitOn(std::string_view text, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

uint64_t ParseU64(const std::string& s, std::string_view what) {
  try {
    size_t used = 0;
    uint64_t v = std::stoull(s, &used);
    if (used != s.size() || s.empty() || s[0] == '-') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad " + std::string(what) + ": '" + s + "'");
  }
}

std::string HexDigest(std::span<const uint8_t> data) {
  uint8_t md[SHA256_DIGEST_LENGTH];
  SHA256(data.data(), data.size(), md);
  std::ostringstream os;
  for (uint8_t b : md) os << std::hex << std::setw(2) << std::setfill('0') << int(b);
  return os.str();
}

std::string ModelDigest(const FieldVector& w) {
  ByteWriter out(w.size() * 8);
  for (uint64_t v : w.values()) out.PutU64(v);
  return HexDigest(out.bytes());
}

std::string_view RoleName(Role r) {
  switch (r) {
    case Role::kComputationServer: return "cs";
    case Role::kVerificationServer: return "vs";
    case Role::kUser: return "user";
  }
  return "?";
}

Json TimingsJson(const RoundTimings& t) {
  return Json{{"user_share", t.user_share_ms},
              {"cs_aggregate", t.cs_aggregate_ms},
              {"vs_aggregate", t.vs_aggregate_ms},
              {"user_reconstruct", t.user_reconstruct_ms}};
}

Json StatsJson(const TimingStats& s) {
  return Json{{"median_ms", s.median_ms},
              {"mean_ms", s.mean_ms},
              {"min_ms", s.min_ms},
              {"max_ms", s.max_ms}};
}

std::unique_ptr<Network> MakeNetwork(const RunConfig& config) {
  if (config.mode == TransportMode::kSocket) {
    return std::make_unique<SocketNetwork>(config.socket);
  }
  if (config.shuffle_seed) return std::make_unique<InMemoryNetwork>(*config.shuffle_seed);
  return std::make_unique<InMemoryNetwork>();
}

bool IsSharePayload(const TrafficKey& k) {
  return k.kind == MessageKind::kModelShare || k.kind == MessageKind::kTagShare;
}

bool IsServerLink(const TrafficKey& k) {
  return k.from.role != Role::kUser && k.to.role != Role::kUser;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

AdversarySpec AdversarySpec::Parse(std::string_view text) {
  std::vector<std::string> parts = SplitOn(text, ':');
  if (parts.size() < 3 || parts.size() > 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "adversary must be target:action:round[:magnitude], got '" +
                    std::string(text) + "'");
  }
  AdversarySpec spec;
  if (parts[0] == "cs") {
    spec.target = Role::kComputationServer;
  } else if (parts[0] == "vs") {
    spec.target = Role::kVerificationServer;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "adversary target must be cs or vs");
  }
  static constexpr Deviation::Kind kKinds[] = {
      Deviation::Kind::kTamperModelShare, Deviation::Kind::kTamperAggregate,
      Deviation::Kind::kDropParticipant, Deviation::Kind::kLieAboutM,
      Deviation::Kind::kForgeTag};
  for (Deviation::Kind k : kKinds) {
    if (parts[1] == DeviationKindName(k)) spec.action = k;
  }
  if (spec.action == Deviation::Kind::kNone) {
    throw Error(ErrorCode::kInvalidArgument, "unknown adversary action '" + parts[1] + "'");
  }
  spec.round = ParseU64(parts[2], "adversary round");
  if (parts.size() == 4) spec.magnitude = ParseU64(parts[3], "adversary magnitude");
  return spec;
}

std::string AdversarySpec::ToString() const {
  std::string s = std::string(RoleName(target)) + ":" + std::string(DeviationKindName(action)) +
                  ":" + std::to_string(round);
  if (magnitude) s += ":" + std::to_string(*magnitude);
  return s;
}

TransportMode ParseTransportMode(std::string_view text) {
  if (text == "memory") return TransportMode::kMemory;
  if (text == "socket") return TransportMode::kSocket;
  throw Error(ErrorCode::kInvalidArgument,
              "mode must be memory or socket, got '" + std::string(text) + "'");
}

void RunConfig::Validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (users == 0) bad("users must be >= 1");
  if (dim == 0) bad("dim must be >= 1");
  if (rounds == 0) bad("rounds must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) bad("dropout must be in [0, 1)");
  if (prime_bits < 2 || prime_bits > 60) bad("prime-bits must be in [2, 60]");
  if (delta_exp < 0 || delta_exp > 60) bad("delta-exp must be in [0, 60]");
  if (recv_timeout_ms <= 0) bad("receive timeout must be positive");
  if (!(update_bound >= 0.0) || update_bound > x_max || -update_bound < x_min) {
    bad("update bound must lie within the codec bounds");
  }
  if (!weights.empty()) {
    if (weights.size() < users) {
      bad("weights file has " + std::to_string(weights.size()) + " entries for " +
          std::to_string(users) + " users");
    }
    for (double w : weights) {
      if (!(w > 0.0) || !std::isfinite(w)) bad("weights must be positive and finite");
      if (w > x_max || w * update_bound > x_max || -w * update_bound < x_min) {
        bad("weighted updates exceed the codec bounds");
      }
    }
  }
  if (adversary && adversary->action == Deviation::Kind::kNone) bad("adversary has no action");
  // Throws kCapacityViolation.
  MakeProtocolParams(dim, users, prime_bits, delta_exp, !weights.empty(), x_min, x_max);
}

// ---------------------------------------------------------------------------
// Oracle and synthetic data

std::vector<double> PlaintextOracle(const std::vector<std::vector<double>>& updates,
                                    const CodecParams& codec,
                                    const std::vector<double>& weights) {
  if (updates.empty()) throw Error(ErrorCode::kEmptyInput, "oracle needs at least one update");
  const size_t d = updates.front().size();
  const FieldModulus R = codec.modulus();
  const bool weighted = !weights.empty();
  if (weighted && weights.size() != updates.size()) {
    throw Error(ErrorCode::kLengthMismatch, "one weight per update required");
  }
  std::vector<uint64_t> acc(d + (weighted ? 1 : 0), 0);
  for (size_t i = 0; i < updates.size(); ++i) {
    if (updates[i].size() != d) throw Error(ErrorCode::kLengthMismatch, "ragged updates");
    std::vector<double> row = updates[i];
    if (weighted) {
      for (auto& v : row) v *= weights[i];
      row.push_back(weights[i]);
    }
    AccumulateInto(acc, Encode(row, codec).values(), R);
  }
  FieldVector sum = FieldVector::FromCanonical(std::move(acc));
  if (!weighted) return Decode(sum, codec, updates.size());
  std::vector<double> out = Decode(sum, codec, 1);
  const double weight_sum = out.back();
  out.pop_back();
  for (auto& v : out) v /= weight_sum;
  return out;
}

std::vector<double> SyntheticUpdate(uint64_t seed, uint64_t round, UserId user, size_t dim,
                                    double bound) {
  DeterministicRandom rng =
      DeterministicRandom(seed).Fork("update-" + std::to_string(round), user);
  std::vector<double> out(dim);
  for (auto& v : out) v = rng.UniformReal(-bound, bound);
  return out;
}

// ---------------------------------------------------------------------------
// Simulation

size_t MetricsReport::honest_failures() const {
  size_t n = 0;
  for (const auto& r : rounds) {
    if (!r.adversarial && !r.aborted && r.failed_users > 0) ++n;
  }
  return n;
}

size_t MetricsReport::undetected_attacks() const {
  size_t n = 0;
  for (const auto& r : rounds) {
    if (r.adversarial && !r.aborted && !r.detected) ++n;
  }
  return n;
}

size_t MetricsReport::aborted_rounds() const {
  return static_cast<size_t>(
      std::count_if(rounds.begin(), rounds.end(), [](const RoundReport& r) { return r.aborted; }));
}

int MetricsReport::exit_code() const {
  return honest_failures() == 0 && undetected_attacks() == 0 ? 0 : 1;
}

std::string MetricsReport::ToJson(bool with_timings) const {
  Json cfg{{"users", config.users},
           {"dim", config.dim},
           {"rounds", config.rounds},
           {"dropout", config.dropout},
           {"seed", config.seed},
           {"prime_bits", config.prime_bits},
           {"delta_exp", config.delta_exp},
           {"mode", config.mode == TransportMode::kSocket ? "socket" : "memory"},
           {"adversary", config.adversary ? config.adversary->ToString() : ""},
           {"weighted", !config.weights.empty()}};
  Json rounds_json = Json::array();
  for (const auto& r : rounds) {
    Json j{{"round", r.round},
           {"aborted", r.aborted},
           {"abort_reason", r.abort_reason},
           {"participants", r.participants},
           {"m", r.m},
           {"verified_users", r.verified_users},
           {"failed_users", r.failed_users},
           {"alarms", r.alarms},
           {"adversarial", r.adversarial},
           {"detected", r.detected},
           {"oracle_max_deviation", r.oracle_max_deviation},
           {"user_upload_payload_bytes", r.user_upload_payload_bytes},
           {"server_exchange_payload_bytes", r.server_exchange_payload_bytes},
           {"published_model_sha256", r.published_model_sha256},
           {"published_tag", r.published_tag}};
    if (with_timings) j["timings_ms"] = TimingsJson(r.timings);
    rounds_json.push_back(std::move(j));
  }
  Json links = Json::array();
  std::map<std::pair<std::string, std::string>, TrafficCounts> by_link;
  TrafficCounts total;
  for (const auto& [key, counts] : traffic) {
    auto name = [](const Endpoint& e) {
      return e.role == Role::kUser ? std::string("user") : std::string(RoleName(e.role));
    };
    by_link[{name(key.from), name(key.to)}] += counts;
    total += counts;
  }
  for (const auto& [link, c] : by_link) {
    links.push_back(Json{{"from", link.first},
                         {"to", link.second},
                         {"messages", c.messages},
                         {"header_bytes", c.header_bytes},
                         {"payload_bytes", c.payload_bytes}});
  }
  Json out{{"config", cfg},
           {"params", {{"R_w", R_w}, {"R_b", R_b}}},
           {"rounds", rounds_json},
           {"traffic",
            {{"messages", total.messages},
             {"header_bytes", total.header_bytes},
             {"payload_bytes", total.payload_bytes},
             {"links", links}}},
           {"transcript_sha256", transcript_sha256},
           {"summary",
            {{"rounds", rounds.size()},
             {"aborted_rounds", aborted_rounds()},
             {"honest_failures", honest_failures()},
             {"undetected_attacks", undetected_attacks()},
             {"exit_code", exit_code()}}}};
  if (with_timings) out["setup_ms"] = setup_ms;
  return out.dump(2);
}

MetricsReport RunSimulation(const RunConfig& config) {
  config.Validate();
  const bool weighted = !config.weights.empty();
  ProtocolParams params = MakeProtocolParams(config.dim, config.users, config.prime_bits,
                                             config.delta_exp, weighted, config.x_min,
                                             config.x_max);
  std::unique_ptr<Network> net = MakeNetwork(config);
  SessionOptions options;
  options.recv_timeout = std::chrono::milliseconds(config.recv_timeout_ms);
  Session session(params, *net, config.seed, options);

  MetricsReport report;
  report.config = config;
  report.R_w = params.R_w.value();
  report.R_b = params.R_b.value();

  auto setup_start = Clock::now();
  session.Setup(config.users);
  report.setup_ms = MsSince(setup_start);

  const DeterministicRandom master(config.seed);
  DeterministicRandom adversary_rng = master.Fork("adversary");

  for (uint64_t r = 1; r <= config.rounds; ++r) {
    DeterministicRandom dropout_rng = master.Fork("dropout", r);
    std::vector<UserSubmission> subs;
    std::map<UserId, size_t> index_of;
    for (UserId id : session.user_ids()) {
      UserSubmission s;
      s.id = id;
      s.update = SyntheticUpdate(config.seed, r, id, config.dim, config.update_bound);
      if (weighted) s.weight = config.weights[id - 1];
      if (dropout_rng.Bernoulli(config.dropout)) {
        // A dropped user misses CS, VS, or both.
        switch (dropout_rng.Uniform(3)) {
          case 0: s.reach_cs = false; break;
          case 1: s.reach_vs = false; break;
          default: s.reach_cs = s.reach_vs = false; break;
        }
      }
      index_of[id] = subs.size();
      subs.push_back(std::move(s));
    }

    const bool adversarial = config.adversary && config.adversary->round == r;
    if (adversarial) {
      const AdversarySpec& spec = *config.adversary;
      Deviation dev;
      dev.kind = spec.action;
      dev.round = r;
      dev.victim_index = adversary_rng.Uniform(config.users);
      dev.coordinate = adversary_rng.Uniform(params.dimension);
      if (spec.magnitude) {
        dev.magnitude = *spec.magnitude;
      } else if (spec.action == Deviation::Kind::kForgeTag) {
        dev.magnitude = adversary_rng.Uniform(params.R_b.value());
      } else {
        dev.magnitude = 1 + adversary_rng.Uniform(params.R_w.value() - 1);
      }
      if (spec.target == Role::kComputationServer) {
        session.cs().SetDeviation(dev);
      } else {
        session.vs().SetDeviation(dev);
      }
    }

    RoundOutcome outcome = session.RunRound(r, subs);
    session.cs().ClearDeviation();
    session.vs().ClearDeviation();

    RoundReport rr;
    rr.round = r;
    rr.aborted = outcome.aborted;
    rr.abort_reason = outcome.abort_reason;
    rr.participants = outcome.context.participants;
    rr.m = outcome.context.m;
    rr.alarms = outcome.alarms_raised;
    rr.adversarial = adversarial;
    rr.timings = outcome.timings;
    for (const auto& u : outcome.users) {
      if (!u.participated) continue;
      (u.verified ? rr.verified_users : rr.failed_users)++;
    }
    rr.detected = adversarial && !outcome.aborted && (rr.failed_users > 0 || rr.alarms > 0);
    if (outcome.published_model) {
      rr.published_model_sha256 = ModelDigest(outcome.published_model->w);
    }
    if (outcome.published_tag) rr.published_tag = outcome.published_tag->b.value.residue;

    if (!outcome.aborted) {
      std::vector<std::vector<double>> inputs;
      std::vector<double> weights;
      for (UserId id : rr.participants) {
        inputs.push_back(subs[index_of.at(id)].update);
        if (weighted) weights.push_back(subs[index_of.at(id)].weight);
      }
      std::vector<double> expected = PlaintextOracle(inputs, params.codec, weights);
      for (const auto& u : outcome.users) {
        if (!u.participated || !u.verified) continue;
        for (size_t j = 0; j < expected.size(); ++j) {
          rr.oracle_max_deviation =
              std::max(rr.oracle_max_deviation, std::abs(u.model[j] - expected[j]));
        }
      }
      const Endpoint first = Endpoint::User(rr.participants.front());
      rr.user_upload_payload_bytes = net->ledger()
                                         .Total([&](const TrafficKey& k) {
                                           return k.round == r && k.from == first &&
                                                  IsSharePayload(k);
                                         })
                                         .payload_bytes;
    }
    rr.server_exchange_payload_bytes =
        net->ledger()
            .Total([&](const TrafficKey& k) { return k.round == r && IsServerLink(k); })
            .payload_bytes;
    report.rounds.push_back(std::move(rr));
  }
  report.traffic = net->ledger().Snapshot();
  report.transcript_sha256 = net->ledger().TranscriptDigestHex();
  return report;
}

// ---------------------------------------------------------------------------
// Forgery calibration

bool CalibrationResult::tamper_within_band() const {
  return std::abs(tamper_rate - 1.0 / static_cast<double>(R_b)) <= band;
}

bool CalibrationResult::guess_within_band() const {
  return std::abs(guess_rate - 1.0 / static_cast<double>(R_b)) <= band;
}

bool CalibrationResult::below_bound() const {
  return tamper_rate <= bound + band && guess_rate <= bound + band;
}

std::string CalibrationResult::ToJson() const {
  Json j{{"R_b", R_b},
         {"R_w", R_w},
         {"trials", trials},
         {"tamper_passes", tamper_passes},
         {"tamper_rate", tamper_rate},
         {"guess_passes", guess_passes},
         {"guess_rate", guess_rate},
         {"bound", bound},
         {"band", band},
         {"tamper_within_band", tamper_within_band()},
         {"guess_within_band", guess_within_band()},
         {"below_bound", below_bound()}};
  return j.dump(2);
}

CalibrationResult ForgeryCalibration(uint64_t tag_modulus, uint64_t trials, uint64_t seed,
                                     int w_prime_bits, size_t dim) {
  if (trials == 0) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "dim must be >= 1");
  const FieldModulus R_b = FieldModulus::Create(tag_modulus);
  const FieldModulus R_w = FindPrimeAbove(uint64_t{1} << w_prime_bits);
  DeterministicRandom rng = DeterministicRandom(seed).Fork("calibration");
  const KeyMaterial verification_key = KeyMaterial::Generate(rng);

  auto random_vector = [&] {
    std::vector<uint64_t> v(dim);
    for (auto& x : v) x = rng.Uniform(R_w.value());
    return FieldVector::FromCanonical(std::move(v));
  };
  auto tamper = [&](const FieldVector& w) {
    std::vector<uint64_t> v(w.values().begin(), w.values().end());
    size_t j = rng.Uniform(dim);
    uint64_t offset = 1 + rng.Uniform(R_w.value() - 1);
    v[j] = Add(FieldElement{v[j]}, FieldElement{offset}, R_w).residue;
    return FieldVector::FromCanonical(std::move(v));
  };

  CalibrationResult out;
  out.R_b = R_b.value();
  out.R_w = R_w.value();
  out.trials = trials;
  const FieldVector fixed_forgery = tamper(random_vector());
  for (uint64_t t = 0; t < trials; ++t) {
    VerificationKeyVector k_v = DeriveTagKey(verification_key, t + 1, dim, R_b);
    FieldVector w = random_vector();
    TagScalar b = GenTag(w, k_v, R_w, R_b);
    if (Verify(tamper(w), b, k_v, R_w, R_b)) ++out.tamper_passes;
    TagScalar guess{FieldElement{rng.Uniform(R_b.value())}};
    if (Verify(fixed_forgery, guess, k_v, R_w, R_b)) ++out.guess_passes;
  }
  const double n = static_cast<double>(trials);
  out.tamper_rate = static_cast<double>(out.tamper_passes) / n;
  out.guess_rate = static_cast<double>(out.guess_passes) / n;
  out.bound = std::max(1.0 / static_cast<double>(R_b.value()),
                       1.0 / static_cast<double>(R_w.value()));
  out.band = 3.0 * std::sqrt(out.bound * (1.0 - out.bound) / n);
  return out;
}

// ---------------------------------------------------------------------------
// Bench

TimingStats TimingStats::From(std::vector<double> samples) {
  TimingStats s;
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  const size_t n = samples.size();
  s.median_ms = n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  s.mean_ms = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  s.min_ms = samples.front();
  s.max_ms = samples.back();
  return s;
}

std::string BenchResult::ToJson() const {
  Json j{{"users", config.users},
         {"dim", config.dim},
         {"reps", config.reps},
         {"share", StatsJson(share)},
         {"proof", StatsJson(proof)},
         {"cs_aggregate", StatsJson(cs_aggregate)},
         {"vs_aggregate", StatsJson(vs_aggregate)},
         {"tag_eval", StatsJson(tag_eval)},
         {"verify", StatsJson(verify)},
         {"user_upload_payload_bytes", user_upload_payload_bytes},
         {"user_upload_frame_bytes", user_upload_frame_bytes},
         {"server_exchange_payload_bytes", server_exchange_payload_bytes}};
  return j.dump(2);
}

BenchResult Bench(const BenchConfig& config) {
  if (config.reps < 1) throw Error(ErrorCode::kInvalidArgument, "reps must be >= 1");
  if (config.users == 0 || config.dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "users and dim must be >= 1");
  }
  ProtocolParams params =
      MakeProtocolParams(config.dim, config.users, config.prime_bits, config.delta_exp);
  DeterministicRandom rng(config.seed);
  SetupResult setup = Setup(config.users, params, rng);
  ComputationServer& cs = *setup.cs;
  VerificationServer& vs = *setup.vs;
  InMemoryNetwork net;

  std::vector<double> share_ms, proof_ms, cs_ms, vs_ms, eval_ms, verify_ms;
  BenchResult out;
  out.config = config;
  for (int rep = 0; rep < config.reps; ++rep) {
    const uint64_t round = static_cast<uint64_t>(rep) + 1;
    const auto update = SyntheticUpdate(config.seed, round, 1, config.dim, 1.0);

    // User-side phases, timed on user 1.
    User& probe = setup.users.front();
    auto t0 = Clock::now();
    FieldVector encoded = Encode(update, params.codec);
    ShareVector masked = ShareWithPrf(encoded, probe.model_key(), round, params.R_w);
    share_ms.push_back(MsSince(t0));
    t0 = Clock::now();
    VerificationKeyVector k_v =
        DeriveTagKey(probe.verification_key(), round, params.dimension, params.R_b);
    TagScalar tag = GenTag(encoded, k_v, params.R_w, params.R_b);
    TagScalar tag_share{Sub(tag.value, Expand(probe.tag_key(), round, 1, params.R_b)[0],
                            params.R_b)};
    proof_ms.push_back(MsSince(t0));
    (void)masked;
    (void)tag_share;

    for (User& u : setup.users) {
      ShareMessages msgs = u.Share(
          u.id() == 1 ? update : SyntheticUpdate(config.seed, round, u.id(), config.dim, 1.0),
          round);
      net.Send(Endpoint::User(u.id()), Endpoint::Cs(), msgs.to_cs);
      net.Send(Endpoint::User(u.id()), Endpoint::Vs(), msgs.to_vs);
      cs.AcceptModelShare(net.Recv(Endpoint::Cs(), std::chrono::milliseconds(1000)));
      vs.AcceptTagShare(net.Recv(Endpoint::Vs(), std::chrono::milliseconds(1000)));
    }
    const auto ids = cs.OnlineIds(round);
    RoundContext ctx = ServersIntersectOnline(round, ids, vs.OnlineIds(round));

    t0 = Clock::now();
    FieldVector w_t = vs.ModelAggregate(ctx);
    vs_ms.push_back(MsSince(t0));
    t0 = Clock::now();
    TagScalar b_t = cs.TagAggregate(ctx);
    double eval = MsSince(t0);
    net.Send(Endpoint::Vs(), Endpoint::Cs(), MakeReshareModel(round, w_t));
    net.Send(Endpoint::Cs(), Endpoint::Vs(), MakeReshareTag(round, b_t));
    (void)net.Recv(Endpoint::Cs(), std::chrono::milliseconds(1000));
    (void)net.Recv(Endpoint::Vs(), std::chrono::milliseconds(1000));
    t0 = Clock::now();
    PublishedModel pm = cs.FinalizeModel(ctx, w_t);
    cs_ms.push_back(MsSince(t0));
    t0 = Clock::now();
    PublishedTag pt = vs.FinalizeTag(ctx, b_t);
    eval_ms.push_back(eval + MsSince(t0));

    t0 = Clock::now();
    ReconstructResult rec = probe.Reconstruct(pm.w, pt.b, pm.m, pt.m, round);
    verify_ms.push_back(MsSince(t0));
    if (!rec.verified) throw Error(ErrorCode::kProtocolViolation, "bench round failed to verify");

    if (rep == 0) {
      const Endpoint u1 = Endpoint::User(1);
      TrafficCounts up = net.ledger().Total([&](const TrafficKey& k) {
        return k.round == round && k.from == u1 && IsSharePayload(k);
      });
      out.user_upload_payload_bytes = up.payload_bytes;
      out.user_upload_frame_bytes = up.total_bytes();
      out.server_exchange_payload_bytes =
          net.ledger()
              .Total([&](const TrafficKey& k) { return k.round == round && IsServerLink(k); })
              .payload_bytes;
    }
  }
  out.share = TimingStats::From(share_ms);
  out.proof = TimingStats::From(proof_ms);
  out.cs_aggregate = TimingStats::From(cs_ms);
  out.vs_aggregate = TimingStats::From(vs_ms);
  out.tag_eval = TimingStats::From(eval_ms);
  out.verify = TimingStats::From(verify_ms);
  return out;
}

// ---------------------------------------------------------------------------
// Input files

std::vector<double> ReadWeightsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open weights file " + path);
  std::vector<double> out;
  std::string line;
  for (size_t lineno = 1; std::getline(in, line); ++lineno) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      size_t used = 0;
      double w = std::stod(line.substr(first), &used);
      if (line.find_first_not_of(" \t\r", first + used) != std::string::npos) {
        throw std::invalid_argument(line);
      }
      out.push_back(w);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument,
                  path + ":" + std::to_string(lineno) + ": not a decimal weight");
    }
  }
  return out;
}

std::vector<std::vector<double>> ReadUpdatesFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open updates file " + path);
  std::vector<std::vector<double>> out;
  std::string line;
  for (size_t lineno = 1; std::getline(in, line); ++lineno) {
    std::replace(line.begin(), line.end(), ',', ' ');
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<double> row;
    std::string tok;
    while (fields >> tok) {
      try {
        size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(ErrorCode::kInvalidArgument,
                    path + ":" + std::to_string(lineno) + ": bad value '" + tok + "'");
      }
    }
    if (!out.empty() && row.size() != out.front().size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  path + ":" + std::to_string(lineno) + ": row length differs");
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace vsagg
