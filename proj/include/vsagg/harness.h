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

#ifndef VSAGG_HARNESS_H_
#define VSAGG_HARNESS_H_

// Simulation driver, plaintext oracle, forgery calibration and benchmarks.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vsagg/codec.h"
#include "vsagg/roles.h"
#include "vsagg/session.h"
#include "vsagg/socket_transport.h"

namespace vsagg {

struct AdversarySpec {
  Role target = Role::kComputationServer;
  Deviation::Kind action = Deviation::Kind::kNone;
  uint64_t round = 1;
  // Field offset, or the forged tag value. Drawn from the run seed when unset.
  std::optional<uint64_t> magnitude;

  // "cs|vs:action:round[:magnitude]", e.g. "cs:tamper_aggregate:1".
  static AdversarySpec Parse(std::string_view text);
  std::string ToString() const;
};

enum class TransportMode { kMemory, kSocket };

// "memory" or "socket". Throws kInvalidArgument otherwise.
TransportMode ParseTransportMode(std::string_view text);

struct RunConfig {
  uint32_t users = 10;
  size_t dim = 100;
  uint64_t rounds = 1;
  double dropout = 0.0;
  uint64_t seed = 1;
  int prime_bits = 60;
  int delta_exp = 40;
  TransportMode mode = TransportMode::kMemory;
  std::optional<AdversarySpec> adversary;
  // One weight per user id in ascending order; empty for plain averaging.
  std::vector<double> weights;
  // Synthetic updates are uniform in [-update_bound, update_bound].
  double update_bound = 1.0;
  // Codec bounds.
  double x_min = -10.0;
  double x_max = 10.0;
  // In-memory delivery order; unset means FIFO.
  std::optional<uint64_t> shuffle_seed;
  int recv_timeout_ms = 5000;
  SocketConfig socket;

  // Throws kInvalidArgument or kCapacityViolation.
  void Validate() const;
};

struct RoundReport {
  uint64_t round = 0;
  bool aborted = false;
  std::string abort_reason;
  std::vector<UserId> participants;
  uint64_t m = 0;
  size_t verified_users = 0;
  size_t failed_users = 0;
  size_t alarms = 0;
  bool adversarial = false;
  bool detected = false;
  double oracle_max_deviation = 0.0;
  uint64_t user_upload_payload_bytes = 0;
  uint64_t server_exchange_payload_bytes = 0;
  std::string published_model_sha256;
  uint64_t published_tag = 0;
  RoundTimings timings;
};

struct MetricsReport {
  RunConfig config;
  uint64_t R_w = 0;
  uint64_t R_b = 0;
  std::vector<RoundReport> rounds;
  std::map<TrafficKey, TrafficCounts> traffic;
  std::string transcript_sha256;
  double setup_ms = 0;

  size_t honest_failures() const;
  size_t undetected_attacks() const;
  size_t aborted_rounds() const;
  // 0 iff every honest round verified and every injected deviation was caught.
  int exit_code() const;
  // Structured report. Wall-clock fields are omitted when `with_timings` is
  // false, which makes two runs with the same seed byte-identical.
  std::string ToJson(bool with_timings = true) const;
};

MetricsReport RunSimulation(const RunConfig& config);

// Mean over the given updates through the same fixed-point pipeline, with no
// sharing. With weights, the weighted mean. Throws kEmptyInput.
std::vector<double> PlaintextOracle(const std::vector<std::vector<double>>& updates,
                                    const CodecParams& codec,
                                    const std::vector<double>& weights = {});

// Synthetic update of `user` in `round`, reproducible from the seed.
std::vector<double> SyntheticUpdate(uint64_t seed, uint64_t round, UserId user, size_t dim,
                                    double bound);

struct CalibrationResult {
  uint64_t R_b = 0;
  uint64_t R_w = 0;
  uint64_t trials = 0;
  uint64_t tamper_passes = 0;  // perturbed aggregate, honest tag
  uint64_t guess_passes = 0;   // fixed tampered aggregate, random tag guess
  double tamper_rate = 0;
  double guess_rate = 0;
  double bound = 0;  // max(1/R_b, 1/R_w)
  double band = 0;   // three Monte Carlo standard errors at p = bound

  bool tamper_within_band() const;
  bool guess_within_band() const;
  bool below_bound() const;
  std::string ToJson() const;
};

// `tag_modulus` must be prime. The aggregate lives in Z_{R_w} with R_w the
// smallest prime above 2^w_prime_bits.
CalibrationResult ForgeryCalibration(uint64_t tag_modulus, uint64_t trials, uint64_t seed,
                                     int w_prime_bits = 60, size_t dim = 8);

struct TimingStats {
  double median_ms = 0;
  double mean_ms = 0;
  double min_ms = 0;
  double max_ms = 0;

  static TimingStats From(std::vector<double> samples_ms);
};

struct BenchConfig {
  uint32_t users = 10;
  size_t dim = 20000;
  int reps = 10;
  uint64_t seed = 1;
  int prime_bits = 60;
  int delta_exp = 40;
};

struct BenchResult {
  BenchConfig config;
  TimingStats share;         // encode and mask the model
  TimingStats proof;         // tag and tag-share generation
  TimingStats cs_aggregate;  // sum of model shares plus w_t
  TimingStats vs_aggregate;  // regenerate masks, compute w_t
  TimingStats tag_eval;      // b_t on CS and b'_2 on VS
  TimingStats verify;        // user reconstruct and tag check
  uint64_t user_upload_payload_bytes = 0;
  uint64_t user_upload_frame_bytes = 0;
  uint64_t server_exchange_payload_bytes = 0;

  std::string ToJson() const;
};

BenchResult Bench(const BenchConfig& config);

// One decimal per line; blank lines and '#' comments skipped.
std::vector<double> ReadWeightsFile(const std::string& path);
// One update per line, values separated by commas or whitespace.
std::vector<std::vector<double>> ReadUpdatesFile(const std::string& path);

}  // namespace vsagg

#endif  // VSAGG_HARNESS_H_
