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

// vsagg: simulate, benchmark and calibrate dual-server verifiable aggregation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vsagg/errors.h"
#include "vsagg/harness.h"
#include "vsagg/params.h"

namespace {

using vsagg::Error;

void Emit(const std::string& text, const std::string& report_out) {
  if (report_out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(report_out);
  if (!out) throw Error(vsagg::ErrorCode::kIo, "cannot write report to " + report_out);
  out << text << "\n";
}

struct CommonFlags {
  uint32_t users = 10;
  size_t dim = 100;
  uint64_t seed = 1;
  int prime_bits = 60;
  int delta_exp = 40;
  std::string weights_file;
  std::string report_out;
};

void AddCommon(CLI::App* app, CommonFlags& f) {
  app->add_option("--users", f.users, "number of users")->capture_default_str();
  app->add_option("--dim", f.dim, "model dimension")->capture_default_str();
  app->add_option("--seed", f.seed, "master seed")->capture_default_str();
  app->add_option("--prime-bits", f.prime_bits, "modulus is the smallest prime above 2^bits")
      ->capture_default_str();
  app->add_option("--delta-exp", f.delta_exp, "fixed-point scale 2^exp")->capture_default_str();
  app->add_option("--weights-file", f.weights_file, "one weight per line, by ascending user id");
  app->add_option("--report-out", f.report_out, "write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-server verifiable secure aggregation"};
  app.require_subcommand(1);

  CommonFlags sim_flags;
  uint64_t rounds = 1;
  double dropout = 0.0;
  std::string mode;
  std::string adversary;
  std::optional<uint64_t> shuffle_seed;
  int timeout_ms = 5000;
  vsagg::SocketConfig socket;
  bool no_timings = false;
  auto* simulate = app.add_subcommand("simulate", "run a multi-round simulation");
  AddCommon(simulate, sim_flags);
  simulate->add_option("--rounds", rounds, "number of rounds")->capture_default_str();
  simulate->add_option("--dropout", dropout, "per-user dropout probability in [0, 1)")
      ->capture_default_str();
  simulate->add_option("--mode", mode, "memory or socket (default: $VSAGG_MODE or memory)");
  simulate->add_option("--adversary", adversary, "cs|vs:action:round[:magnitude]");
  simulate->add_option("--shuffle-seed", shuffle_seed, "shuffle in-memory delivery");
  simulate->add_option("--timeout-ms", timeout_ms, "receive timeout")->capture_default_str();
  simulate->add_option("--host", socket.host, "socket mode listen address")->capture_default_str();
  simulate->add_option("--cs-port", socket.cs_port, "CS port (0 = ephemeral)");
  simulate->add_option("--vs-port", socket.vs_port, "VS port (0 = ephemeral)");
  simulate->add_option("--user-port", socket.user_port, "user port (0 = ephemeral)");
  simulate->add_flag("--no-timings", no_timings, "omit wall-clock fields from the report");

  CommonFlags bench_flags;
  bench_flags.dim = 20000;
  int reps = 10;
  auto* bench = app.add_subcommand("bench", "time each protocol phase");
  AddCommon(bench, bench_flags);
  bench->add_option("--reps", reps, "repetitions (>= 10 recommended)")->capture_default_str();

  CommonFlags cal_flags;
  uint64_t tag_modulus = 11;
  uint64_t trials = 100000;
  auto* calibrate = app.add_subcommand("calibrate", "Monte Carlo forgery pass rate");
  AddCommon(calibrate, cal_flags);
  calibrate->add_option("--tag-modulus", tag_modulus, "small prime tag modulus")
      ->capture_default_str();
  calibrate->add_option("--trials", trials, "number of trials")->capture_default_str();

  CommonFlags oracle_flags;
  oracle_flags.users = 3;
  oracle_flags.dim = 4;
  std::string updates_file;
  uint64_t oracle_round = 1;
  auto* oracle = app.add_subcommand("oracle", "plaintext mean of updates");
  AddCommon(oracle, oracle_flags);
  oracle->add_option("--updates-file", updates_file,
                     "one update per line (default: synthetic updates from --seed)");
  oracle->add_option("--round", oracle_round, "round of the synthetic updates")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      vsagg::RunConfig cfg;
      cfg.users = sim_flags.users;
      cfg.dim = sim_flags.dim;
      cfg.rounds = rounds;
      cfg.dropout = dropout;
      cfg.seed = sim_flags.seed;
      cfg.prime_bits = sim_flags.prime_bits;
      cfg.delta_exp = sim_flags.delta_exp;
      if (mode.empty()) {
        const char* env = std::getenv("VSAGG_MODE");
        mode = env ? env : "memory";
      }
      cfg.mode = vsagg::ParseTransportMode(mode);
      if (!adversary.empty()) cfg.adversary = vsagg::AdversarySpec::Parse(adversary);
      if (!sim_flags.weights_file.empty()) {
        cfg.weights = vsagg::ReadWeightsFile(sim_flags.weights_file);
      }
      cfg.shuffle_seed = shuffle_seed;
      cfg.recv_timeout_ms = timeout_ms;
      cfg.socket = socket;
      vsagg::MetricsReport report = vsagg::RunSimulation(cfg);
      Emit(report.ToJson(!no_timings), sim_flags.report_out);
      if (!sim_flags.report_out.empty()) {
        std::cerr << "rounds=" << report.rounds.size()
                  << " aborted=" << report.aborted_rounds()
                  << " honest_failures=" << report.honest_failures()
                  << " undetected=" << report.undetected_attacks() << "\n";
      }
      return report.exit_code();
    }
    if (*bench) {
      vsagg::BenchConfig cfg;
      cfg.users = bench_flags.users;
      cfg.dim = bench_flags.dim;
      cfg.reps = reps;
      cfg.seed = bench_flags.seed;
      cfg.prime_bits = bench_flags.prime_bits;
      cfg.delta_exp = bench_flags.delta_exp;
      Emit(vsagg::Bench(cfg).ToJson(), bench_flags.report_out);
      return 0;
    }
    if (*calibrate) {
      vsagg::CalibrationResult r = vsagg::ForgeryCalibration(tag_modulus, trials, cal_flags.seed,
                                                             cal_flags.prime_bits);
      Emit(r.ToJson(), cal_flags.report_out);
      return r.below_bound() ? 0 : 1;
    }
    if (*oracle) {
      std::vector<std::vector<double>> updates;
      if (!updates_file.empty()) {
        updates = vsagg::ReadUpdatesFile(updates_file);
      } else {
        for (uint32_t id = 1; id <= oracle_flags.users; ++id) {
          updates.push_back(vsagg::SyntheticUpdate(oracle_flags.seed, oracle_round, id,
                                                   oracle_flags.dim, 1.0));
        }
      }
      if (updates.empty()) throw Error(vsagg::ErrorCode::kEmptyInput, "no updates given");
      std::vector<double> weights;
      if (!oracle_flags.weights_file.empty()) {
        weights = vsagg::ReadWeightsFile(oracle_flags.weights_file);
        if (weights.size() < updates.size()) {
          throw Error(vsagg::ErrorCode::kInvalidArgument, "fewer weights than updates");
        }
        weights.resize(updates.size());
      }
      vsagg::ProtocolParams params = vsagg::MakeProtocolParams(
          updates.front().size(), updates.size(), oracle_flags.prime_bits,
          oracle_flags.delta_exp, !weights.empty());
      nlohmann::ordered_json out{
          {"participants", updates.size()},
          {"delta", params.codec.delta()},
          {"mean", vsagg::PlaintextOracle(updates, params.codec, weights)}};
      Emit(out.dump(2), oracle_flags.report_out);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << vsagg::ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return 2;
  }
  return 0;
}
