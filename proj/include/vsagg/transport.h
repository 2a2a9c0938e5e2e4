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

#ifndef VSAGG_TRANSPORT_H_
#define VSAGG_TRANSPORT_H_

// Message delivery between protocol roles plus per-link traffic accounting.
//
// Every send is serialized to a frame, recorded in the ledger, and handed to
// the concrete transport. Receivers always get frames back through
// Deserialize, so the in-memory and socket modes exercise the same codec.

#include <array>
#include <chrono>
#include <compare>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "vsagg/message.h"
#include "vsagg/random.h"

namespace vsagg {

enum class Role : uint8_t { kUser = 0, kComputationServer = 1, kVerificationServer = 2 };

struct Endpoint {
  Role role = Role::kUser;
  UserId id = 0;

  static Endpoint Cs() { return {Role::kComputationServer, kComputationServerId}; }
  static Endpoint Vs() { return {Role::kVerificationServer, kVerificationServerId}; }
  static Endpoint User(UserId id) { return {Role::kUser, id}; }

  std::string ToString() const;
  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

struct TrafficKey {
  Endpoint from;
  Endpoint to;
  uint64_t round = 0;
  MessageKind kind = MessageKind::kAlarm;

  friend auto operator<=>(const TrafficKey&, const TrafficKey&) = default;
};

struct TrafficCounts {
  uint64_t messages = 0;
  uint64_t header_bytes = 0;
  uint64_t payload_bytes = 0;

  uint64_t total_bytes() const { return header_bytes + payload_bytes; }
  TrafficCounts& operator+=(const TrafficCounts& o) {
    messages += o.messages;
    header_bytes += o.header_bytes;
    payload_bytes += o.payload_bytes;
    return *this;
  }
  friend bool operator==(const TrafficCounts&, const TrafficCounts&) = default;
};

// Counts are monotone within a run. A running SHA-256 over every recorded
// frame (with its endpoints) serves as a transcript fingerprint.
class TrafficLedger {
 public:
  TrafficLedger();
  ~TrafficLedger();

  void Record(const Endpoint& from, const Endpoint& to, const Message& msg,
              std::span<const uint8_t> frame);

  TrafficCounts Total(const std::function<bool(const TrafficKey&)>& filter) const;
  TrafficCounts Link(const Endpoint& from, const Endpoint& to) const;
  TrafficCounts LinkInRound(const Endpoint& from, const Endpoint& to, uint64_t round) const;
  std::map<TrafficKey, TrafficCounts> Snapshot() const;
  std::string TranscriptDigestHex() const;

 private:
  struct DigestState;
  mutable std::mutex mu_;
  std::map<TrafficKey, TrafficCounts> counts_;
  std::unique_ptr<DigestState> digest_;
};

class Network {
 public:
  virtual ~Network() = default;

  // Throws kLinkClosed if the destination has been closed.
  void Send(const Endpoint& from, const Endpoint& to, const Message& msg);

  // Blocks up to `timeout`; throws kTimeout or kLinkClosed.
  virtual Message Recv(const Endpoint& at, std::chrono::milliseconds timeout) = 0;
  // Non-blocking; nullopt when nothing is pending.
  virtual std::optional<Message> TryRecv(const Endpoint& at) = 0;
  virtual void Close(const Endpoint& at) = 0;

  TrafficLedger& ledger() { return ledger_; }
  const TrafficLedger& ledger() const { return ledger_; }

 protected:
  virtual void Deliver(const Endpoint& from, const Endpoint& to, Bytes frame) = 0;

 private:
  TrafficLedger ledger_;
};

// Reliable in-process delivery. Without a shuffle seed each mailbox is FIFO;
// with one, every receive picks uniformly among the pending frames using a
// generator forked from the seed, so the interleaving is reproducible.
class InMemoryNetwork final : public Network {
 public:
  InMemoryNetwork() = default;
  explicit InMemoryNetwork(uint64_t shuffle_seed);

  Message Recv(const Endpoint& at, std::chrono::milliseconds timeout) override;
  std::optional<Message> TryRecv(const Endpoint& at) override;
  void Close(const Endpoint& at) override;

  size_t Pending(const Endpoint& at) const;

 protected:
  void Deliver(const Endpoint& from, const Endpoint& to, Bytes frame) override;

 private:
  struct Mailbox {
    std::deque<Bytes> frames;
    bool closed = false;
  };

  Bytes PopLocked(Mailbox& box);

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::map<Endpoint, Mailbox> boxes_;
  std::optional<DeterministicRandom> shuffle_;
};

}  // namespace vsagg

#endif  // VSAGG_TRANSPORT_H_
