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

#include "vsagg/transport.h"

#include <openssl/evp.h>

#include <cstdio>

#include "vsagg/errors.h"

namespace vsagg {

std::string Endpoint::ToString() const {
  switch (role) {
    case Role::kComputationServer: return "cs";
    case Role::kVerificationServer: return "vs";
    case Role::kUser: return "user:" + std::to_string(id);
  }
  return "?";
}

struct TrafficLedger::DigestState {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  DigestState() { EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr); }
  ~DigestState() { EVP_MD_CTX_free(ctx); }
};

TrafficLedger::TrafficLedger() : digest_(std::make_unique<DigestState>()) {}
TrafficLedger::~TrafficLedger() = default;

void TrafficLedger::Record(const Endpoint& from, const Endpoint& to,
                           const Message& msg, std::span<const uint8_t> frame) {
  std::lock_guard<std::mutex> lock(mu_);
  auto& c = counts_[TrafficKey{from, to, msg.round, msg.kind}];
  c.messages += 1;
  c.header_bytes += kFrameHeaderBytes;
  c.payload_bytes += msg.payload.size();
  ByteWriter route(10);
  route.PutU8(static_cast<uint8_t>(from.role));
  route.PutU32(from.id);
  route.PutU8(static_cast<uint8_t>(to.role));
  route.PutU32(to.id);
  EVP_DigestUpdate(digest_->ctx, route.bytes().data(), route.size());
  EVP_DigestUpdate(digest_->ctx, frame.data(), frame.size());
}

TrafficCounts TrafficLedger::Total(
    const std::function<bool(const TrafficKey&)>& filter) const {
  std::lock_guard<std::mutex> lock(mu_);
  TrafficCounts total;
  for (const auto& [key, c] : counts_) {
    if (filter(key)) total += c;
  }
  return total;
}

TrafficCounts TrafficLedger::Link(const Endpoint& from, const Endpoint& to) const {
  return Total([&](const TrafficKey& k) { return k.from == from && k.to == to; });
}

TrafficCounts TrafficLedger::LinkInRound(const Endpoint& from, const Endpoint& to,
                                         uint64_t round) const {
  return Total([&](const TrafficKey& k) {
    return k.from == from && k.to == to && k.round == round;
  });
}

std::map<TrafficKey, TrafficCounts> TrafficLedger::Snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return counts_;
}

std::string TrafficLedger::TranscriptDigestHex() const {
  std::lock_guard<std::mutex> lock(mu_);
  EVP_MD_CTX* copy = EVP_MD_CTX_new();
  EVP_MD_CTX_copy_ex(copy, digest_->ctx);
  unsigned char md[32];
  unsigned int len = 0;
  EVP_DigestFinal_ex(copy, md, &len);
  EVP_MD_CTX_free(copy);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

void Network::Send(const Endpoint& from, const Endpoint& to, const Message& msg) {
  Bytes frame = Serialize(msg);
  ledger_.Record(from, to, msg, frame);
  Deliver(from, to, std::move(frame));
}

InMemoryNetwork::InMemoryNetwork(uint64_t shuffle_seed)
    : shuffle_(DeterministicRandom(shuffle_seed).Fork("delivery-shuffle")) {}

void InMemoryNetwork::Deliver(const Endpoint& /*from*/, const Endpoint& to, Bytes frame) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    Mailbox& box = boxes_[to];
    if (box.closed) {
      throw Error(ErrorCode::kLinkClosed, "link to " + to.ToString() + " is closed");
    }
    box.frames.push_back(std::move(frame));
  }
  cv_.notify_all();
}

Bytes InMemoryNetwork::PopLocked(Mailbox& box) {
  size_t index = 0;
  if (shuffle_ && box.frames.size() > 1) index = shuffle_->Uniform(box.frames.size());
  Bytes out = std::move(box.frames[index]);
  box.frames.erase(box.frames.begin() + static_cast<std::ptrdiff_t>(index));
  return out;
}

Message InMemoryNetwork::Recv(const Endpoint& at, std::chrono::milliseconds timeout) {
  std::unique_lock<std::mutex> lock(mu_);
  Mailbox& box = boxes_[at];
  bool ready = cv_.wait_for(lock, timeout, [&] { return !box.frames.empty() || box.closed; });
  if (!box.frames.empty()) {
    Bytes frame = PopLocked(box);
    lock.unlock();
    return Deserialize(frame);
  }
  if (box.closed) throw Error(ErrorCode::kLinkClosed, "link to " + at.ToString() + " is closed");
  (void)ready;
  throw Error(ErrorCode::kTimeout, "receive timed out at " + at.ToString());
}

std::optional<Message> InMemoryNetwork::TryRecv(const Endpoint& at) {
  std::unique_lock<std::mutex> lock(mu_);
  Mailbox& box = boxes_[at];
  if (box.frames.empty()) return std::nullopt;
  Bytes frame = PopLocked(box);
  lock.unlock();
  return Deserialize(frame);
}

void InMemoryNetwork::Close(const Endpoint& at) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    boxes_[at].closed = true;
  }
  cv_.notify_all();
}

size_t InMemoryNetwork::Pending(const Endpoint& at) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = boxes_.find(at);
  return it == boxes_.end() ? 0 : it->second.frames.size();
}

}  // namespace vsagg
