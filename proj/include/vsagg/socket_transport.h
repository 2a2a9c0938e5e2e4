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

#ifndef VSAGG_SOCKET_TRANSPORT_H_
#define VSAGG_SOCKET_TRANSPORT_H_

// TCP transport. Each role group (CS, VS, users) owns a listener on
// host:port. A sender opens one persistent connection per (from, to) link,
// writes a 10-byte route preamble (destination role, destination id, source
// role, source id) and then raw frames back to back. The receiving side
// re-splits the stream with FrameLength and queues frames per destination.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "vsagg/transport.h"

namespace vsagg {

struct SocketConfig {
  std::string host = "127.0.0.1";
  // 0 picks an ephemeral port; query the bound port with SocketNetwork::port.
  uint16_t cs_port = 0;
  uint16_t vs_port = 0;
  uint16_t user_port = 0;
};

class SocketNetwork final : public Network {
 public:
  explicit SocketNetwork(SocketConfig config);
  ~SocketNetwork() override;
  SocketNetwork(const SocketNetwork&) = delete;
  SocketNetwork& operator=(const SocketNetwork&) = delete;

  uint16_t port(Role role) const;

  Message Recv(const Endpoint& at, std::chrono::milliseconds timeout) override;
  std::optional<Message> TryRecv(const Endpoint& at) override;
  void Close(const Endpoint& at) override;

 protected:
  void Deliver(const Endpoint& from, const Endpoint& to, Bytes frame) override;

 private:
  struct Listener {
    int fd = -1;
    uint16_t port = 0;
    std::thread acceptor;
  };
  struct Mailbox {
    std::deque<Bytes> frames;
    bool closed = false;
  };

  void StartListener(Role role, uint16_t requested_port);
  void AcceptLoop(int listen_fd);
  void ReadLoop(int fd);
  int Connect(Role role);
  void Enqueue(const Endpoint& to, Bytes frame);

  SocketConfig config_;
  std::atomic<bool> stopping_{false};
  std::map<Role, Listener> listeners_;

  std::mutex conn_mu_;
  std::map<std::pair<Endpoint, Endpoint>, int> outgoing_;
  std::vector<int> incoming_fds_;
  std::vector<std::thread> readers_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::map<Endpoint, Mailbox> boxes_;
};

}  // namespace vsagg

#endif  // VSAGG_SOCKET_TRANSPORT_H_
