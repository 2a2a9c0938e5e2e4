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

#include "vsagg/socket_transport.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "vsagg/errors.h"

namespace vsagg {
namespace {

constexpr size_t kPreambleBytes = 10;

[[noreturn]] void ThrowIo(const std::string& what) {
  throw Error(ErrorCode::kIo, what + ": " + std::strerror(errno));
}

void WriteAll(int fd, const uint8_t* data, size_t n) {
  while (n > 0) {
    ssize_t w = ::send(fd, data, n, MSG_NOSIGNAL);
    if (w < 0) {
      if (errno == EINTR) continue;
      if (errno == EPIPE || errno == ECONNRESET) {
        throw Error(ErrorCode::kLinkClosed, "peer closed the connection");
      }
      ThrowIo("send failed");
    }
    data += w;
    n -= static_cast<size_t>(w);
  }
}

// False on clean EOF before any byte was read.
bool ReadAll(int fd, uint8_t* data, size_t n) {
  size_t got = 0;
  while (got < n) {
    ssize_t r = ::recv(fd, data + got, n - got, 0);
    if (r == 0) {
      if (got == 0) return false;
      throw Error(ErrorCode::kTruncatedFrame,
                  "connection closed mid-frame after " + std::to_string(got) + " bytes");
    }
    if (r < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    got += static_cast<size_t>(r);
  }
  return true;
}

sockaddr_in MakeAddr(const std::string& host, uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw Error(ErrorCode::kInvalidArgument, "not an IPv4 address: " + host);
  }
  return addr;
}

}  // namespace

SocketNetwork::SocketNetwork(SocketConfig config) : config_(std::move(config)) {
  StartListener(Role::kComputationServer, config_.cs_port);
  StartListener(Role::kVerificationServer, config_.vs_port);
  StartListener(Role::kUser, config_.user_port);
}

SocketNetwork::~SocketNetwork() {
  stopping_ = true;
  for (auto& [role, l] : listeners_) ::shutdown(l.fd, SHUT_RDWR);
  {
    std::lock_guard<std::mutex> lock(conn_mu_);
    for (auto& [link, fd] : outgoing_) ::shutdown(fd, SHUT_RDWR);
    for (int fd : incoming_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  for (auto& [role, l] : listeners_) {
    if (l.acceptor.joinable()) l.acceptor.join();
    ::close(l.fd);
  }
  for (auto& t : readers_) {
    if (t.joinable()) t.join();
  }
  for (auto& [link, fd] : outgoing_) ::close(fd);
  for (int fd : incoming_fds_) ::close(fd);
}

uint16_t SocketNetwork::port(Role role) const { return listeners_.at(role).port; }

void SocketNetwork::StartListener(Role role, uint16_t requested_port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) ThrowIo("socket failed");
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = MakeAddr(config_.host, requested_port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd);
    ThrowIo("bind " + config_.host + ":" + std::to_string(requested_port) + " failed");
  }
  if (::listen(fd, 128) != 0) {
    ::close(fd);
    ThrowIo("listen failed");
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  Listener& l = listeners_[role];
  l.fd = fd;
  l.port = ntohs(addr.sin_port);
  l.acceptor = std::thread([this, fd] { AcceptLoop(fd); });
}

void SocketNetwork::AcceptLoop(int listen_fd) {
  while (!stopping_) {
    int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;
    }
    std::lock_guard<std::mutex> lock(conn_mu_);
    if (stopping_) {
      ::close(fd);
      return;
    }
    incoming_fds_.push_back(fd);
    readers_.emplace_back([this, fd] { ReadLoop(fd); });
  }
}

void SocketNetwork::ReadLoop(int fd) {
  try {
    uint8_t preamble[kPreambleBytes];
    if (!ReadAll(fd, preamble, kPreambleBytes)) return;
    ByteReader r(preamble);
    Endpoint to{static_cast<Role>(r.GetU8()), r.GetU32()};
    while (!stopping_) {
      Bytes frame(kFrameHeaderBytes);
      if (!ReadAll(fd, frame.data(), kFrameHeaderBytes)) return;
      size_t total = FrameLength(frame);
      frame.resize(total);
      if (total > kFrameHeaderBytes &&
          !ReadAll(fd, frame.data() + kFrameHeaderBytes, total - kFrameHeaderBytes)) {
        return;
      }
      Enqueue(to, std::move(frame));
    }
  } catch (const Error&) {
    // A malformed stream poisons only its own link.
  }
}

void SocketNetwork::Enqueue(const Endpoint& to, Bytes frame) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    Mailbox& box = boxes_[to];
    if (box.closed) return;
    box.frames.push_back(std::move(frame));
  }
  cv_.notify_all();
}

int SocketNetwork::Connect(Role role) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) ThrowIo("socket failed");
  sockaddr_in addr = MakeAddr(config_.host, port(role));
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd);
    ThrowIo("connect failed");
  }
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return fd;
}

void SocketNetwork::Deliver(const Endpoint& from, const Endpoint& to, Bytes frame) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (boxes_[to].closed) {
      throw Error(ErrorCode::kLinkClosed, "link to " + to.ToString() + " is closed");
    }
  }
  std::lock_guard<std::mutex> lock(conn_mu_);
  auto key = std::make_pair(from, to);
  auto it = outgoing_.find(key);
  if (it == outgoing_.end()) {
    int fd = Connect(to.role);
    ByteWriter pre(kPreambleBytes);
    pre.PutU8(static_cast<uint8_t>(to.role));
    pre.PutU32(to.id);
    pre.PutU8(static_cast<uint8_t>(from.role));
    pre.PutU32(from.id);
    WriteAll(fd, pre.bytes().data(), pre.size());
    it = outgoing_.emplace(key, fd).first;
  }
  WriteAll(it->second, frame.data(), frame.size());
}

Message SocketNetwork::Recv(const Endpoint& at, std::chrono::milliseconds timeout) {
  std::unique_lock<std::mutex> lock(mu_);
  Mailbox& box = boxes_[at];
  cv_.wait_for(lock, timeout, [&] { return !box.frames.empty() || box.closed; });
  if (!box.frames.empty()) {
    Bytes frame = std::move(box.frames.front());
    box.frames.pop_front();
    lock.unlock();
    return Deserialize(frame);
  }
  if (box.closed) throw Error(ErrorCode::kLinkClosed, "link to " + at.ToString() + " is closed");
  throw Error(ErrorCode::kTimeout, "receive timed out at " + at.ToString());
}

std::optional<Message> SocketNetwork::TryRecv(const Endpoint& at) {
  std::unique_lock<std::mutex> lock(mu_);
  Mailbox& box = boxes_[at];
  if (box.frames.empty()) return std::nullopt;
  Bytes frame = std::move(box.frames.front());
  box.frames.pop_front();
  lock.unlock();
  return Deserialize(frame);
}

void SocketNetwork::Close(const Endpoint& at) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    boxes_[at].closed = true;
  }
  cv_.notify_all();
}

}  // namespace vsagg
