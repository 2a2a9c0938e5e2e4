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

#include "vsagg/prf.h"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <string>
#include <utility>

#include "vsagg/errors.h"
#include "vsagg/random.h"

namespace vsagg {

KeyMaterial KeyMaterial::FromBytes(std::span<const uint8_t> bytes) {
  if (bytes.empty()) throw Error(ErrorCode::kInvalidArgument, "empty key material");
  KeyMaterial k;
  k.bytes_.assign(bytes.begin(), bytes.end());
  return k;
}

KeyMaterial KeyMaterial::Generate(RandomSource& rng) {
  std::array<uint8_t, kKeyBytes> buf;
  rng.Fill(buf);
  return FromBytes(buf);
}

KeyMaterial ConcatKeys(const KeyMaterial& k1, const KeyMaterial& k2) {
  std::vector<uint8_t> joined(k1.bytes().begin(), k1.bytes().end());
  joined.insert(joined.end(), k2.bytes().begin(), k2.bytes().end());
  return KeyMaterial::FromBytes(joined);
}

CipherKey DeriveCipherKey(std::span<const uint8_t> master) {
  if (master.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot derive a cipher key from empty input");
  }
  CipherKey out;
  SHA256(master.data(), master.size(), out.data());
  return out;
}

struct Keystream::CipherCtx {
  EVP_CIPHER_CTX* ctx = nullptr;
  ~CipherCtx() { EVP_CIPHER_CTX_free(ctx); }
};

Keystream::Keystream(const CipherKey& key, uint64_t v0)
    : ctx_(std::make_unique<CipherCtx>()) {
  std::array<uint8_t, 16> iv{};
  StoreU64Le(v0, iv.data());
  ctx_->ctx = EVP_CIPHER_CTX_new();
  if (ctx_->ctx == nullptr ||
      EVP_EncryptInit_ex(ctx_->ctx, EVP_aes_256_ctr(), nullptr, key.data(), iv.data()) != 1) {
    throw Error(ErrorCode::kCrypto, "AES-256-CTR initialisation failed");
  }
}

Keystream::~Keystream() = default;
Keystream::Keystream(Keystream&&) noexcept = default;
Keystream& Keystream::operator=(Keystream&&) noexcept = default;

void Keystream::Refill() {
  static const std::array<uint8_t, 4096> kZeros{};
  int out_len = 0;
  if (EVP_EncryptUpdate(ctx_->ctx, buf_.data(), &out_len, kZeros.data(),
                        static_cast<int>(kZeros.size())) != 1 ||
      out_len != static_cast<int>(buf_.size())) {
    throw Error(ErrorCode::kCrypto, "AES-256-CTR keystream generation failed");
  }
  pos_ = 0;
}

void Keystream::Fill(std::span<uint8_t> out) {
  size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buf_.size()) Refill();
    size_t n = std::min(out.size() - done, buf_.size() - pos_);
    std::memcpy(out.data() + done, buf_.data() + pos_, n);
    pos_ += n;
    done += n;
  }
}

uint64_t Keystream::NextWord() {
  if (buf_.size() - pos_ < 8) {
    // The buffer size is a multiple of 8, so words never straddle refills.
    Refill();
  }
  uint64_t w = LoadU64Le(buf_.data() + pos_);
  pos_ += 8;
  return w;
}

std::vector<uint64_t> ExpandBelow(const KeyMaterial& key, uint64_t v0,
                                  size_t length, uint64_t bound) {
  if (length == 0) throw Error(ErrorCode::kInvalidArgument, "expansion length must be >= 1");
  if (length >= kMaxExpansionLength) {
    throw Error(ErrorCode::kLengthOverflow,
                "expansion length " + std::to_string(length) + " >= 2^32");
  }
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "sampling bound must be >= 1");
  Keystream stream(DeriveCipherKey(key), v0);
  const int bits = std::bit_width(bound - 1);
  const uint64_t mask = bits >= 64 ? ~uint64_t{0} : (uint64_t{1} << bits) - 1;
  std::vector<uint64_t> out(length);
  for (auto& slot : out) {
    uint64_t candidate;
    do {
      candidate = stream.NextWord() & mask;
    } while (candidate >= bound);
    slot = candidate;
  }
  return out;
}

FieldVector Expand(const ExpansionRequest& req) {
  return FieldVector::FromCanonical(
      ExpandBelow(req.key, req.v0, req.length, req.modulus.value()));
}

FieldVector ExpandUnit(const KeyMaterial& key, uint64_t v0, size_t length,
                       FieldModulus R) {
  std::vector<uint64_t> out = ExpandBelow(key, v0, length, R.value() - 1);
  for (auto& x : out) x += 1;
  return FieldVector::FromCanonical(std::move(out));
}

}  // namespace vsagg
