// Copyright 2026 The dphealth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dphealth/ledger/crypto.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "dphealth/common.hpp"

namespace dphealth::ledger {

Digest Sha256(std::span<const std::uint8_t> data) {
  Digest out{};
  unsigned int len = 0;
  Require(EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                     nullptr) == 1 &&
              len == out.size(),
          ErrorCode::kSignatureError, "SHA-256 failed");
  return out;
}

Digest Sha256(std::string_view text) {
  return Sha256(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string ToHex(std::span<const std::uint8_t> data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

Bytes FromHex(std::string_view hex) {
  Require(hex.size() % 2 == 0, ErrorCode::kParseError, "hex string of odd length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    Fail(ErrorCode::kParseError, std::string("invalid hex character '") + c + "'");
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return out;
}

HmacSha256Signer::HmacSha256Signer(Bytes key) : key_(std::move(key)) {
  Require(!key_.empty(), ErrorCode::kSignatureError, "empty signing key");
}

Bytes HmacSha256Signer::Sign(std::span<const std::uint8_t> message) const {
  Bytes out(EVP_MAX_MD_SIZE);
  unsigned int len = 0;
  Require(HMAC(EVP_sha256(), key_.data(), static_cast<int>(key_.size()), message.data(),
               message.size(), out.data(), &len) != nullptr,
          ErrorCode::kSignatureError, "HMAC-SHA256 failed");
  out.resize(len);
  return out;
}

bool HmacSha256Signer::Verify(std::span<const std::uint8_t> message,
                              std::span<const std::uint8_t> signature) const {
  const Bytes expected = Sign(message);
  return signature.size() == expected.size() &&
         CRYPTO_memcmp(signature.data(), expected.data(), expected.size()) == 0;
}

}  // namespace dphealth::ledger
