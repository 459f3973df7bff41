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

#ifndef DPHEALTH_LEDGER_CRYPTO_HPP_
#define DPHEALTH_LEDGER_CRYPTO_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dphealth/common.hpp"

namespace dphealth::ledger {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

Digest Sha256(std::span<const std::uint8_t> data);
Digest Sha256(std::string_view text);

std::string ToHex(std::span<const std::uint8_t> data);
// Throws kParseError on odd length or non-hex characters.
Bytes FromHex(std::string_view hex);

// Signature schemes are pluggable; the ledger only needs sign and verify
// over canonical bytes. Implementations must be deterministic.
class Signer {
 public:
  virtual ~Signer() = default;
  virtual std::string scheme() const = 0;
  virtual Bytes Sign(std::span<const std::uint8_t> message) const = 0;
  virtual bool Verify(std::span<const std::uint8_t> message,
                      std::span<const std::uint8_t> signature) const = 0;
};

// Keyed-hash authenticator. It stands in for an asymmetric scheme: anyone
// able to verify can also sign.
class HmacSha256Signer final : public Signer {
 public:
  explicit HmacSha256Signer(Bytes key);

  std::string scheme() const override { return "hmac-sha256"; }
  Bytes Sign(std::span<const std::uint8_t> message) const override;
  bool Verify(std::span<const std::uint8_t> message,
              std::span<const std::uint8_t> signature) const override;

 private:
  Bytes key_;
};

}  // namespace dphealth::ledger

#endif  // DPHEALTH_LEDGER_CRYPTO_HPP_
