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

#ifndef DPHEALTH_LEDGER_TRANSACTION_HPP_
#define DPHEALTH_LEDGER_TRANSACTION_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "dphealth/ledger/crypto.hpp"
#include "dphealth/random.hpp"

namespace dphealth::ledger {

using TxId = std::array<std::uint8_t, 16>;

enum class OpType : std::uint8_t {
  kDataIngestion = 0,
  kDPQuery = 1,
  kBudgetUpdate = 2,
  kAccessRequest = 3,
};

enum class Layer : std::uint8_t { kIoT = 0, kEdge = 1, kCloud = 2 };

std::string_view OpTypeName(OpType op);
std::string_view LayerName(Layer layer);

struct TxPrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;
  std::string noise_type;
  double sensitivity = 0.0;

  bool operator==(const TxPrivacyParams&) const = default;
};

struct TxMetadata {
  std::string device_id;
  Layer layer = Layer::kEdge;
  std::string purpose;

  bool operator==(const TxMetadata&) const = default;
};

struct LedgerTransaction {
  TxId tx_id{};
  std::int64_t timestamp_ns = 0;
  OpType op_type = OpType::kDataIngestion;
  Digest payload_digest{};
  std::optional<TxPrivacyParams> privacy_params;
  TxMetadata metadata;
  // tx_id of the reservation a DPQuery consumes; all zero otherwise.
  TxId reservation_ref{};
  Bytes signature;

  bool operator==(const LedgerTransaction&) const = default;
};

// Random (version 4, RFC 4122 variant) identifier drawn from `rng`.
TxId NewTxId(Rng& rng);
std::string FormatTxId(const TxId& id);

// Nanoseconds since the Unix epoch from the system clock.
std::int64_t NowNs();

// Canonical layout without the signature; this is what gets signed.
Bytes SigningBytes(const LedgerTransaction& tx);
// Signing bytes followed by the length-prefixed signature.
Bytes CanonicalBytes(const LedgerTransaction& tx);
// Inverse of CanonicalBytes; the whole buffer must be consumed.
LedgerTransaction ParseTransaction(std::span<const std::uint8_t> bytes);

// DPQuery entries must carry privacy params with epsilon > 0.
void ValidateTransaction(const LedgerTransaction& tx);

void SignTransaction(LedgerTransaction& tx, const Signer& signer);
bool VerifyTransaction(const LedgerTransaction& tx, const Signer& signer);

// Big-endian length-prefixed encoder shared by transactions and chain files.
class ByteWriter {
 public:
  void U8(std::uint8_t v) { out_.push_back(v); }
  void U32(std::uint32_t v);
  void U64(std::uint64_t v);
  void I64(std::int64_t v) { U64(static_cast<std::uint64_t>(v)); }
  // IEEE-754 bit pattern, big-endian.
  void F64(double v);
  void Raw(std::span<const std::uint8_t> bytes);
  // u32 length then the bytes.
  void Blob(std::span<const std::uint8_t> bytes);
  void Str(std::string_view s);

  const Bytes& bytes() const { return out_; }
  Bytes Take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Throws kParseError with the absolute byte offset on truncation.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes, std::size_t base_offset = 0)
      : bytes_(bytes), base_(base_offset) {}

  std::uint8_t U8();
  std::uint32_t U32();
  std::uint64_t U64();
  std::int64_t I64() { return static_cast<std::int64_t>(U64()); }
  double F64();
  void Raw(std::span<std::uint8_t> out);
  Bytes Blob();
  std::string Str();

  std::size_t position() const { return pos_; }
  std::size_t offset() const { return base_ + pos_; }
  bool done() const { return pos_ == bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void Need(std::size_t n) const;

  std::span<const std::uint8_t> bytes_;
  std::size_t base_ = 0;
  std::size_t pos_ = 0;
};

}  // namespace dphealth::ledger

#endif  // DPHEALTH_LEDGER_TRANSACTION_HPP_
