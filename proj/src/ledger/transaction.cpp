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

#include "dphealth/ledger/transaction.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>

#include "dphealth/common.hpp"

namespace dphealth::ledger {
namespace {

constexpr std::uint8_t kTxFormatVersion = 1;

void WriteBody(const LedgerTransaction& tx, ByteWriter& w) {
  w.U8(kTxFormatVersion);
  w.Raw(tx.tx_id);
  w.I64(tx.timestamp_ns);
  w.U8(static_cast<std::uint8_t>(tx.op_type));
  w.Raw(tx.payload_digest);
  w.U8(tx.privacy_params ? 1 : 0);
  if (tx.privacy_params) {
    w.F64(tx.privacy_params->epsilon);
    w.F64(tx.privacy_params->delta);
    w.Str(tx.privacy_params->noise_type);
    w.F64(tx.privacy_params->sensitivity);
  }
  w.Str(tx.metadata.device_id);
  w.U8(static_cast<std::uint8_t>(tx.metadata.layer));
  w.Str(tx.metadata.purpose);
  w.Raw(tx.reservation_ref);
}

}  // namespace

std::string_view OpTypeName(OpType op) {
  switch (op) {
    case OpType::kDataIngestion:
      return "DataIngestion";
    case OpType::kDPQuery:
      return "DPQuery";
    case OpType::kBudgetUpdate:
      return "BudgetUpdate";
    case OpType::kAccessRequest:
      return "AccessRequest";
  }
  return "Unknown";
}

std::string_view LayerName(Layer layer) {
  switch (layer) {
    case Layer::kIoT:
      return "IoT";
    case Layer::kEdge:
      return "Edge";
    case Layer::kCloud:
      return "Cloud";
  }
  return "Unknown";
}

TxId NewTxId(Rng& rng) {
  TxId id{};
  const std::uint64_t hi = rng.NextU64();
  const std::uint64_t lo = rng.NextU64();
  for (int i = 0; i < 8; ++i) {
    id[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(hi >> (56 - 8 * i));
    id[static_cast<std::size_t>(8 + i)] = static_cast<std::uint8_t>(lo >> (56 - 8 * i));
  }
  id[6] = static_cast<std::uint8_t>((id[6] & 0x0F) | 0x40);
  id[8] = static_cast<std::uint8_t>((id[8] & 0x3F) | 0x80);
  return id;
}

std::string FormatTxId(const TxId& id) {
  const std::string hex = ToHex(id);
  return hex.substr(0, 8) + "-" + hex.substr(8, 4) + "-" + hex.substr(12, 4) + "-" +
         hex.substr(16, 4) + "-" + hex.substr(20);
}

std::int64_t NowNs() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Bytes SigningBytes(const LedgerTransaction& tx) {
  ByteWriter w;
  WriteBody(tx, w);
  return w.Take();
}

Bytes CanonicalBytes(const LedgerTransaction& tx) {
  ByteWriter w;
  WriteBody(tx, w);
  w.Blob(tx.signature);
  return w.Take();
}

LedgerTransaction ParseTransaction(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const std::uint8_t version = r.U8();
  Require(version == kTxFormatVersion, ErrorCode::kParseError,
          "unsupported transaction format version " + std::to_string(version));
  LedgerTransaction tx;
  r.Raw(tx.tx_id);
  tx.timestamp_ns = r.I64();
  const std::uint8_t op = r.U8();
  Require(op <= static_cast<std::uint8_t>(OpType::kAccessRequest), ErrorCode::kParseError,
          "unknown op_type " + std::to_string(op));
  tx.op_type = static_cast<OpType>(op);
  r.Raw(tx.payload_digest);
  const std::uint8_t has_params = r.U8();
  Require(has_params <= 1, ErrorCode::kParseError, "invalid privacy_params flag");
  if (has_params == 1) {
    TxPrivacyParams p;
    p.epsilon = r.F64();
    p.delta = r.F64();
    p.noise_type = r.Str();
    p.sensitivity = r.F64();
    tx.privacy_params = std::move(p);
  }
  tx.metadata.device_id = r.Str();
  const std::uint8_t layer = r.U8();
  Require(layer <= static_cast<std::uint8_t>(Layer::kCloud), ErrorCode::kParseError,
          "unknown layer " + std::to_string(layer));
  tx.metadata.layer = static_cast<Layer>(layer);
  tx.metadata.purpose = r.Str();
  r.Raw(tx.reservation_ref);
  tx.signature = r.Blob();
  Require(r.done(), ErrorCode::kParseError,
          "trailing bytes after transaction at offset " + std::to_string(r.offset()));
  return tx;
}

void ValidateTransaction(const LedgerTransaction& tx) {
  if (tx.op_type == OpType::kDPQuery) {
    Require(tx.privacy_params.has_value(), ErrorCode::kProtocolError,
            "DPQuery transaction without privacy params");
    Require(std::isfinite(tx.privacy_params->epsilon) && tx.privacy_params->epsilon > 0.0,
            ErrorCode::kProtocolError, "DPQuery epsilon must be positive");
  }
}

void SignTransaction(LedgerTransaction& tx, const Signer& signer) {
  tx.signature = signer.Sign(SigningBytes(tx));
}

bool VerifyTransaction(const LedgerTransaction& tx, const Signer& signer) {
  return signer.Verify(SigningBytes(tx), tx.signature);
}

void ByteWriter::U32(std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
}

void ByteWriter::U64(std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
}

void ByteWriter::F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::Raw(std::span<const std::uint8_t> bytes) {
  out_.insert(out_.end(), bytes.begin(), bytes.end());
}

void ByteWriter::Blob(std::span<const std::uint8_t> bytes) {
  Require(bytes.size() <= 0xFFFFFFFFu, ErrorCode::kInvalidInput, "blob too large");
  U32(static_cast<std::uint32_t>(bytes.size()));
  Raw(bytes);
}

void ByteWriter::Str(std::string_view s) {
  Blob(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

void ByteReader::Need(std::size_t n) const {
  Require(n <= bytes_.size() - pos_, ErrorCode::kParseError,
          "truncated input at byte offset " + std::to_string(base_ + pos_));
}

std::uint8_t ByteReader::U8() {
  Need(1);
  return bytes_[pos_++];
}

std::uint32_t ByteReader::U32() {
  Need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = v << 8 | bytes_[pos_++];
  return v;
}

std::uint64_t ByteReader::U64() {
  Need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | bytes_[pos_++];
  return v;
}

double ByteReader::F64() { return std::bit_cast<double>(U64()); }

void ByteReader::Raw(std::span<std::uint8_t> out) {
  Need(out.size());
  std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_), out.size(), out.begin());
  pos_ += out.size();
}

Bytes ByteReader::Blob() {
  const std::uint32_t n = U32();
  Need(n);
  Bytes out(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
            bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return out;
}

std::string ByteReader::Str() {
  const Bytes b = Blob();
  return std::string(b.begin(), b.end());
}

}  // namespace dphealth::ledger
