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

#include "dphealth/ledger/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "json.hpp"

#include "dphealth/common.hpp"

namespace dphealth::ledger {
namespace {

constexpr char kMagic[8] = {'D', 'P', 'H', 'L', 'E', 'D', 'G', 'R'};
constexpr std::uint32_t kFileVersion = 1;
constexpr std::size_t kHeaderBodySize = sizeof(kMagic) + 4 + 8;

constexpr Digest kZeroDigest{};

bool IsZero(const TxId& id) {
  return std::all_of(id.begin(), id.end(), [](std::uint8_t b) { return b == 0; });
}

void RequireNonNegativeEpsilon(double epsilon) {
  Require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::kInvalidParams,
          "requested epsilon must be positive");
}

}  // namespace

Digest ComputeEntryHash(std::uint64_t index, const Digest& prev_hash,
                        const LedgerTransaction& tx) {
  ByteWriter w;
  w.U64(index);
  w.Raw(prev_hash);
  w.Raw(CanonicalBytes(tx));
  return Sha256(w.bytes());
}

ChainVerdict VerifyChain(std::span<const ChainEntry> chain,
                         const std::optional<Digest>& expected_head,
                         const Signer* signer) {
  auto broken = [](std::uint64_t i, std::string reason) {
    return ChainVerdict{false, i, std::move(reason)};
  };
  Digest prev = kZeroDigest;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const ChainEntry& e = chain[i];
    if (e.index != i) return broken(i, "index out of sequence");
    if (e.prev_hash != prev) return broken(i, "prev_hash does not match predecessor");
    if (ComputeEntryHash(e.index, e.prev_hash, e.transaction) != e.entry_hash) {
      return broken(i, "entry_hash mismatch");
    }
    if (signer != nullptr && !VerifyTransaction(e.transaction, *signer)) {
      return broken(i, "signature does not verify");
    }
    prev = e.entry_hash;
  }
  if (expected_head) {
    const Digest head = chain.empty() ? kZeroDigest : chain.back().entry_hash;
    if (head != *expected_head) {
      for (std::size_t i = 0; i < chain.size(); ++i) {
        if (chain[i].entry_hash == *expected_head) {
          return broken(i + 1, "chain extends past the anchored head");
        }
      }
      return broken(chain.size(), "anchored head not found; chain truncated or forked");
    }
  }
  return {};
}

BudgetLedgerState Replay(std::span<const ChainEntry> chain, double total_epsilon) {
  BudgetLedgerState s;
  s.total_epsilon = total_epsilon;
  for (const ChainEntry& e : chain) {
    const LedgerTransaction& tx = e.transaction;
    ++s.count_by_op[tx.op_type];
    const double eps = tx.privacy_params ? tx.privacy_params->epsilon : 0.0;
    s.epsilon_by_op[tx.op_type] += eps;
    if (tx.op_type == OpType::kDPQuery) s.cumulative_spent += eps;
    if (tx.op_type == OpType::kBudgetUpdate) s.reserved += eps;
  }
  return s;
}

bool EvaluateAccess(const LedgerTransaction& /*request*/) { return true; }

BudgetLedger::BudgetLedger(double total_epsilon, std::shared_ptr<const Signer> signer)
    : signer_(std::move(signer)) {
  Require(std::isfinite(total_epsilon) && total_epsilon > 0.0, ErrorCode::kInvalidParams,
          "total epsilon must be positive");
  Require(signer_ != nullptr, ErrorCode::kSignatureError, "ledger needs a signer");
  state_.total_epsilon = total_epsilon;
}

BudgetLedger BudgetLedger::Restore(double total_epsilon, std::vector<ChainEntry> entries,
                                   std::shared_ptr<const Signer> signer) {
  BudgetLedger ledger(total_epsilon, std::move(signer));
  const ChainVerdict verdict = VerifyChain(entries, std::nullopt, ledger.signer_.get());
  Require(verdict.valid, ErrorCode::kProtocolError,
          "cannot restore ledger: entry " +
              std::to_string(verdict.first_broken_index.value_or(0)) + ": " +
              verdict.reason);
  for (const ChainEntry& e : entries) {
    ledger.tx_index_[e.transaction.tx_id] = e.index;
    ledger.Account(e.transaction);
  }
  ledger.entries_ = std::move(entries);
  Require(ledger.state_.reserved <= total_epsilon, ErrorCode::kProtocolError,
          "persisted reservations exceed the total budget");
  return ledger;
}

ReservationToken BudgetLedger::PrecheckAndReserve(double epsilon,
                                                  const TxMetadata& metadata, Rng& rng,
                                                  std::int64_t timestamp_ns) {
  RequireNonNegativeEpsilon(epsilon);
  Require(state_.reserved + epsilon <= state_.total_epsilon, ErrorCode::kBudgetExhausted,
          "budget exhausted: reserved " + std::to_string(state_.reserved) + " + requested " +
              std::to_string(epsilon) + " > total " + std::to_string(state_.total_epsilon));
  LedgerTransaction tx;
  tx.tx_id = NewTxId(rng);
  tx.timestamp_ns = timestamp_ns;
  tx.op_type = OpType::kBudgetUpdate;
  tx.privacy_params = TxPrivacyParams{epsilon, 0.0, "reservation", 0.0};
  tx.metadata = metadata;
  SignTransaction(tx, *signer_);
  Append(tx);
  return {tx.tx_id, epsilon};
}

const ChainEntry& BudgetLedger::Commit(const LedgerTransaction& tx) {
  Require(VerifyTransaction(tx, *signer_), ErrorCode::kSignatureError,
          "transaction signature does not verify");
  ValidateTransaction(tx);
  Require(!tx_index_.contains(tx.tx_id), ErrorCode::kProtocolError,
          "duplicate tx_id " + FormatTxId(tx.tx_id));
  switch (tx.op_type) {
    case OpType::kDPQuery: {
      const auto it = open_reservations_.find(tx.reservation_ref);
      Require(!IsZero(tx.reservation_ref) && it != open_reservations_.end(),
              ErrorCode::kProtocolError, "DPQuery has no matching open reservation");
      Require(tx.privacy_params->epsilon <= it->second, ErrorCode::kProtocolError,
              "DPQuery epsilon exceeds its reservation");
      break;
    }
    case OpType::kBudgetUpdate:
      Fail(ErrorCode::kProtocolError, "budget updates are created by PrecheckAndReserve");
    case OpType::kAccessRequest:
      Require(EvaluateAccess(tx), ErrorCode::kProtocolError, "access denied by policy");
      break;
    case OpType::kDataIngestion:
      break;
  }
  return Append(tx);
}

const ChainEntry& BudgetLedger::CommitQuery(const ReservationToken& token,
                                            const TxPrivacyParams& params,
                                            const Digest& result_digest,
                                            const TxMetadata& metadata, Rng& rng,
                                            std::int64_t timestamp_ns) {
  LedgerTransaction tx;
  tx.tx_id = NewTxId(rng);
  tx.timestamp_ns = timestamp_ns;
  tx.op_type = OpType::kDPQuery;
  tx.payload_digest = result_digest;
  tx.privacy_params = params;
  tx.metadata = metadata;
  tx.reservation_ref = token.reservation_id;
  SignTransaction(tx, *signer_);
  return Commit(tx);
}

const ChainEntry& BudgetLedger::Record(OpType op, const Digest& payload_digest,
                                       const TxMetadata& metadata, Rng& rng,
                                       std::int64_t timestamp_ns) {
  Require(op == OpType::kDataIngestion || op == OpType::kAccessRequest,
          ErrorCode::kProtocolError, "Record accepts DataIngestion or AccessRequest");
  LedgerTransaction tx;
  tx.tx_id = NewTxId(rng);
  tx.timestamp_ns = timestamp_ns;
  tx.op_type = op;
  tx.payload_digest = payload_digest;
  tx.metadata = metadata;
  SignTransaction(tx, *signer_);
  return Commit(tx);
}

Digest BudgetLedger::head_hash() const {
  return entries_.empty() ? kZeroDigest : entries_.back().entry_hash;
}

const ChainEntry& BudgetLedger::Append(const LedgerTransaction& tx) {
  ChainEntry e;
  e.index = entries_.size();
  e.transaction = tx;
  e.prev_hash = head_hash();
  e.entry_hash = ComputeEntryHash(e.index, e.prev_hash, e.transaction);
  tx_index_[tx.tx_id] = e.index;
  Account(tx);
  entries_.push_back(std::move(e));
  return entries_.back();
}

// Must stay in step with Replay so live and replayed states agree exactly.
void BudgetLedger::Account(const LedgerTransaction& tx) {
  ++state_.count_by_op[tx.op_type];
  const double eps = tx.privacy_params ? tx.privacy_params->epsilon : 0.0;
  state_.epsilon_by_op[tx.op_type] += eps;
  if (tx.op_type == OpType::kDPQuery) {
    state_.cumulative_spent += eps;
    open_reservations_.erase(tx.reservation_ref);
  }
  if (tx.op_type == OpType::kBudgetUpdate) {
    state_.reserved += eps;
    open_reservations_[tx.tx_id] = eps;
  }
}

Bytes SerializeRecord(const ChainEntry& entry) {
  ByteWriter body;
  body.U64(entry.index);
  body.Raw(entry.prev_hash);
  body.Raw(entry.entry_hash);
  body.Blob(CanonicalBytes(entry.transaction));
  ByteWriter w;
  w.Blob(body.bytes());
  return w.Take();
}

Bytes SerializeChain(double total_epsilon, std::span<const ChainEntry> entries) {
  ByteWriter w;
  w.Raw(std::span(reinterpret_cast<const std::uint8_t*>(kMagic), sizeof(kMagic)));
  w.U32(kFileVersion);
  w.F64(total_epsilon);
  w.Raw(Sha256(w.bytes()));
  for (const ChainEntry& e : entries) w.Raw(SerializeRecord(e));
  return w.Take();
}

ChainFile ParseChain(std::span<const std::uint8_t> bytes) {
  ChainFile file;
  ByteReader header(bytes);
  try {
    std::array<std::uint8_t, sizeof(kMagic)> magic{};
    header.Raw(magic);
    Require(std::equal(magic.begin(), magic.end(), kMagic), ErrorCode::kParseError,
            "bad magic");
    const std::uint32_t version = header.U32();
    Require(version == kFileVersion, ErrorCode::kParseError,
            "unsupported file version " + std::to_string(version));
    file.total_epsilon = header.F64();
    Digest checksum{};
    header.Raw(checksum);
    Require(checksum == Sha256(bytes.first(kHeaderBodySize)), ErrorCode::kParseError,
            "header checksum mismatch");
  } catch (const Error& e) {
    file.failure = ParseFailure{std::nullopt, header.offset(), e.what()};
    return file;
  }

  std::size_t pos = header.position();
  for (std::uint64_t k = 0; pos < bytes.size(); ++k) {
    ByteReader outer(bytes.subspan(pos), pos);
    try {
      const std::uint32_t len = outer.U32();
      Require(len <= outer.remaining(), ErrorCode::kParseError,
              "record length " + std::to_string(len) + " runs past end of file");
      ByteReader r(bytes.subspan(pos + 4, len), pos + 4);
      ChainEntry e;
      e.index = r.U64();
      r.Raw(e.prev_hash);
      r.Raw(e.entry_hash);
      const Bytes tx = r.Blob();
      Require(r.done(), ErrorCode::kParseError,
              "record body shorter than its declared length");
      e.transaction = ParseTransaction(tx);
      file.entries.push_back(std::move(e));
      pos += 4 + len;
    } catch (const Error& e) {
      file.failure = ParseFailure{k, pos, e.what()};
      return file;
    }
  }
  return file;
}

void SaveChain(const std::string& path, double total_epsilon,
               std::span<const ChainEntry> entries) {
  const Bytes bytes = SerializeChain(total_epsilon, entries);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    Require(static_cast<bool>(out), ErrorCode::kInvalidInput, "cannot write " + tmp);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    Require(static_cast<bool>(out), ErrorCode::kInvalidInput, "write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

ChainFile ReadChainFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(static_cast<bool>(in), ErrorCode::kParseError,
          "cannot open chain file " + path + " at byte offset 0");
  const Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ParseChain(bytes);
}

ChainFile LoadChain(const std::string& path) {
  ChainFile file = ReadChainFile(path);
  if (file.failure) {
    const auto& f = *file.failure;
    Fail(ErrorCode::kParseError,
         (f.record_index ? "record " + std::to_string(*f.record_index) : "header") +
             " at byte offset " + std::to_string(f.byte_offset) + ": " + f.message);
  }
  return file;
}

AuditReport AuditChain(const ChainFile& file, const Signer* signer,
                       const std::optional<Digest>& expected_head) {
  AuditReport report;
  report.parse_failure = file.failure;
  report.entries = file.entries.size();
  report.verdict = VerifyChain(file.entries, expected_head, signer);
  if (file.failure) {
    const auto bad = file.failure->record_index;
    if (!bad) {
      report.verdict = ChainVerdict{false, std::nullopt, "header: " + file.failure->message};
    } else if (report.verdict.valid || *bad < *report.verdict.first_broken_index) {
      report.verdict = ChainVerdict{false, bad, "parse: " + file.failure->message};
    }
  }
  std::size_t usable = file.entries.size();
  if (report.verdict.first_broken_index) {
    usable = std::min<std::size_t>(usable, *report.verdict.first_broken_index);
  }
  const auto prefix = std::span(file.entries).first(usable);
  report.state = Replay(prefix, file.total_epsilon);
  report.head_hash = prefix.empty() ? kZeroDigest : prefix.back().entry_hash;
  return report;
}

std::string ExportJson(double total_epsilon, std::span<const ChainEntry> entries) {
  nlohmann::ordered_json doc;
  doc["total_epsilon"] = total_epsilon;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const ChainEntry& e : entries) {
    const LedgerTransaction& tx = e.transaction;
    nlohmann::ordered_json j;
    j["index"] = e.index;
    j["tx_id"] = FormatTxId(tx.tx_id);
    j["timestamp_ns"] = tx.timestamp_ns;
    j["op_type"] = OpTypeName(tx.op_type);
    j["payload_digest"] = ToHex(tx.payload_digest);
    if (tx.privacy_params) {
      j["privacy_params"] = {{"epsilon", tx.privacy_params->epsilon},
                             {"delta", tx.privacy_params->delta},
                             {"noise_type", tx.privacy_params->noise_type},
                             {"sensitivity", tx.privacy_params->sensitivity}};
    } else {
      j["privacy_params"] = nullptr;
    }
    j["metadata"] = {{"device_id", tx.metadata.device_id},
                     {"layer", LayerName(tx.metadata.layer)},
                     {"purpose", tx.metadata.purpose}};
    j["reservation_ref"] = IsZero(tx.reservation_ref) ? "" : FormatTxId(tx.reservation_ref);
    j["signature"] = ToHex(tx.signature);
    j["prev_hash"] = ToHex(e.prev_hash);
    j["entry_hash"] = ToHex(e.entry_hash);
    doc["entries"].push_back(std::move(j));
  }
  return doc.dump(2);
}

}  // namespace dphealth::ledger
