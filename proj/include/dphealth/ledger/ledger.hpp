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

#ifndef DPHEALTH_LEDGER_LEDGER_HPP_
#define DPHEALTH_LEDGER_LEDGER_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dphealth/ledger/crypto.hpp"
#include "dphealth/ledger/transaction.hpp"
#include "dphealth/random.hpp"

namespace dphealth::ledger {

struct ChainEntry {
  std::uint64_t index = 0;
  LedgerTransaction transaction;
  Digest prev_hash{};
  Digest entry_hash{};

  bool operator==(const ChainEntry&) const = default;
};

// SHA-256 over u64 index, prev_hash and the canonical transaction bytes.
Digest ComputeEntryHash(std::uint64_t index, const Digest& prev_hash,
                        const LedgerTransaction& tx);

struct ChainVerdict {
  bool valid = true;
  std::optional<std::uint64_t> first_broken_index;
  std::string reason;
};

// Recomputes indices, hashes and linkage; with a signer, also checks every
// signature. A chain is valid on its own as a prefix of a longer one;
// `expected_head` (an out-of-band anchored entry hash) also catches
// truncation and extension, reported at the first index past the anchor
// or at chain.size() when the anchor is missing.
ChainVerdict VerifyChain(std::span<const ChainEntry> chain,
                         const std::optional<Digest>& expected_head = std::nullopt,
                         const Signer* signer = nullptr);

struct BudgetLedgerState {
  double total_epsilon = 0.0;
  // Sum of DPQuery epsilons.
  double cumulative_spent = 0.0;
  // Sum of BudgetUpdate (reservation) epsilons.
  double reserved = 0.0;
  std::map<OpType, double> epsilon_by_op;
  std::map<OpType, std::uint64_t> count_by_op;

  bool operator==(const BudgetLedgerState&) const = default;
};

// Recomputes the budget state from committed entries in chain order.
BudgetLedgerState Replay(std::span<const ChainEntry> chain, double total_epsilon);

struct ReservationToken {
  TxId reservation_id{};
  double epsilon = 0.0;
};

// Placeholder attribute-based policy check; always allows.
bool EvaluateAccess(const LedgerTransaction& request);

// Single-writer, append-only ledger. Budget is gated on reservations: a
// request is accepted iff reserved + request <= total, so spent, which never
// exceeds reserved, cannot pass the total.
class BudgetLedger {
 public:
  BudgetLedger(double total_epsilon, std::shared_ptr<const Signer> signer);

  // Rebuilds a ledger from persisted entries. Throws kProtocolError if the
  // chain fails verification. Reservations no DPQuery references are open.
  static BudgetLedger Restore(double total_epsilon, std::vector<ChainEntry> entries,
                              std::shared_ptr<const Signer> signer);

  // Appends a signed BudgetUpdate entry; throws kBudgetExhausted and appends
  // nothing if the request does not fit.
  ReservationToken PrecheckAndReserve(double epsilon, const TxMetadata& metadata,
                                      Rng& rng, std::int64_t timestamp_ns);

  // Signature, then protocol checks: unique tx_id, DPQuery consumes an open
  // reservation with at least its epsilon, BudgetUpdate only through
  // PrecheckAndReserve, AccessRequest must pass EvaluateAccess.
  const ChainEntry& Commit(const LedgerTransaction& tx);

  // Builds, signs and commits a DPQuery that consumes `token`.
  const ChainEntry& CommitQuery(const ReservationToken& token,
                                const TxPrivacyParams& params,
                                const Digest& result_digest,
                                const TxMetadata& metadata, Rng& rng,
                                std::int64_t timestamp_ns);

  // Builds, signs and commits a DataIngestion or AccessRequest entry.
  const ChainEntry& Record(OpType op, const Digest& payload_digest,
                           const TxMetadata& metadata, Rng& rng,
                           std::int64_t timestamp_ns);

  const std::vector<ChainEntry>& entries() const { return entries_; }
  // All zero for an empty chain.
  Digest head_hash() const;
  const BudgetLedgerState& state() const { return state_; }
  double total() const { return state_.total_epsilon; }
  double spent() const { return state_.cumulative_spent; }
  double reserved() const { return state_.reserved; }
  const Signer& signer() const { return *signer_; }

 private:
  const ChainEntry& Append(const LedgerTransaction& tx);
  void Account(const LedgerTransaction& tx);

  std::shared_ptr<const Signer> signer_;
  std::vector<ChainEntry> entries_;
  BudgetLedgerState state_;
  std::map<TxId, double> open_reservations_;
  std::map<TxId, std::uint64_t> tx_index_;
};

struct ParseFailure {
  // Record index the failure belongs to; nullopt for the file header.
  std::optional<std::uint64_t> record_index;
  std::size_t byte_offset = 0;
  std::string message;
};

struct ChainFile {
  double total_epsilon = 0.0;
  std::vector<ChainEntry> entries;
  // Set when parsing stopped early; `entries` then holds the readable prefix.
  std::optional<ParseFailure> failure;
};

Bytes SerializeChain(double total_epsilon, std::span<const ChainEntry> entries);
Bytes SerializeRecord(const ChainEntry& entry);
// Never throws on malformed content; see ChainFile::failure.
ChainFile ParseChain(std::span<const std::uint8_t> bytes);

void SaveChain(const std::string& path, double total_epsilon,
               std::span<const ChainEntry> entries);
// Reads and parses; throws kParseError (with offset) only if the file cannot
// be opened.
ChainFile ReadChainFile(const std::string& path);
// Strict form of ReadChainFile: any parse failure throws kParseError.
ChainFile LoadChain(const std::string& path);

struct AuditReport {
  ChainVerdict verdict;
  BudgetLedgerState state;
  std::size_t entries = 0;
  Digest head_hash{};
  std::optional<ParseFailure> parse_failure;
};

AuditReport AuditChain(const ChainFile& file, const Signer* signer = nullptr,
                       const std::optional<Digest>& expected_head = std::nullopt);

// Human-auditable JSON rendering of every entry.
std::string ExportJson(double total_epsilon, std::span<const ChainEntry> entries);

}  // namespace dphealth::ledger

#endif  // DPHEALTH_LEDGER_LEDGER_HPP_
