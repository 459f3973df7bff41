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

#include <cstring>
#include <filesystem>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "dphealth/ledger/crypto.hpp"
#include "dphealth/ledger/ledger.hpp"
#include "dphealth/ledger/transaction.hpp"
#include "test_support.hpp"

namespace dphealth::ledger {
namespace {

using testing::CodeOf;

Bytes Key(const std::string& s) { return {s.begin(), s.end()}; }

std::shared_ptr<const Signer> TestSigner() {
  return std::make_shared<HmacSha256Signer>(Key("test key"));
}

TxMetadata Meta() { return {"edge-01", Layer::kEdge, "unit test"}; }

TEST(CryptoTest, Sha256KnownVectors) {
  EXPECT_EQ(ToHex(Sha256("abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(ToHex(Sha256("")),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(CryptoTest, HmacRfc4231Case2) {
  const HmacSha256Signer s(Key("Jefe"));
  const std::string msg = "what do ya want for nothing?";
  const Bytes m(msg.begin(), msg.end());
  EXPECT_EQ(ToHex(s.Sign(m)),
            "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
}

TEST(CryptoTest, VerifyRejectsWrongKeyAndModifiedMessage) {
  const HmacSha256Signer a(Key("k1")), b(Key("k2"));
  Bytes m = Key("payload");
  const Bytes sig = a.Sign(m);
  EXPECT_TRUE(a.Verify(m, sig));
  EXPECT_FALSE(b.Verify(m, sig));
  m[0] ^= 1;
  EXPECT_FALSE(a.Verify(m, sig));
  EXPECT_FALSE(a.Verify(Key("payload"), Bytes(sig.begin(), sig.end() - 1)));
}

TEST(CryptoTest, HexRoundTripAndErrors) {
  const Bytes b{0x00, 0xab, 0xff};
  EXPECT_EQ(FromHex(ToHex(b)), b);
  EXPECT_EQ(CodeOf([] { FromHex("abc"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { FromHex("zz"); }), ErrorCode::kParseError);
}

LedgerTransaction QueryTx(Rng& rng) {
  LedgerTransaction tx;
  tx.tx_id = NewTxId(rng);
  tx.timestamp_ns = 1700000000123456789;
  tx.op_type = OpType::kDPQuery;
  tx.payload_digest = Sha256("result");
  tx.privacy_params = TxPrivacyParams{5.0, 1e-5, "laplace", 6.47};
  tx.metadata = Meta();
  tx.reservation_ref = NewTxId(rng);
  return tx;
}

TEST(TransactionTest, CanonicalRoundTripIsBitExact) {
  Rng rng(1);
  LedgerTransaction tx = QueryTx(rng);
  // Values whose decimal forms do not round-trip trivially.
  tx.privacy_params->epsilon = 0.1 + 0.2;
  tx.privacy_params->sensitivity = std::nextafter(6.47, 7.0);
  SignTransaction(tx, *TestSigner());
  const LedgerTransaction back = ParseTransaction(CanonicalBytes(tx));
  EXPECT_EQ(back, tx);
  EXPECT_EQ(std::memcmp(&back.privacy_params->epsilon, &tx.privacy_params->epsilon,
                        sizeof(double)),
            0);
}

TEST(TransactionTest, TruncationReportsOffset) {
  Rng rng(2);
  LedgerTransaction tx = QueryTx(rng);
  SignTransaction(tx, *TestSigner());
  const Bytes bytes = CanonicalBytes(tx);
  for (std::size_t cut : {std::size_t{0}, std::size_t{5}, bytes.size() - 1}) {
    try {
      ParseTransaction(std::span(bytes).first(cut));
      FAIL() << "cut " << cut;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParseError);
      EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
    }
  }
  Bytes longer = bytes;
  longer.push_back(0);
  EXPECT_EQ(CodeOf([&] { ParseTransaction(longer); }), ErrorCode::kParseError);
}

TEST(TransactionTest, DpQueryNeedsPositiveEpsilon) {
  Rng rng(3);
  LedgerTransaction tx = QueryTx(rng);
  tx.privacy_params.reset();
  EXPECT_EQ(CodeOf([&] { ValidateTransaction(tx); }), ErrorCode::kProtocolError);
  tx.privacy_params = TxPrivacyParams{0.0, 0.0, "laplace", 1.0};
  EXPECT_EQ(CodeOf([&] { ValidateTransaction(tx); }), ErrorCode::kProtocolError);
}

TEST(TransactionTest, TxIdIsVersion4) {
  Rng rng(4);
  const TxId id = NewTxId(rng);
  EXPECT_EQ(id[6] >> 4, 4);
  EXPECT_EQ(id[8] >> 6, 2);
  EXPECT_EQ(FormatTxId(id).size(), 36u);
}

// Ledger with `queries` reserve/commit pairs after one ingestion entry.
BudgetLedger Populated(int queries, double eps, std::uint64_t seed) {
  BudgetLedger l(1e9, TestSigner());
  Rng rng(seed);
  l.Record(OpType::kDataIngestion, Sha256("data"), Meta(), rng, 1);
  for (int q = 0; q < queries; ++q) {
    const auto token = l.PrecheckAndReserve(eps, Meta(), rng, 2 + 2 * q);
    l.CommitQuery(token, {eps, 0.0, "laplace", 1.0}, Sha256("r"), Meta(), rng, 3 + 2 * q);
  }
  return l;
}

TEST(LedgerTest, GenesisAndChaining) {
  const BudgetLedger l = Populated(1, 1.0, 5);
  const auto& e = l.entries();
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0].index, 0u);
  EXPECT_EQ(e[0].prev_hash, Digest{});
  EXPECT_EQ(e[1].prev_hash, e[0].entry_hash);
  EXPECT_EQ(e[2].prev_hash, e[1].entry_hash);
  for (const auto& x : e) {
    EXPECT_EQ(x.entry_hash, ComputeEntryHash(x.index, x.prev_hash, x.transaction));
  }
  EXPECT_EQ(l.head_hash(), e.back().entry_hash);
}

TEST(LedgerTest, ReservationArithmetic) {
  BudgetLedger l(10.0, TestSigner());
  Rng rng(6);
  l.PrecheckAndReserve(5.0, Meta(), rng, 1);
  l.PrecheckAndReserve(5.0, Meta(), rng, 2);
  const auto before = l.entries().size();
  EXPECT_EQ(CodeOf([&] { l.PrecheckAndReserve(1e-9, Meta(), rng, 3); }),
            ErrorCode::kBudgetExhausted);
  EXPECT_EQ(l.entries().size(), before);

  BudgetLedger m(10.0, TestSigner());
  const auto t = m.PrecheckAndReserve(9.5, Meta(), rng, 1);
  m.CommitQuery(t, {9.5, 0.0, "laplace", 1.0}, Sha256("r"), Meta(), rng, 2);
  EXPECT_DOUBLE_EQ(m.spent(), 9.5);
  EXPECT_EQ(CodeOf([&] { m.PrecheckAndReserve(1.0, Meta(), rng, 3); }),
            ErrorCode::kBudgetExhausted);
}

TEST(LedgerTest, CommitProtocolChecks) {
  BudgetLedger l(10.0, TestSigner());
  Rng rng(7);
  // Query without a reservation.
  LedgerTransaction tx = QueryTx(rng);
  SignTransaction(tx, l.signer());
  EXPECT_EQ(CodeOf([&] { l.Commit(tx); }), ErrorCode::kProtocolError);
  // Forged signature.
  const auto token = l.PrecheckAndReserve(2.0, Meta(), rng, 1);
  tx.reservation_ref = token.reservation_id;
  tx.privacy_params->epsilon = 2.0;
  SignTransaction(tx, HmacSha256Signer(Key("other")));
  EXPECT_EQ(CodeOf([&] { l.Commit(tx); }), ErrorCode::kSignatureError);
  // Over-spending the reservation.
  tx.privacy_params->epsilon = 3.0;
  SignTransaction(tx, l.signer());
  EXPECT_EQ(CodeOf([&] { l.Commit(tx); }), ErrorCode::kProtocolError);
  // Valid, then replayed.
  tx.privacy_params->epsilon = 2.0;
  SignTransaction(tx, l.signer());
  l.Commit(tx);
  EXPECT_EQ(CodeOf([&] { l.Commit(tx); }), ErrorCode::kProtocolError);
  EXPECT_DOUBLE_EQ(l.spent(), 2.0);
}

TEST(LedgerTest, ReplayEqualsLiveState) {
  const BudgetLedger l = Populated(25, 0.37, 8);
  EXPECT_EQ(Replay(l.entries(), l.total()), l.state());
  EXPECT_EQ(l.state().count_by_op.at(OpType::kDPQuery), 25u);
  EXPECT_NEAR(l.spent(), 25 * 0.37, 1e-12);
}

TEST(VerifyTest, UntouchedChainIsValid) {
  const BudgetLedger l = Populated(50, 0.1, 9);
  ASSERT_GE(l.entries().size(), 100u);
  const auto v = VerifyChain(l.entries(), l.head_hash(), &l.signer());
  EXPECT_TRUE(v.valid) << v.reason;
}

TEST(VerifyTest, TamperedDigestFoundAtItsIndex) {
  const BudgetLedger l = Populated(50, 0.1, 10);
  std::vector<ChainEntry> chain = l.entries();
  chain[42].transaction.payload_digest[0] ^= 0x01;
  const auto v = VerifyChain(chain);
  EXPECT_FALSE(v.valid);
  EXPECT_EQ(v.first_broken_index, 42u);
}

TEST(VerifyTest, TruncationNeedsAnchoredHead) {
  const BudgetLedger l = Populated(10, 0.1, 11);
  std::vector<ChainEntry> chain = l.entries();
  chain.pop_back();
  EXPECT_TRUE(VerifyChain(chain).valid);
  const auto v = VerifyChain(chain, l.head_hash());
  EXPECT_FALSE(v.valid);
  EXPECT_EQ(v.first_broken_index, chain.size());
}

TEST(VerifyTest, ExtensionPastAnchorIsReported) {
  const BudgetLedger l = Populated(10, 0.1, 12);
  const Digest anchor = l.entries()[5].entry_hash;
  const auto v = VerifyChain(l.entries(), anchor);
  EXPECT_FALSE(v.valid);
  EXPECT_EQ(v.first_broken_index, 6u);
}

TEST(VerifyTest, ResignedForgeryCaughtBySigner) {
  BudgetLedger l = Populated(5, 0.1, 13);
  std::vector<ChainEntry> chain = l.entries();
  // Rewrite entry 3 with a foreign key and rebuild every later hash: the
  // hash chain is consistent again, only the signature gives it away.
  const HmacSha256Signer forger(Key("forger"));
  SignTransaction(chain[3].transaction, forger);
  for (std::size_t i = 3; i < chain.size(); ++i) {
    if (i > 0) chain[i].prev_hash = chain[i - 1].entry_hash;
    chain[i].entry_hash =
        ComputeEntryHash(chain[i].index, chain[i].prev_hash, chain[i].transaction);
  }
  EXPECT_TRUE(VerifyChain(chain).valid);
  const auto v = VerifyChain(chain, std::nullopt, &l.signer());
  EXPECT_FALSE(v.valid);
  EXPECT_EQ(v.first_broken_index, 3u);
}

TEST(RestoreTest, ReopenedLedgerContinues) {
  BudgetLedger l = Populated(3, 1.0, 14);
  Rng rng(99);
  const auto open = l.PrecheckAndReserve(1.0, Meta(), rng, 100);
  BudgetLedger r = BudgetLedger::Restore(l.total(), l.entries(), TestSigner());
  EXPECT_EQ(r.state(), l.state());
  EXPECT_EQ(r.head_hash(), l.head_hash());
  // The reservation left open before the restart can still be consumed.
  r.CommitQuery(open, {1.0, 0.0, "laplace", 1.0}, Sha256("r"), Meta(), rng, 101);
  EXPECT_DOUBLE_EQ(r.spent(), 4.0);

  std::vector<ChainEntry> bad = l.entries();
  bad[1].entry_hash[0] ^= 1;
  EXPECT_EQ(CodeOf([&] { BudgetLedger::Restore(l.total(), bad, TestSigner()); }),
            ErrorCode::kProtocolError);
}

TEST(FileTest, SaveLoadRoundTrip) {
  const BudgetLedger l = Populated(20, 0.25, 15);
  const auto path = std::filesystem::temp_directory_path() / "dphealth_chain.bin";
  SaveChain(path.string(), l.total(), l.entries());
  const ChainFile f = LoadChain(path.string());
  std::filesystem::remove(path);
  EXPECT_FALSE(f.failure);
  EXPECT_EQ(f.total_epsilon, l.total());
  EXPECT_EQ(f.entries, l.entries());
}

TEST(FileTest, CorruptHeaderAndTruncatedRecord) {
  const BudgetLedger l = Populated(4, 0.25, 16);
  Bytes bytes = SerializeChain(l.total(), l.entries());
  Bytes header_flip = bytes;
  header_flip[10] ^= 0x40;
  const ChainFile h = ParseChain(header_flip);
  ASSERT_TRUE(h.failure);
  EXPECT_FALSE(h.failure->record_index);
  EXPECT_FALSE(AuditChain(h).verdict.valid);

  bytes.resize(bytes.size() - 3);
  const ChainFile t = ParseChain(bytes);
  ASSERT_TRUE(t.failure);
  EXPECT_EQ(t.failure->record_index, l.entries().size() - 1);
  EXPECT_EQ(t.entries.size(), l.entries().size() - 1);
  const auto audit = AuditChain(t, &l.signer());
  EXPECT_FALSE(audit.verdict.valid);
  EXPECT_EQ(audit.verdict.first_broken_index, l.entries().size() - 1);
  EXPECT_EQ(audit.state, Replay(t.entries, l.total()));
  EXPECT_THROW(LoadChain("/nonexistent/dphealth.bin"), Error);
}

TEST(FileTest, ExportJsonListsEveryEntry) {
  const BudgetLedger l = Populated(2, 0.5, 17);
  const std::string json = ExportJson(l.total(), l.entries());
  EXPECT_NE(json.find("\"DPQuery\""), std::string::npos);
  EXPECT_NE(json.find(ToHex(l.head_hash())), std::string::npos);
}

}  // namespace
}  // namespace dphealth::ledger
