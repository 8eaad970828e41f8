// Copyright 2026 The datamarket-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"

#include <deque>

#include "crypto/drbg.hpp"
#include "ledger/ledger.hpp"

using namespace dm;
using namespace dm::ledger;
using namespace std::chrono_literals;

namespace {

// Keeps deposits; "Withdraw" pays the caller; "Fail" reverts after staging.
class Vault final : public Contract {
 public:
  std::string_view kind() const override { return "vault"; }
  std::unique_ptr<Contract> clone() const override { return std::make_unique<Vault>(*this); }
  void call(CallContext& ctx, std::string_view fn, ByteReader& args) override {
    if (fn == "Deposit") {
      deposits += ctx.value();
      ctx.emit("deposit " + std::to_string(ctx.value()));
    } else if (fn == "Withdraw") {
      auto amount = args.i64();
      ctx.transfer(ctx.sender(), amount);
      deposits -= amount;
    } else if (fn == "Fail") {
      deposits += 1000;
      ctx.transfer(ctx.sender(), 1);
      revert(ErrorCode::kWrongState);
    } else {
      revert(ErrorCode::kUnknownFunction);
    }
  }
  std::string dump() const override { return "vault " + std::to_string(deposits); }

  Amount deposits = 0;
};

struct Party {
  crypto::SigningKey key;
  AccountId id;
  std::uint64_t nonce = 0;
};

struct Fixture {
  Ledger ledger;
  crypto::Drbg rng{1};
  std::deque<Party> parties;

  explicit Fixture(LedgerConfig cfg = {}) : ledger(cfg) {
    ledger.register_factory("vault", [](CallContext&, ByteReader&) {
      return std::make_unique<Vault>();
    });
  }

  Party& add(Amount balance) {
    crypto::SigningKey key(rng.secret_seed());
    auto id = ledger.create_account(key.public_key(), balance);
    parties.push_back(Party{key, id});
    return parties.back();
  }

  SignedTransaction tx(Party& p, Target target, std::string fn, Bytes args = {},
                       Amount value = 0) {
    return make_transaction(p.key, p.id, target, std::move(fn), std::move(args), value,
                            ++p.nonce);
  }

  ContractId deploy(Party& p) {
    ledger.submit_tx(tx(p, Deploy{}, "vault"));
    auto r = ledger.advance(ledger.config().finalization_delay);
    REQUIRE(r.size() == 1);
    REQUIRE(r[0].created.has_value());
    return *r[0].created;
  }
};

ErrorCode submit_error(Ledger& ledger, const SignedTransaction& tx) {
  try {
    ledger.submit_tx(tx);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

}  // namespace

TEST_CASE("submit_tx validation rejects without state change") {
  Fixture f;
  auto& alice = f.add(100 * kUnitsPerEther);
  auto& bob = f.add(0);

  SUBCASE("valid payment with 0.01 ether is accepted as pending") {
    auto t = f.ledger.submit_tx(f.tx(alice, bob.id, "pay", {}, 10'000));
    CHECK(t.due == 15000ms);
    CHECK(f.ledger.pending_count() == 1);
    CHECK(f.ledger.balance(alice.id) == 100 * kUnitsPerEther);
  }

  SUBCASE("insufficient funds") {
    CHECK(submit_error(f.ledger, f.tx(bob, alice.id, "pay", {}, 1)) ==
          ErrorCode::kInsufficientFunds);
    CHECK(f.ledger.balance(bob.id) == 0);
    CHECK(f.ledger.pending_count() == 0);
  }

  SUBCASE("replayed transaction has a stale nonce") {
    auto t = f.tx(alice, bob.id, "pay", {}, 5);
    CHECK(submit_error(f.ledger, t) == ErrorCode::kOk);
    CHECK(submit_error(f.ledger, t) == ErrorCode::kBadNonce);
    CHECK(f.ledger.pending_count() == 1);
  }

  SUBCASE("signature from another key") {
    auto t = make_transaction(bob.key, alice.id, bob.id, "pay", {}, 5, 1);
    CHECK(submit_error(f.ledger, t) == ErrorCode::kBadSignature);
  }

  SUBCASE("tampered field breaks the signature") {
    auto t = f.tx(alice, bob.id, "pay", {}, 5);
    t.value = 6;
    CHECK(submit_error(f.ledger, t) == ErrorCode::kBadSignature);
  }

  SUBCASE("unknown sender") {
    auto t = make_transaction(alice.key, AccountId{99}, bob.id, "pay", {}, 5, 1);
    CHECK(submit_error(f.ledger, t) == ErrorCode::kUnknownAccount);
  }
}

TEST_CASE("advance finalizes after the configured delay") {
  Fixture f;
  auto& alice = f.add(1000);
  auto& bob = f.add(0);
  f.ledger.submit_tx(f.tx(alice, bob.id, "pay", {}, 10));

  CHECK(f.ledger.advance(0ms).empty());
  CHECK(f.ledger.pending_count() == 1);
  CHECK(f.ledger.advance(14999ms).empty());
  auto r = f.ledger.advance(1ms);
  REQUIRE(r.size() == 1);
  CHECK(r[0].ok());
  CHECK(r[0].time == 15000ms);
  CHECK(f.ledger.balance(bob.id) == 10);
  CHECK(f.ledger.balance(alice.id) == 990);
  CHECK_THROWS_AS(f.ledger.advance(-1ms), Error);
}

TEST_CASE("congestion penalty grows delay with queue length") {
  Fixture f(LedgerConfig{15000ms, 100ms});
  auto& alice = f.add(1000);
  auto& bob = f.add(0);
  CHECK(f.ledger.submit_tx(f.tx(alice, bob.id, "pay", {}, 1)).due == 15000ms);
  CHECK(f.ledger.submit_tx(f.tx(alice, bob.id, "pay", {}, 1)).due == 15100ms);
  CHECK(f.ledger.submit_tx(f.tx(alice, bob.id, "pay", {}, 1)).due == 15200ms);
}

TEST_CASE("same window transactions finalize in (submission, sender) order, reproducibly") {
  auto run = [] {
    Fixture f;
    auto& a = f.add(1000);
    auto& b = f.add(1000);
    auto& c = f.add(0);
    // Submitted at the same instant, higher sender id first.
    f.ledger.submit_tx(f.tx(b, c.id, "pay", {}, 2));
    f.ledger.submit_tx(f.tx(a, c.id, "pay", {}, 1));
    auto r = f.ledger.advance(15000ms);
    REQUIRE(r.size() == 2);
    CHECK(r[0].tx.sender == a.id);
    CHECK(r[1].tx.sender == b.id);
    return f.ledger.export_log();
  };
  auto first = run();
  CHECK(first == run());
  CHECK(first == "15000|a0|a2|pay|1|success\n15000|a1|a2|pay|2|success\n");
}

TEST_CASE("contract calls move value into escrow and revert atomically") {
  Fixture f;
  auto& alice = f.add(1000);
  auto vault = f.deploy(alice);

  f.ledger.submit_tx(f.tx(alice, vault, "Deposit", {}, 300));
  auto r = f.ledger.advance(15000ms);
  REQUIRE(r.size() == 1);
  CHECK(r[0].ok());
  CHECK(r[0].events == std::vector<std::string>{"deposit 300"});
  CHECK(f.ledger.escrow(vault) == 300);
  CHECK(f.ledger.balance(alice.id) == 700);

  // The call stages a transfer and a state change, then reverts.
  f.ledger.submit_tx(f.tx(alice, vault, "Fail", {}, 50));
  r = f.ledger.advance(15000ms);
  REQUIRE(r.size() == 1);
  CHECK_FALSE(r[0].ok());
  CHECK(r[0].reason == ErrorCode::kWrongState);
  CHECK(f.ledger.escrow(vault) == 300);
  CHECK(f.ledger.balance(alice.id) == 700);
  CHECK(f.ledger.contract_as<Vault>(vault)->deposits == 300);

  ByteWriter w;
  w.i64(301);
  f.ledger.submit_tx(f.tx(alice, vault, "Withdraw", w.take()));
  r = f.ledger.advance(15000ms);
  CHECK(r[0].reason == ErrorCode::kInsufficientFunds);
  CHECK(f.ledger.escrow(vault) == 300);
}

TEST_CASE("balance reads") {
  Fixture f;
  auto& alice = f.add(100);
  CHECK(f.ledger.balance(alice.id) == 100);
  CHECK_THROWS_AS(f.ledger.balance(AccountId{7}), Error);
}

TEST_CASE("currency is conserved across random transaction streams") {
  Fixture f;
  for (int i = 0; i < 5; ++i) f.add(10'000);
  auto vault = f.deploy(f.parties[0]);
  const Amount minted = f.ledger.minted();
  crypto::Drbg rng(77);
  for (int step = 0; step < 300; ++step) {
    auto& p = f.parties[rng.uniform(f.parties.size())];
    auto kind = rng.uniform(3);
    Amount v = static_cast<Amount>(rng.uniform(2000));
    try {
      if (kind == 0) {
        f.ledger.submit_tx(f.tx(p, f.parties[rng.uniform(5)].id, "pay", {}, v));
      } else if (kind == 1) {
        f.ledger.submit_tx(f.tx(p, vault, "Deposit", {}, v));
      } else {
        ByteWriter w;
        w.i64(v);
        f.ledger.submit_tx(f.tx(p, vault, rng.chance(1, 4) ? "Fail" : "Withdraw", w.take()));
      }
    } catch (const Error&) {
    }
    for (const auto& r : f.ledger.advance(Millis{static_cast<long>(rng.uniform(20000))})) {
      CHECK(r.supply_after == minted);
    }
    CHECK(f.ledger.total_supply() == minted);
  }
  for (std::size_t i = 0; i < f.parties.size(); ++i) CHECK(f.ledger.balance(f.parties[i].id) >= 0);
}

TEST_CASE("signed transactions survive serialization") {
  Fixture f;
  auto& alice = f.add(10);
  auto t = f.tx(alice, ContractId{3}, "Request", Bytes{1, 2, 3}, 7);
  auto back = SignedTransaction::parse(t.serialize());
  CHECK(back.serialize() == t.serialize());
  CHECK(back.id() == t.id());
  auto wire = t.serialize();
  wire.pop_back();
  CHECK_THROWS_AS(SignedTransaction::parse(wire), Error);
}
