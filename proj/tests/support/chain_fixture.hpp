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

#pragma once

#include <deque>
#include <string>

#include "contracts/calls.hpp"
#include "contracts/market_contracts.hpp"
#include "crypto/drbg.hpp"
#include "ledger/ledger.hpp"

namespace dm::testing {

struct Party {
  crypto::SigningKey key;
  AccountId id;
  std::uint64_t nonce = 0;
};

// A ledger with both market contract kinds installed and helpers that submit
// a call and finalize it immediately.
struct ChainFixture {
  ledger::Ledger ledger;
  crypto::Drbg rng{2024};
  std::deque<Party> parties;

  explicit ChainFixture(ledger::LedgerConfig cfg = {}) : ledger(cfg) {
    contracts::register_market_contracts(ledger);
  }

  Party& add(Amount balance) {
    crypto::SigningKey key(rng.secret_seed());
    auto id = ledger.create_account(key.public_key(), balance);
    parties.push_back(Party{key, id});
    return parties.back();
  }

  ledger::SignedTransaction tx(Party& p, ledger::Target target, const contracts::calls::Call& c,
                               Amount value = 0) {
    return ledger::make_transaction(p.key, p.id, target, c.function, c.args, value, ++p.nonce);
  }

  ledger::Receipt exec(Party& p, ledger::Target target, const contracts::calls::Call& c,
                       Amount value = 0) {
    ledger.submit_tx(tx(p, target, c, value));
    auto r = ledger.advance(ledger.config().finalization_delay);
    if (r.size() != 1) throw std::logic_error("expected one receipt");
    return r.front();
  }

  ContractId deploy(Party& p, const contracts::calls::Call& c) {
    auto r = exec(p, ledger::Deploy{}, c);
    if (!r.created) throw std::logic_error("deploy reverted: " + r.status_label());
    return *r.created;
  }

  void wait(Millis dt) { ledger.advance(dt); }
};

inline crypto::Digest stats_op() { return crypto::hash(std::string_view("test-operation")); }

}  // namespace dm::testing
