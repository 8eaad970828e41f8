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

#include "harness/evidence.hpp"

#include "contracts/usage_contract.hpp"

namespace dm::harness {

const RecordState* Evidence::record(const tee::Binding& b) const {
  for (const auto& r : records) {
    if (r.binding == b) return &r;
  }
  return nullptr;
}

Evidence collect_evidence(const protocol::Market& market) {
  Evidence ev;
  const auto& world = *market.world;
  ev.transcript = world.transcript();
  for (const auto& m : world.net().sent()) ev.visible.push_back(m.payload);
  for (const auto& r : world.ledger().finalized()) ev.visible.push_back(r.tx.serialize());
  for (const auto& [desc, wire] : world.storage()) ev.visible.push_back(wire);

  for (const auto* o : market.owners) {
    ev.data_keys.emplace_back(o->data_key().bytes().begin(), o->data_key().bytes().end());
    ev.canaries.push_back(o->table().canary);
  }
  for (const auto* e : world.enclaves()) {
    ev.enclaves.push_back(EnclaveState{e->instance(), e->host(), "", e->sanitized(), e->halted(),
                                       e->key_store_size(), e->plaintext_buffer_size()});
    for (const auto& op : {"column-stats", "broker-keystore"}) {
      if (world.manifest().measurement(op) == e->measurement()) ev.enclaves.back().program = op;
    }
  }
  const auto& ledger = world.ledger();
  for (std::uint32_t c = 0; c < ledger.contract_count(); ++c) {
    const auto* uc = ledger.contract_as<contracts::UsageContract>(ContractId{c});
    if (!uc) continue;
    for (const auto& r : uc->records()) {
      ev.records.push_back(RecordState{tee::Binding{ContractId{c}, r.idx}, r.status,
                                       r.result_key_hash, r.result_key, r.escrow});
    }
  }
  if (market.dc) {
    ev.dc_bindings = market.dc->bindings();
    ev.dc_bundle = market.dc->verified_bundle();
    ev.dc_plaintext = market.dc->plaintext();
  }
  ev.minted = ledger.minted();
  ev.total_supply = ledger.total_supply();
  for (std::uint32_t a = 0; a < ledger.account_count(); ++a) {
    ev.balances[account_label(AccountId{a})] = ledger.balance(AccountId{a});
  }
  return ev;
}

}  // namespace dm::harness
