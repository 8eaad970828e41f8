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

#include "tee/enclave.hpp"
#include "tee/workload.hpp"

using namespace dm;
using namespace dm::tee;
using namespace std::chrono_literals;

namespace {

using i128 = __int128;

// Binary-search integer square root, deliberately unlike the Newton
// iteration the enclave uses.
std::int64_t floor_sqrt(i128 v) {
  std::int64_t lo = 0, hi = 4'000'000'000'000LL;
  while (lo < hi) {
    auto mid = lo + (hi - lo + 1) / 2;
    if (static_cast<i128>(mid) * mid <= v) lo = mid; else hi = mid - 1;
  }
  return lo;
}

// Two-pass reference statistics over the parsed tables.
std::vector<ColumnStats> oracle_stats(const std::vector<Table>& tables) {
  std::vector<ColumnStats> out;
  for (std::size_t c = 0; c < tables[0].columns.size(); ++c) {
    std::vector<std::int64_t> xs;
    for (const auto& t : tables) for (const auto& r : t.rows) xs.push_back(r[c]);
    const i128 n = static_cast<i128>(xs.size());
    i128 s = 0;
    for (auto x : xs) s += x;
    i128 dev = 0;
    for (auto x : xs) dev += (n * x - s) * (n * x - s);
    ColumnStats st;
    st.column = tables[0].columns[c];
    st.count = xs.size();
    st.mean = static_cast<std::int64_t>(s * 1000 / n);  // non-negative data
    st.stddev = floor_sqrt(dev * 1'000'000 / (n * n * n));
    out.push_back(st);
  }
  return out;
}

struct Rig {
  crypto::Drbg rng{31};
  MockIas ias{rng.secret_seed()};
  Platform cee{"cee-host", rng.secret_seed()};
  Platform db{"db-host", rng.secret_seed()};
  ProgramManifest manifest = default_manifest();
  std::uint64_t next_instance = 1;

  Rig() {
    ias.register_platform(cee.host(), cee.public_key());
    ias.register_platform(db.host(), db.public_key());
  }

  Enclave load(const Platform& host, EnclaveProgram program, bool trusted = true) {
    auto id = next_instance++;
    return Enclave(id, host.host(), std::move(program), rng.fork("enclave-" + std::to_string(id)),
                   ias.public_key(), trusted);
  }

  crypto::Digest nonce() { return crypto::Digest{rng.key_material()}; }

  AttestationReport attest(const Enclave& e, const Platform& host, const crypto::Digest& n) {
    return ias.verify(e.quote(n, host), 0ms);
  }
};

}  // namespace

TEST_CASE("fixed-point text") {
  CHECK(format_fixed(1234, 3) == "1.234");
  CHECK(format_fixed(5, 3) == "0.005");
  CHECK(format_fixed(-1500, 3) == "-1.500");
  CHECK(format_fixed(72, 0) == "72");
  CHECK(parse_fixed("1.234", 3) == 1234);
  CHECK(parse_fixed("0.5", 3) == 500);
  CHECK(parse_fixed("-2", 3) == -2000);
  CHECK_THROWS_AS(parse_fixed("1.2345", 3), Error);
  CHECK_THROWS_AS(parse_fixed("abc", 3), Error);
}

TEST_CASE("csv tables round trip and carry a canary") {
  crypto::Drbg rng(4);
  auto t = generate_table(rng, {"hr", "steps"}, 20);
  CHECK(t.canary.size() == kCanaryLength);
  auto text = render_csv(t);
  CHECK(text.rfind("#canary=" + t.canary + "\nhr,steps\n", 0) == 0);
  auto back = parse_csv(text);
  CHECK(back.canary == t.canary);
  CHECK(back.rows == t.rows);
  CHECK_THROWS_AS(parse_csv("hr\n1.0\n"), Error);
}

TEST_CASE("column stats equal the two-pass oracle") {
  crypto::Drbg rng(8);
  for (std::size_t rows : {1u, 2u, 7u, 500u}) {
    std::vector<Table> tables;
    for (int o = 0; o < 3; ++o) tables.push_back(generate_table(rng, {"a", "b", "c"}, rows));
    CHECK(column_stats(tables) == oracle_stats(tables));
  }
  Table one{"X", {"v"}, {{1000}, {3000}}};
  auto s = column_stats(std::vector<Table>{one});
  CHECK(s[0].mean == 2'000'000);
  CHECK(s[0].stddev == 1'000'000);
  CHECK(parse_stats(render_stats(s)) == s);
}

TEST_CASE("load_enclave measures the program") {
  Rig rig;
  const auto pop = rig.manifest.measurement("column-stats");
  auto a = rig.load(rig.cee, rig.manifest.at("column-stats"));
  auto b = rig.load(rig.cee, rig.manifest.at("column-stats"));
  CHECK(a.measurement() == pop);
  CHECK(a.instance() != b.instance());
  CHECK(a.measurement() == b.measurement());
  CHECK(a.key_store_size() == 0);
  CHECK_FALSE(a.sanitized());

  auto tampered = rig.manifest.at("column-stats");
  tampered.code[0] ^= 0x01;
  CHECK(rig.load(rig.cee, tampered).measurement() != pop);
  CHECK(rig.load(rig.cee, tampered).measurement() == crypto::hash(std::string_view(tampered.code)));
}

TEST_CASE("attestation") {
  Rig rig;
  const auto pop = rig.manifest.measurement("column-stats");
  auto e = rig.load(rig.cee, rig.manifest.at("column-stats"));
  auto n = rig.nonce();

  SUBCASE("honest enclave with the expected measurement passes") {
    auto rep = rig.attest(e, rig.cee, n);
    CHECK(rep.verdict == Verdict::kPass);
    CHECK(check_report(rep, rig.ias.public_key(), n, pop) == ErrorCode::kOk);
    CHECK(AttestationReport::parse(rep.serialize()).digest() == rep.digest());
  }

  SUBCASE("a valid report for another measurement is rejected by the verifier") {
    auto rep = rig.attest(e, rig.cee, n);
    auto other = crypto::hash(std::string_view("some other program"));
    CHECK(check_report(rep, rig.ias.public_key(), n, other) == ErrorCode::kIntegrityMismatch);
  }

  SUBCASE("replayed quote hits stale-nonce") {
    auto q = e.quote(n, rig.cee);
    rig.ias.verify(q, 0ms);
    try {
      rig.ias.verify(Quote::parse(q.serialize()), 1ms);
      FAIL("expected stale-nonce");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::kStaleNonce);
    }
  }

  SUBCASE("report answering another challenge is stale for this challenger") {
    auto rep = rig.attest(e, rig.cee, n);
    CHECK(check_report(rep, rig.ias.public_key(), rig.nonce(), pop) == ErrorCode::kStaleNonce);
  }

  SUBCASE("unreachable service") {
    rig.ias.set_reachable(false);
    try {
      rig.attest(e, rig.cee, n);
      FAIL("expected service-unreachable");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::kServiceUnreachable);
    }
  }

  SUBCASE("compromised launch or forged platform signature fails") {
    auto bad = rig.load(rig.cee, rig.manifest.at("column-stats"), false);
    auto rep = rig.attest(bad, rig.cee, n);
    CHECK(rep.verdict == Verdict::kFail);
    CHECK(check_report(rep, rig.ias.public_key(), n, pop) == ErrorCode::kAttestationRequired);

    Platform rogue("cee-host", rig.rng.secret_seed());
    auto forged = rig.attest(e, rogue, rig.nonce());
    CHECK(forged.verdict == Verdict::kFail);
  }

  SUBCASE("report signed by someone else is not accepted") {
    auto rep = rig.attest(e, rig.cee, n);
    rep.measurement.bytes[0] ^= 1;
    CHECK(check_report(rep, rig.ias.public_key(), n, pop) == ErrorCode::kAttestationRequired);
  }
}

TEST_CASE("attested channel") {
  Rig rig;
  auto e = rig.load(rig.cee, rig.manifest.at("column-stats"));
  crypto::KeyAgreement peer(rig.rng.secret_seed());
  auto rep = rig.attest(e, rig.cee, rig.nonce());

  SUBCASE("pass report opens a confidential channel") {
    auto ch = connect_to_enclave(peer, rep, "dc->cee");
    e.accept_channel(ChannelHello{"dc->cee", peer.public_key(), rep});
    KeyProvision p{"owner-1/data", rig.rng.key_material()};
    auto frame = ch.seal(p.serialize());
    CHECK_FALSE(contains(frame, view(p.key)));
    CHECK_FALSE(contains(frame, to_bytes("owner-1/data")));
    e.deliver(frame);
    CHECK(e.holds_key("owner-1/data"));
  }

  SUBCASE("failed report: attestation-required on both sides") {
    auto bad = rig.load(rig.cee, rig.manifest.at("column-stats"), false);
    auto bad_rep = rig.attest(bad, rig.cee, rig.nonce());
    CHECK_THROWS_WITH_AS(connect_to_enclave(peer, bad_rep, "x"), doctest::Contains("pass report"),
                         Error);
    try {
      bad.accept_channel(ChannelHello{"x", peer.public_key(), bad_rep});
      FAIL("expected attestation-required");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::kAttestationRequired);
    }
  }

  SUBCASE("report for a different enclave instance cannot open a channel") {
    auto other = rig.load(rig.cee, rig.manifest.at("column-stats"));
    CHECK_THROWS_AS(other.accept_channel(ChannelHello{"c", peer.public_key(), rep}), Error);
  }

  SUBCASE("dropped frame leaves a gap, replay and tamper are rejected") {
    auto ch = connect_to_enclave(peer, rep, "c");
    e.accept_channel(ChannelHello{"c", peer.public_key(), rep});
    auto f1 = ch.seal(KeyProvision{"d1", rig.rng.key_material()}.serialize());
    auto f2 = ch.seal(KeyProvision{"d2", rig.rng.key_material()}.serialize());
    e.deliver(f2);  // f1 dropped by the host
    CHECK(e.key_store_size() == 1);
    CHECK_THROWS_AS(e.deliver(f2), Error);
    CHECK_THROWS_AS(e.deliver(f1), Error);
    auto f3 = ch.seal(KeyProvision{"d3", rig.rng.key_material()}.serialize());
    f3[f3.size() / 2] ^= 0x40;
    try {
      e.deliver(f3);
      FAIL("expected auth-failure");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::kAuthFailure);
    }
    CHECK(e.key_store_size() == 1);
  }
}

TEST_CASE("key provisioning into the enclave") {
  Rig rig;
  auto e = rig.load(rig.cee, rig.manifest.at("column-stats"));
  crypto::KeyAgreement peer(rig.rng.secret_seed());
  auto rep = rig.attest(e, rig.cee, rig.nonce());
  auto ch = connect_to_enclave(peer, rep, "db->cee");
  e.accept_channel(ChannelHello{"db->cee", peer.public_key(), rep});

  for (int i = 0; i < 3; ++i) {
    e.deliver(ch.seal(KeyProvision{"owner-" + std::to_string(i), rig.rng.key_material()}.serialize()));
  }
  CHECK(e.key_store_size() == 3);
  e.deliver(ch.seal(KeyProvision{"owner-1", rig.rng.key_material()}.serialize()));
  CHECK(e.key_store_size() == 3);

  e.sanitize();
  CHECK(e.key_store_size() == 0);
  try {
    e.deliver(ch.seal(KeyProvision{"owner-9", rig.rng.key_material()}.serialize()));
    FAIL("expected channel-closed");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kChannelClosed);
  }
}

namespace {

// Three owners' data, a broker key store enclave holding their keys, and a
// CEE enclave attested by both the consumer and the key store.
struct ExecutionRig : Rig {
  std::vector<Table> tables;
  std::vector<DataCapsule> capsules;
  Enclave keystore = load(db, key_store_program());
  Enclave cee_enclave = load(cee, manifest.at("column-stats"));
  crypto::KeyAgreement dc_key{rng.secret_seed()};
  ChannelEndpoint dc_channel{"", crypto::SymmetricKey(crypto::KeyRole::kChannel, {}), true};
  std::vector<Binding> bindings{{ContractId{0}, 0}};

  explicit ExecutionRig(std::size_t rows = 500) {
    for (std::uint32_t o = 0; o < 3; ++o) {
      tables.push_back(generate_table(rng, {"hr", "steps", "sleep"}, rows));
      auto k = rng.key(crypto::KeyRole::kData);
      crypto::AeadNonce n{};
      rng.fill(n);
      auto desc = "owner-" + std::to_string(o) + "/vitals";
      capsules.push_back(seal_capsule(k, n, AccountId{o}, desc, to_bytes(render_csv(tables.back()))));
      // Stage 1: owner attests the key store and provisions K_data.
      crypto::KeyAgreement owner(rng.secret_seed());
      auto rep = attest(keystore, db, nonce());
      auto ch = connect_to_enclave(owner, rep, "owner-" + std::to_string(o));
      keystore.accept_channel(ChannelHello{ch.id(), owner.public_key(), rep});
      keystore.deliver(ch.seal(KeyProvision{desc, k.material()}.serialize()));
    }
    auto n1 = nonce();
    auto rep_dc = attest(cee_enclave, cee, n1);
    REQUIRE(check_report(rep_dc, ias.public_key(), n1, manifest.measurement("column-stats")) ==
            ErrorCode::kOk);
    dc_channel = connect_to_enclave(dc_key, rep_dc, "dc");
    cee_enclave.accept_channel(ChannelHello{"dc", dc_key.public_key(), rep_dc});

    auto n2 = nonce();
    auto rep_db = attest(cee_enclave, cee, n2);
    auto hello = keystore.connect("db", rep_db, n2, manifest.measurement("column-stats"));
    cee_enclave.accept_channel(hello);
  }

  std::vector<std::string> descriptors() const {
    std::vector<std::string> d;
    for (const auto& c : capsules) d.push_back(c.descriptor);
    return d;
  }
};

}  // namespace

TEST_CASE("enclave_execute: 3 owners x 500 rows matches the plaintext oracle") {
  ExecutionRig rig;
  for (auto& f : rig.keystore.forward_keys("db", rig.descriptors())) rig.cee_enclave.deliver(f);
  REQUIRE(rig.cee_enclave.key_store_size() == 3);

  auto out = rig.cee_enclave.execute(rig.capsules, rig.bindings, "dc", {"db"});
  CHECK(rig.cee_enclave.sanitized());
  CHECK(rig.cee_enclave.key_store_size() == 0);
  CHECK(rig.cee_enclave.plaintext_buffer_size() == 0);
  CHECK(rig.cee_enclave.channel_count() == 0);

  auto bundle = ResultBundle::parse(rig.dc_channel.open(out.bundle_frame));
  CHECK(crypto::hash(bundle.result.serialize()) == bundle.result_hash);
  CHECK(bundle.bindings == rig.bindings);
  auto slip = rig.keystore.deliver(out.slip_frames.at(0));
  REQUIRE(slip.has_value());
  CHECK(slip->binding == rig.bindings[0]);
  CHECK(crypto::hash(view(slip->share)) == bundle.key_hashes[0]);

  auto plain = open_result(bundle, {slip->share});
  CHECK(parse_stats(to_string(plain)) == oracle_stats(rig.tables));

  for (const auto& t : rig.tables) {
    CHECK_FALSE(contains(out.bundle_frame, to_bytes(t.canary)));
    CHECK_FALSE(contains(out.slip_frames[0], to_bytes(t.canary)));
  }
  CHECK_THROWS_AS(rig.cee_enclave.execute(rig.capsules, rig.bindings, "dc", {"db"}), Error);
}

TEST_CASE("enclave_execute is all-or-nothing") {
  ExecutionRig rig(5);
  auto descs = rig.descriptors();

  SUBCASE("missing one owner's key") {
    descs.pop_back();
    for (auto& f : rig.keystore.forward_keys("db", descs)) rig.cee_enclave.deliver(f);
    try {
      rig.cee_enclave.execute(rig.capsules, rig.bindings, "dc", {"db"});
      FAIL("expected missing-key");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::kMissingKey);
    }
  }

  SUBCASE("tampered capsule") {
    for (auto& f : rig.keystore.forward_keys("db", descs)) rig.cee_enclave.deliver(f);
    rig.capsules[1].body.body[3] ^= 1;
    try {
      rig.cee_enclave.execute(rig.capsules, rig.bindings, "dc", {"db"});
      FAIL("expected decrypt-failure");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::kDecryptFailure);
    }
  }

  CHECK(rig.cee_enclave.sanitized());
  CHECK(rig.cee_enclave.key_store_size() == 0);
  CHECK(rig.cee_enclave.plaintext_buffer_size() == 0);
}

TEST_CASE("result key shares: every share is needed") {
  ExecutionRig rig(3);
  for (auto& f : rig.keystore.forward_keys("db", rig.descriptors())) rig.cee_enclave.deliver(f);
  // Two records, two slip channels (both into the key store here).
  auto n = rig.nonce();
  auto rep = rig.attest(rig.cee_enclave, rig.cee, n);
  rig.cee_enclave.accept_channel(
      rig.keystore.connect("db2", rep, n, rig.manifest.measurement("column-stats")));
  std::vector<Binding> two{{ContractId{1}, 0}, {ContractId{2}, 4}};
  auto out = rig.cee_enclave.execute(rig.capsules, two, "dc", {"db", "db2"});
  auto bundle = ResultBundle::parse(rig.dc_channel.open(out.bundle_frame));
  auto s1 = rig.keystore.deliver(out.slip_frames[0])->share;
  auto s2 = rig.keystore.deliver(out.slip_frames[1])->share;
  CHECK(parse_stats(to_string(open_result(bundle, {s1, s2}))) == oracle_stats(rig.tables));
  CHECK_THROWS_AS(open_result(bundle, {s1}), Error);
  CHECK_THROWS_AS(open_result(bundle, {s1, s1}), Error);
  CHECK(ResultBundle::parse(bundle.serialize()).serialize() == bundle.serialize());
}

TEST_CASE("attestation makespan follows the W-server queue") {
  CHECK(attestation_makespan(160, 1) == 96'000ms);
  CHECK(attestation_makespan(160, 64) == 1'800ms);
  CHECK(attestation_makespan(1, 1) == 600ms);
  CHECK(attestation_makespan(1, 64) == 600ms);
  for (std::size_t n = 1; n <= 40; ++n) {
    for (std::size_t w = 1; w <= 12; ++w) {
      CHECK(attestation_makespan(n, w) == Millis{static_cast<long>((n + w - 1) / w) * 600});
    }
  }
  IasConfig slow{200ms, 300ms};
  CHECK(attestation_makespan(10, 3, slow) == 2000ms);

  AttestationPool pool(2, 600ms);
  CHECK(pool.reserve(0ms) == 600ms);
  CHECK(pool.reserve(100ms) == 700ms);
  CHECK(pool.reserve(100ms) == 1200ms);
  CHECK(pool.reserve(5000ms) == 5600ms);
}
