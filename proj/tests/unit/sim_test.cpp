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

#include "common/error.hpp"
#include "sim/network.hpp"

using namespace dm;
using namespace dm::sim;
using namespace std::chrono_literals;

TEST_CASE("transcript lines round trip") {
  Transcript t;
  t.add(0ms, "dc", "1:request", {{"idx", "0"}, {"value", "30000"}});
  t.add(15000ms, "chain", "finalize", {{"fn", "Request"}, {"status", "success"}});
  t.add(15001ms, "net", "halt", {});
  auto text = t.render();
  CHECK(text ==
        "0|dc|1:request|idx=0 value=30000\n"
        "15000|chain|finalize|fn=Request status=success\n"
        "15001|net|halt|\n");
  auto back = Transcript::parse(text);
  CHECK(back.entries() == t.entries());
  CHECK(back.render() == text);
  CHECK(back.entries()[0].get("value") == "30000");
  CHECK_FALSE(back.entries()[0].get("missing").has_value());
  CHECK(t.find("finalize").size() == 1);

  CHECK_THROWS_AS(Entry::parse("12|dc"), Error);
  CHECK_THROWS_AS(Entry::parse("x|dc|s|"), Error);
  CHECK_THROWS_AS(Entry::parse("1|dc|s|novalue"), Error);
  CHECK_THROWS_AS(t.add(0ms, "d c", "s"), Error);
  CHECK_THROWS_AS(t.add(0ms, "dc", "s", {{"k", "a b"}}), Error);
}

TEST_CASE("transcript observers see every entry, including ones they add") {
  Transcript t;
  std::vector<std::string> seen;
  t.observe([&](const Entry& e) {
    seen.push_back(e.step);
    if (e.step == "a") t.add(e.time, "x", "b");
  });
  t.add(0ms, "x", "a");
  CHECK(seen == std::vector<std::string>{"a", "b"});
  CHECK(t.size() == 2);
}

TEST_CASE("scheduler runs events in (time, insertion) order") {
  Scheduler s;
  std::string order;
  s.at(10ms, EventKind::kActorWakeup, [&] { order += "c"; });
  s.at(5ms, EventKind::kActorWakeup, [&] {
    order += "a";
    s.after(0ms, EventKind::kActorWakeup, [&] { order += "b"; });
  });
  s.at(10ms, EventKind::kLedgerAdvance, [&] { order += "d"; });
  s.run();
  CHECK(order == "abcd");
  CHECK(s.now() == 10ms);
  CHECK(s.processed() == 4);
  CHECK(s.processed(EventKind::kLedgerAdvance) == 1);
  CHECK_THROWS_AS(s.at(9ms, EventKind::kActorWakeup, [] {}), Error);

  s.at(20ms, EventKind::kActorWakeup, [&] { order += "e"; });
  s.at(30ms, EventKind::kActorWakeup, [&] { order += "f"; });
  s.run(25ms);
  CHECK(order == "abcde");
  CHECK_FALSE(s.idle());
}

TEST_CASE("adversary rules parse, render and match") {
  auto r = Rule::parse("ledger-tx:* drop from=db-host to=ledger-0");
  CHECK(r.action == Action::kDrop);
  CHECK(r.render() == "ledger-tx:* drop from=db-host to=ledger-0");
  CHECK(Rule::parse(r.render()) == r);
  CHECK(r.matches({"ledger-tx:CompleteTransaction", "db-host", "ledger-0"}));
  CHECK_FALSE(r.matches({"ledger-tx:CompleteTransaction", "db-host", "ledger-1"}));
  CHECK_FALSE(r.matches({"bundle", "db-host", "ledger-0"}));

  auto d = Rule::parse("bundle delay 7200000");
  CHECK(d.delay == 7'200'000ms);
  CHECK(Rule::parse(d.render()) == d);

  for (auto bad : {"bundle", "bundle explode", "bundle delay", "bundle delay -3",
                   "bundle drop sideways"}) {
    try {
      Rule::parse(bad);
      FAIL("accepted " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kConfigError);
    }
  }

  auto h = HaltRule::parse("cee-host after 4:provision +15");
  CHECK(h.after_step == "4:provision");
  CHECK(h.offset == 15ms);
  CHECK(HaltRule::parse(h.render()) == h);
  auto h2 = HaltRule::parse("cee-host at 900");
  CHECK(h2.at == 900ms);
  CHECK(HaltRule::parse(h2.render()) == h2);
  CHECK_THROWS_AS(HaltRule::parse("cee-host sometime"), Error);
}

TEST_CASE("adversary acts only where it controls a host") {
  AdversaryPolicy p;
  p.compromised = {"cee-host"};
  p.rules = {Rule::parse("* drop")};
  CHECK(p.decide({"bundle", "cee-host", "dc-host"}).action == Action::kDrop);
  CHECK(p.decide({"challenge", "dc-host", "cee-host"}).action == Action::kDrop);
  CHECK(p.decide({"ledger-tx:Request", "dc-host", "ledger-0"}).action == Action::kDeliver);

  p.rules = {Rule::parse("* corrupt")};
  CHECK(p.decide({"bundle", "cee-host", "dc-host"}).action == Action::kCorrupt);
  // Receiving end compromised is not enough to rewrite bytes.
  CHECK(p.decide({"challenge", "dc-host", "cee-host"}).action == Action::kDeliver);
}

TEST_CASE("sampled policies are a function of the seed") {
  SweepSpace space;
  space.classes = {"bundle", "key-slip", "ledger-tx:*"};
  space.compromised = {"cee-host", "db-host"};
  space.max_delay = 36'000'000ms;
  space.halt_anchors = {"2:load", "4:provision"};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    crypto::Drbg a(seed), b(seed);
    auto pa = sample_policy(a, space);
    CHECK(pa.render() == sample_policy(b, space).render());
    for (const auto& r : pa.rules) {
      CHECK(r.action != Action::kCorrupt);
      if (r.action == Action::kDelay) {
        CHECK(r.delay >= 1ms);
        CHECK(r.delay <= space.max_delay);
      }
    }
  }
}

namespace {

struct Net {
  Scheduler sched;
  Transcript transcript;
  Network net;
  std::vector<std::pair<Millis, std::string>> inbox;

  explicit Net(AdversaryPolicy p = {})
      : net(sched, transcript, std::move(p), 10ms, 1000ms) {
    for (auto [actor, host] : {std::pair{"dc", "dc-host"}, std::pair{"cee", "cee-host"}}) {
      net.attach(actor, host, [this](const Envelope& e) {
        inbox.emplace_back(sched.now(), to_string(e.payload));
      });
    }
  }

  void send(std::string from, std::string to, std::string cls, std::string body) {
    net.send(Envelope{0, std::move(from), std::move(to), std::move(cls), true, to_bytes(body)});
  }
};

}  // namespace

TEST_CASE("network delivers after the link latency") {
  Net n;
  n.send("dc", "cee", "compute", "hello");
  n.sched.run();
  REQUIRE(n.inbox.size() == 1);
  CHECK(n.inbox[0] == std::pair{10ms, std::string("hello")});
  CHECK(n.net.sent().size() == 1);
  CHECK(n.net.sent()[0].from_host == "dc-host");
}

TEST_CASE("network drop, delay, reorder and halt") {
  AdversaryPolicy p;
  p.compromised = {"cee-host"};

  SUBCASE("drop") {
    p.rules = {Rule::parse("bundle drop")};
    Net n(p);
    n.send("cee", "dc", "bundle", "x");
    n.send("cee", "dc", "key-slip", "y");
    n.sched.run();
    REQUIRE(n.inbox.size() == 1);
    CHECK(n.inbox[0].second == "y");
    CHECK(n.transcript.find("drop").size() == 1);
  }

  SUBCASE("delay") {
    p.rules = {Rule::parse("bundle delay 500")};
    Net n(p);
    n.send("cee", "dc", "bundle", "x");
    n.sched.run();
    CHECK(n.inbox.at(0).first == 510ms);
  }

  SUBCASE("reorder swaps with the next message on the link") {
    p.rules = {Rule::parse("bundle reorder")};
    Net n(p);
    n.send("cee", "dc", "bundle", "first");
    n.send("cee", "dc", "key-slip", "second");
    n.sched.run();
    REQUIRE(n.inbox.size() == 2);
    CHECK(n.inbox[0].second == "second");
    CHECK(n.inbox[1].second == "first");
  }

  SUBCASE("reordered message with nothing behind it is released later") {
    p.rules = {Rule::parse("bundle reorder")};
    Net n(p);
    n.send("cee", "dc", "bundle", "only");
    n.sched.run();
    REQUIRE(n.inbox.size() == 1);
    CHECK(n.inbox[0].first == 1010ms);
  }

  SUBCASE("halted host loses inbound messages and sends nothing") {
    Net n(p);
    std::vector<std::string> halted;
    n.net.on_halt([&](const std::string& h) { halted.push_back(h); });
    n.send("dc", "cee", "compute", "a");
    n.net.halt("cee-host");
    n.send("cee", "dc", "bundle", "b");
    n.sched.run();
    CHECK(n.inbox.empty());
    CHECK(halted == std::vector<std::string>{"cee-host"});
    CHECK(n.transcript.find("lost").size() == 1);
    CHECK(n.net.sent().size() == 1);
  }

  SUBCASE("corrupting sender: delivered bytes equal the sent bytes") {
    p.rules = {Rule::parse("bundle corrupt")};
    Net n(p);
    n.send("cee", "dc", "bundle", "abc");
    n.sched.run();
    REQUIRE(n.inbox.size() == 1);
    CHECK(n.inbox[0].second != "abc");
    CHECK(to_bytes(n.inbox[0].second) == n.net.sent()[0].payload);
  }
}

TEST_CASE("network runs are reproducible") {
  auto run = [] {
    AdversaryPolicy p;
    p.compromised = {"cee-host"};
    p.rules = {Rule::parse("bundle reorder"), Rule::parse("quote delay 3")};
    Net n(p);
    for (int i = 0; i < 20; ++i) {
      n.send(i % 2 ? "dc" : "cee", i % 2 ? "cee" : "dc", i % 3 ? "bundle" : "quote",
             std::to_string(i));
    }
    n.sched.run();
    return n.transcript.render();
  };
  CHECK(run() == run());
}
