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

#include "protocol/cee.hpp"

#include <algorithm>

#include "protocol/attest.hpp"

namespace dm::protocol {

Cee::Cee(World& world) : Actor(world, "cee", "cee-host"), rng_(world.fork("cee")) {}

void Cee::on_halt() {
  for (auto& job : jobs_) {
    job->enclave->halt();
    log("halted", {{"instance", std::to_string(job->enclave->instance())},
                   {"keys", std::to_string(job->enclave->key_store_size())},
                   {"plaintext", std::to_string(job->enclave->plaintext_buffer_size())}});
  }
}

// A job whose records all ended without execution is torn down.
void Cee::on_chain(std::span<const ledger::Receipt>) {
  for (auto& job : jobs_) {
    auto& e = *job->enclave;
    if (job->executed || e.sanitized() || e.halted()) continue;
    bool all_terminal = true;
    for (const auto& b : job->request.bindings) {
      const auto* rec = world_.record(b);
      all_terminal &= rec && contracts::is_terminal(rec->status);
    }
    if (!all_terminal) continue;
    e.sanitize();
    log("6:sanitized", {{"instance", std::to_string(e.instance())},
                        {"reason", "abandoned"},
                        {"keys", std::to_string(e.key_store_size())},
                        {"plaintext", std::to_string(e.plaintext_buffer_size())}});
  }
}

Cee::Job* Cee::job_for(const tee::Binding& b) {
  for (auto& job : jobs_) {
    const auto& bs = job->request.bindings;
    if (std::find(bs.begin(), bs.end(), b) != bs.end()) return job.get();
  }
  return nullptr;
}

void Cee::on_message(const sim::Envelope& m) {
  try {
    if (m.cls == "compute") on_compute(m);
    else if (m.cls == "challenge") on_challenge(m.from, Challenge::parse(m.payload));
    else if (m.cls == "hello") on_hello(m);
    else if (m.cls == "provision") {
      pending_frames_.push_back(m.payload);
      deliver_pending();
    }
  } catch (const Error& e) {
    log("drop-message", {{"cls", m.cls}, {"from", m.from}, {"code", std::string(to_string(e.code()))}});
  }
}

void Cee::on_compute(const sim::Envelope& m) {
  auto req = ComputeRequest::parse(m.payload);
  if (req.bindings.empty() || job_for(req.bindings.front())) {
    log("2:reject", {{"reason", "duplicate-or-empty"}});
    return;
  }
  const auto* program = world_.manifest().find(req.operation);
  if (!program) {
    log("2:reject", {{"reason", "unknown-operation"}, {"op", req.operation}});
    return;
  }
  const bool closed = std::all_of(req.bindings.begin(), req.bindings.end(), [&](const auto& b) {
    const auto* rec = world_.record(b);
    return rec && contracts::is_terminal(rec->status);
  });
  if (closed) {
    log("2:reject", {{"reason", "records-closed"}});
    return;
  }
  auto job = std::make_unique<Job>();
  const auto instance = world_.next_enclave_instance();
  job->enclave = std::make_unique<tee::Enclave>(instance, host(), *program,
                                                rng_.fork("enclave-" + std::to_string(instance)),
                                                world_.ias().public_key());
  world_.track(job->enclave.get());
  job->request = std::move(req);
  log("2:load", {{"instance", std::to_string(instance)},
                 {"op", job->request.operation},
                 {"measurement", short_digest(job->enclave->measurement())},
                 {"records", std::to_string(job->request.bindings.size())}});
  auto& j = *jobs_.emplace_back(std::move(job));
  serve_challenge(world_, name(), *j.enclave, m.from, Challenge{j.request.bindings.front(),
                                                                j.request.nonce}, "3");

  std::vector<std::pair<std::string, Challenge>> still;
  for (auto& [from, c] : waiting_challenges_) {
    if (c.binding && job_for(*c.binding) == &j) {
      serve_challenge(world_, name(), *j.enclave, from, c, "3");
    } else {
      still.emplace_back(from, c);
    }
  }
  waiting_challenges_ = std::move(still);
}

void Cee::on_challenge(const std::string& from, const Challenge& c) {
  Job* job = c.binding ? job_for(*c.binding) : nullptr;
  if (!job) {
    waiting_challenges_.emplace_back(from, c);
    return;
  }
  if (job->executed || job->enclave->halted()) return;
  serve_challenge(world_, name(), *job->enclave, from, c, "3");
}

void Cee::on_hello(const sim::Envelope& m) {
  auto hello = tee::ChannelHello::parse(m.payload);
  for (auto& job : jobs_) {
    if (job->enclave->public_key() != hello.report.enclave_key) continue;
    const auto& rel = job->request.releasers;
    if (m.from != "dc" && std::find(rel.begin(), rel.end(), m.from) == rel.end()) {
      log("3:hello-rejected", {{"peer", m.from}, {"reason", "not-a-party"}});
      return;
    }
    try {
      job->enclave->accept_channel(hello);
    } catch (const Error& e) {
      log("3:hello-rejected", {{"peer", m.from}, {"code", std::string(to_string(e.code()))}});
      return;
    }
    job->channels[m.from] = hello.channel_id;
    log("3:channel", {{"peer", m.from},
                      {"instance", std::to_string(job->enclave->instance())},
                      {"report", short_digest(hello.report.digest())},
                      {"measurement", short_digest(job->enclave->measurement())}});
    deliver_pending();
    maybe_execute(*job);
    return;
  }
  log("3:hello-rejected", {{"peer", m.from}, {"reason", "unknown-instance"}});
}

void Cee::deliver_pending() {
  std::vector<Bytes> keep;
  std::vector<Job*> touched;
  for (auto& frame : pending_frames_) {
    const auto id = tee::ChannelEndpoint::frame_channel(frame);
    Job* owner = nullptr;
    for (auto& job : jobs_) {
      for (const auto& [party, ch] : job->channels) {
        if (ch == id) owner = job.get();
      }
    }
    if (!owner) {
      keep.push_back(std::move(frame));
      continue;
    }
    try {
      owner->enclave->deliver(frame);
      log("4:key-received", {{"instance", std::to_string(owner->enclave->instance())},
                             {"channel", id}});
      touched.push_back(owner);
    } catch (const Error& e) {
      log("4:provision-rejected", {{"channel", id}, {"code", std::string(to_string(e.code()))}});
    }
  }
  pending_frames_ = std::move(keep);
  for (auto* job : touched) maybe_execute(*job);
}

void Cee::maybe_execute(Job& job) {
  auto& e = *job.enclave;
  if (job.executed || e.halted() || e.sanitized() || !job.channels.count("dc")) return;
  std::vector<std::string> slip_channels;
  for (const auto& party : job.request.releasers) {
    auto it = job.channels.find(party);
    if (it == job.channels.end()) return;
    slip_channels.push_back(it->second);
  }
  for (const auto& d : job.request.descriptors) {
    if (!e.holds_key(d)) return;
  }
  job.executed = true;
  const auto instance = std::to_string(e.instance());

  std::vector<tee::DataCapsule> capsules;
  for (const auto& d : job.request.descriptors) {
    if (auto c = world_.fetch(d)) capsules.push_back(std::move(*c));
  }
  try {
    if (capsules.size() != job.request.descriptors.size()) {
      e.sanitize();
      throw Error(ErrorCode::kMissingKey, "dataset missing from storage");
    }
    auto out = e.execute(capsules, job.request.bindings, job.channels.at("dc"), slip_channels);
    log("5:execute", {{"instance", instance},
                      {"inputs", std::to_string(capsules.size())},
                      {"result", short_digest(out.result_hash)}});
    send("dc", "bundle", std::move(out.bundle_frame), true);
    for (std::size_t i = 0; i < out.slip_frames.size(); ++i) {
      send(job.request.releasers[i], "key-slip", std::move(out.slip_frames[i]), true);
    }
    log("6:emit", {{"instance", instance}, {"slips", std::to_string(out.slip_frames.size())}});
  } catch (const Error& err) {
    log("5:execute-failed", {{"instance", instance}, {"code", std::string(to_string(err.code()))}});
  }
  log("6:sanitized", {{"instance", instance},
                      {"keys", std::to_string(e.key_store_size())},
                      {"plaintext", std::to_string(e.plaintext_buffer_size())}});
}

}  // namespace dm::protocol
