#include "gossipmesh/simnet.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace gossipmesh {

namespace {

const char* churn_name(ChurnEvent::Action a) {
  switch (a) {
    case ChurnEvent::Action::kill: return "kill";
    case ChurnEvent::Action::revive: return "revive";
    case ChurnEvent::Action::partition: return "partition";
    case ChurnEvent::Action::heal: return "heal";
  }
  return "kill";
}

}  // namespace

Simulator::Simulator(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  nodes_.reserve(cfg_.n_agents);
  for (AgentId i = 0; i < cfg_.n_agents; ++i) nodes_.emplace_back(i, &cfg_);
  group_.assign(cfg_.n_agents, 0);

  // Capability assignment. An empty capability table means "everyone can do
  // everything this scenario asks for".
  if (cfg_.workload.capabilities.empty()) {
    std::set<std::string> all;
    for (const auto& t : cfg_.workload.tasks)
      all.insert(t.descriptor.begin(), t.descriptor.end());
    std::vector<std::string> caps(all.begin(), all.end());
    for (auto& node : nodes_) node.profile.capabilities = caps;
  } else {
    for (const auto& spec : cfg_.workload.capabilities)
      nodes_[spec.node].profile.capabilities = spec.capabilities;
  }
}

Trace Simulator::run() {
  TraceRecord header{};
  header.kind = TraceKind::run_header;
  header.a = cfg_.n_agents;
  header.b = static_cast<AgentId>(cfg_.fanout);
  header.c = cfg_.seed;
  header.d = cfg_.rounds;
  header.e = cfg_.mode == RunMode::broadcast ? 1 : 0;
  header.str = trace_.intern(cfg_.name);
  trace_.push(header);

  if (cfg_.workload.averaging.enabled) {
    const auto& init = cfg_.workload.averaging.init;
    for (AgentId i = 0; i < cfg_.n_agents; ++i) {
      double v = init.empty()
                     ? Rng::derive(cfg_.seed, kSaltInit, i, 0).uniform01()
                     : init[i];
      nodes_[i].avg_value = v;
      TraceRecord rec{};
      rec.kind = TraceKind::avg_init;
      rec.a = i;
      rec.c = std::bit_cast<std::uint64_t>(v);
      trace_.push(rec);
    }
  }

  for (std::uint32_t r = 0; r < cfg_.rounds; ++r) {
    do_churn(r);
    do_sweeps(r);
    if (cfg_.mode == RunMode::gossip) {
      if (cfg_.protocol.membership) do_probes(r);
      do_adversaries(r);
      do_gossip(r);
      do_anti_entropy(r);
      do_averaging(r);
    }
    do_delivery(r);
    do_workload(r);
  }

  finalize();
  return std::move(trace_);
}

// --- phases -------------------------------------------------------------------

std::vector<AgentId> Simulator::resolve_targets(const ChurnEvent& event) const {
  std::vector<AgentId> targets = event.targets;
  if (event.dynamic_target.rfind("claimant:", 0) == 0) {
    const std::string tid = event.dynamic_target.substr(9);
    const TaskAd* merged = nullptr;
    TaskAd acc;
    for (const auto& node : nodes_) {
      auto it = node.tasks.find(tid);
      if (it == node.tasks.end()) continue;
      acc = merged ? resolve_claims(acc, it->second) : it->second;
      merged = &acc;
    }
    if (merged && merged->state == TaskState::claimed && merged->claimant)
      targets.push_back(*merged->claimant);
  }
  return targets;
}

void Simulator::do_churn(std::uint32_t round) {
  for (const auto& event : cfg_.churn) {
    if (event.round != round) continue;
    auto targets = resolve_targets(event);
    switch (event.action) {
      case ChurnEvent::Action::kill:
        for (AgentId t : targets) {
          if (!nodes_[t].alive()) continue;
          nodes_[t].set_alive(false);
          TraceRecord rec{};
          rec.kind = TraceKind::churn_event;
          rec.round = round;
          rec.a = t;
          rec.str = trace_.intern("kill");
          trace_.push(rec);
        }
        break;
      case ChurnEvent::Action::revive:
        for (AgentId t : targets) {
          if (nodes_[t].alive()) continue;
          nodes_[t].set_alive(true);
          TraceRecord rec{};
          rec.kind = TraceKind::churn_event;
          rec.round = round;
          rec.a = t;
          rec.str = trace_.intern("revive");
          trace_.push(rec);
          // Rejoin announcement: higher incarnation clears any dead verdict.
          nodes_[t].refute_or_rejoin(round, trace_);
        }
        break;
      case ChurnEvent::Action::partition: {
        partitioned_ = true;
        std::fill(group_.begin(), group_.end(), 0);
        for (AgentId t : targets) group_[t] = 1;
        for (AgentId t : targets) {
          TraceRecord rec{};
          rec.kind = TraceKind::churn_event;
          rec.round = round;
          rec.a = t;
          rec.str = trace_.intern("partition");
          trace_.push(rec);
        }
        break;
      }
      case ChurnEvent::Action::heal: {
        partitioned_ = false;
        TraceRecord rec{};
        rec.kind = TraceKind::churn_event;
        rec.round = round;
        rec.a = 0;
        rec.str = trace_.intern("heal");
        trace_.push(rec);
        break;
      }
    }
  }
}

void Simulator::do_sweeps(std::uint32_t round) {
  for (auto& node : nodes_) node.sweep(round, trace_);
}

bool Simulator::leg(AgentId from, AgentId to, MsgType type, Rng& rng,
                    std::uint32_t round, EffectMask extra, std::uint64_t d) {
  bool lost = rng.coin(cfg_.loss_p);
  EffectMask effects = extra;
  if (lost)
    effects |= kEffectLost;
  else if (cut_off(from, to))
    effects |= kEffectPartitioned;
  else if (!nodes_[to].alive())
    effects |= kEffectDeadTarget;
  TraceRecord rec{};
  rec.kind = TraceKind::msg;
  rec.mtype = type;
  rec.effects = effects;
  rec.round = round;
  rec.round2 = round;
  rec.a = from;
  rec.b = to;
  rec.d = d;
  trace_.push(rec);
  return !lost && !cut_off(from, to) && nodes_[to].alive();
}

void Simulator::do_probes(std::uint32_t round) {
  for (AgentId i = 0; i < cfg_.n_agents; ++i) {
    if (!nodes_[i].alive()) continue;
    Rng rng = Rng::derive(cfg_.seed, kSaltProbe, i, round);
    auto target = nodes_[i].view.pick_probe_target(rng);
    if (!target) continue;
    AgentId t = *target;

    bool acked = leg(i, t, MsgType::probe_ping, rng, round) &&
                 leg(t, i, MsgType::probe_ack, rng, round);

    if (!acked) {
      auto proxies =
          nodes_[i].view.pick_proxies(rng, cfg_.protocol.proxy_count, t);
      for (AgentId p : proxies) {
        if (acked) break;
        if (!leg(i, p, MsgType::probe_req, rng, round)) continue;
        if (!leg(p, t, MsgType::probe_relay, rng, round)) continue;
        if (!leg(t, p, MsgType::probe_relay_ack, rng, round)) continue;
        if (!leg(p, i, MsgType::probe_req_ack, rng, round)) continue;
        acked = true;
      }
    }

    if (!acked) nodes_[i].mark_suspect(t, round, trace_);
  }
}

void Simulator::do_adversaries(std::uint32_t round) {
  for (const auto& adv : cfg_.adversaries) {
    if (round < adv.start_round || !nodes_[adv.id].alive()) continue;
    switch (adv.behavior) {
      case AdversarySpec::Behavior::fabricate: {
        // One invented fact, pushed hard. The envelope is authentic (the
        // adversary signs its own lie); content-level defenses have to catch
        // it. Critical priority keeps it in the hot buffer every round.
        if (fabricated_.contains(adv.id)) break;
        fabricated_.insert(adv.id);
        Rumor r = nodes_[adv.id].originate(adv.topic, adv.payload,
                                           Priority::critical, round,
                                           std::nullopt, true, trace_);
        TraceRecord rec{};
        rec.kind = TraceKind::inject;
        rec.round = round;
        rec.a = adv.id;
        rec.c = r.id.key();
        rec.d = ConfirmationTracker::fact_key(r);
        rec.e = kInjectAdversarial;
        rec.str = trace_.intern(adv.topic);
        trace_.push(rec);
        break;
      }
      case AdversarySpec::Behavior::flood: {
        for (int k = 0; k < adv.rate; ++k) {
          std::string topic = adv.topic + "/" + std::to_string(round) + "/" +
                              std::to_string(k);
          Rumor r = nodes_[adv.id].originate(topic, adv.payload,
                                             Priority::routine, round,
                                             std::nullopt, true, trace_);
          TraceRecord rec{};
          rec.kind = TraceKind::inject;
          rec.round = round;
          rec.a = adv.id;
          rec.c = r.id.key();
          rec.d = ConfirmationTracker::fact_key(r);
          rec.e = kInjectAdversarial;
          rec.str = trace_.intern(topic);
          trace_.push(rec);
        }
        break;
      }
      case AdversarySpec::Behavior::tamper:
        break;  // applied to outgoing relays in do_gossip
    }
  }
}

void Simulator::enqueue_push(AgentId from, const OutMsg& out,
                             std::uint32_t send_round, Rng& loss_rng,
                             Rng& latency_rng) {
  PendingMsg msg;
  msg.seq = next_msg_seq_++;
  msg.send_round = send_round;
  msg.from = from;
  msg.to = out.to;
  msg.type = out.type;
  msg.rumor = out.rumor;
  msg.lost = loss_rng.coin(cfg_.loss_p);
  std::uint32_t span = cfg_.latency.max_rounds - cfg_.latency.min_rounds + 1;
  std::uint32_t lat = cfg_.latency.min_rounds + latency_rng.uniform_index(span);
  // latency 1 == delivered within the sending round's delivery phase.
  std::uint32_t deliver = send_round + lat - 1;
  pending_[deliver].push_back(std::move(msg));
}

void Simulator::do_gossip(std::uint32_t round) {
  for (AgentId i = 0; i < cfg_.n_agents; ++i) {
    if (!nodes_[i].alive()) continue;
    auto outs = nodes_[i].gossip_round(round, trace_);
    if (outs.empty()) continue;

    const AdversarySpec* tamper = nullptr;
    for (const auto& adv : cfg_.adversaries)
      if (adv.id == i && adv.behavior == AdversarySpec::Behavior::tamper &&
          round >= adv.start_round)
        tamper = &adv;

    Rng loss_rng = Rng::derive(cfg_.seed, kSaltLoss, i, round);
    Rng latency_rng = Rng::derive(cfg_.seed, kSaltLatency, i, round);
    for (auto& out : outs) {
      if (tamper && out.rumor.id.origin != i) {
        // Relayed content altered in flight; the signature no longer holds.
        out.rumor.payload += "#tampered";
        out.rumor.authentic = false;
      }
      enqueue_push(i, out, round, loss_rng, latency_rng);
    }
  }
}

void Simulator::do_anti_entropy(std::uint32_t round) {
  const int period = cfg_.protocol.anti_entropy_period;
  if (period <= 0) return;
  for (AgentId i = 0; i < cfg_.n_agents; ++i) {
    if (!nodes_[i].alive()) continue;
    if ((round + i) % static_cast<std::uint32_t>(period) != 0) continue;
    Rng rng = Rng::derive(cfg_.seed, kSaltAntiEntropy, i, round);
    auto partner = nodes_[i].view.pick_probe_target(rng);
    if (!partner) continue;
    AgentId p = *partner;

    // Digest handshake, then record transfers each ride their own leg: a
    // lossy exchange reconciles partially and finishes on a later period.
    if (!leg(i, p, MsgType::ae_digest, rng, round)) continue;
    if (!leg(p, i, MsgType::ae_digest, rng, round)) continue;

    auto diff = digest_diff(nodes_[i].store_digest(), nodes_[p].store_digest());
    auto transfer = [&](AgentId from, AgentId to, const LwwRecord& rec) {
      bool lost = rng.coin(cfg_.loss_p);
      EffectMask effects = kEffectNone;
      if (lost)
        effects = kEffectLost;
      else if (cut_off(from, to))
        effects = kEffectPartitioned;
      else if (!nodes_[to].alive())
        effects = kEffectDeadTarget;
      else
        effects = nodes_[to].apply_ae_record(rec, from, round, trace_);
      TraceRecord msg{};
      msg.kind = TraceKind::msg;
      msg.mtype = MsgType::ae_record;
      msg.effects = effects;
      msg.round = round;
      msg.round2 = round;
      msg.a = from;
      msg.b = to;
      msg.d = lww_fact_key(rec);
      trace_.push(msg);
    };
    for (const auto& key : diff.need_from_remote)
      transfer(p, i, nodes_[p].store.records().at(key));
    for (const auto& key : diff.send_to_remote)
      transfer(i, p, nodes_[i].store.records().at(key));

    // CRDTs and task ads reconcile by state hash: cheap equality check, full
    // state swap on mismatch (joins are idempotent and commutative).
    auto hi = nodes_[i].aux_hashes();
    auto hp = nodes_[p].aux_hashes();
    std::set<std::string> keys;
    for (const auto& [k, v] : hi) keys.insert(k);
    for (const auto& [k, v] : hp) keys.insert(k);
    for (const auto& key : keys) {
      auto a = hi.find(key);
      auto b = hp.find(key);
      if (a != hi.end() && b != hp.end() && a->second == b->second) continue;
      if (key.rfind("ctr/", 0) == 0) {
        const std::string name = key.substr(4);
        if (b != hp.end() && leg(p, i, MsgType::ae_record, rng, round))
          nodes_[i].merge_counter_state(name, nodes_[p].store.counters().at(name));
        if (a != hi.end() && leg(i, p, MsgType::ae_record, rng, round))
          nodes_[p].merge_counter_state(name, nodes_[i].store.counters().at(name));
      } else if (key.rfind("set/", 0) == 0) {
        const std::string name = key.substr(4);
        if (b != hp.end() && leg(p, i, MsgType::ae_record, rng, round))
          nodes_[i].merge_set_state(name, nodes_[p].store.sets().at(name));
        if (a != hi.end() && leg(i, p, MsgType::ae_record, rng, round))
          nodes_[p].merge_set_state(name, nodes_[i].store.sets().at(name));
      } else if (key.rfind("task/", 0) == 0) {
        const std::string tid = key.substr(5);
        if (b != hp.end() && leg(p, i, MsgType::ae_record, rng, round))
          nodes_[i].merge_task_ad(nodes_[p].tasks.at(tid), round, trace_);
        if (a != hi.end() && leg(i, p, MsgType::ae_record, rng, round))
          nodes_[p].merge_task_ad(nodes_[i].tasks.at(tid), round, trace_);
      }
    }
  }
}

void Simulator::do_averaging(std::uint32_t round) {
  if (!cfg_.workload.averaging.enabled) return;
  for (AgentId i = 0; i < cfg_.n_agents; ++i) {
    if (!nodes_[i].alive()) continue;
    Rng rng = Rng::derive(cfg_.seed, kSaltAveraging, i, round);
    auto partner = nodes_[i].view.pick_probe_target(rng);
    if (!partner) continue;
    AgentId p = *partner;
    if (!leg(i, p, MsgType::avg_req, rng, round)) continue;
    if (!leg(p, i, MsgType::avg_resp, rng, round)) continue;
    // Both legs held: commit the midpoint atomically on both sides. Any lost
    // leg aborts the whole exchange, so the global sum never leaks.
    auto [a, b] = averaging_step(nodes_[i].avg_value, nodes_[p].avg_value);
    nodes_[i].avg_value = a;
    nodes_[p].avg_value = b;
  }
}

void Simulator::do_delivery(std::uint32_t round) {
  auto it = pending_.find(round);
  if (it == pending_.end()) return;
  std::vector<PendingMsg> batch = std::move(it->second);
  pending_.erase(it);
  for (const auto& msg : batch) {
    EffectMask effects = kEffectNone;
    if (msg.lost)
      effects = kEffectLost;
    else if (cut_off(msg.from, msg.to))
      effects = kEffectPartitioned;
    else if (!nodes_[msg.to].alive())
      effects = kEffectDeadTarget;
    else
      effects = nodes_[msg.to].handle_gossip(msg.rumor, msg.from, round, trace_);
    TraceRecord rec{};
    rec.kind = TraceKind::msg;
    rec.mtype = msg.type;
    rec.effects = effects;
    rec.round = msg.send_round;
    rec.round2 = round;
    rec.a = msg.from;
    rec.b = msg.to;
    rec.c = msg.rumor.id.key();
    rec.d = ConfirmationTracker::fact_key(msg.rumor);
    rec.e = msg.rumor.ttl_hops;
    trace_.push(rec);
  }
}

void Simulator::schedule_broadcast(AgentId origin, const Rumor& rumor,
                                   std::uint32_t send_round) {
  Rng loss_rng = Rng::derive(cfg_.seed, kSaltLoss, origin, send_round);
  Rng latency_rng = Rng::derive(cfg_.seed, kSaltLatency, origin, send_round);
  for (AgentId j = 0; j < cfg_.n_agents; ++j) {
    if (j == origin) continue;
    OutMsg out{j, MsgType::broadcast, rumor};
    enqueue_push(origin, out, send_round, loss_rng, latency_rng);
  }
}

void Simulator::do_workload(std::uint32_t round) {
  for (const auto& spec : cfg_.workload.rumors) {
    if (spec.round != round || !nodes_[spec.origin].alive()) continue;
    Rumor r = nodes_[spec.origin].originate(spec.topic, spec.payload,
                                            spec.priority, round,
                                            spec.ttl_hops, spec.authentic,
                                            trace_);
    TraceRecord rec{};
    rec.kind = TraceKind::inject;
    rec.round = round;
    rec.a = spec.origin;
    rec.c = r.id.key();
    rec.d = ConfirmationTracker::fact_key(r);
    rec.e = spec.authentic ? kInjectRumor : kInjectAdversarial;
    rec.str = trace_.intern(spec.topic);
    trace_.push(rec);
    if (cfg_.mode == RunMode::broadcast)
      schedule_broadcast(spec.origin, r, round + 1);
  }

  for (const auto& spec : cfg_.workload.tasks) {
    if (spec.round != round || !nodes_[spec.origin].alive()) continue;
    nodes_[spec.origin].announce_task(spec, round, trace_);
    TraceRecord rec{};
    rec.kind = TraceKind::inject;
    rec.round = round;
    rec.a = spec.origin;
    rec.e = kInjectStateOp;
    rec.str = trace_.intern("task/" + spec.task_id);
    trace_.push(rec);
  }

  auto state_inject = [&](AgentId node, const Rumor& r) {
    TraceRecord rec{};
    rec.kind = TraceKind::inject;
    rec.round = round;
    rec.a = node;
    rec.c = r.id.key();
    rec.d = ConfirmationTracker::fact_key(r);
    rec.e = kInjectStateOp;
    rec.str = trace_.intern(r.topic);
    trace_.push(rec);
  };

  for (const auto& spec : cfg_.workload.writes) {
    if (spec.round != round || !nodes_[spec.node].alive()) continue;
    state_inject(spec.node,
                 nodes_[spec.node].local_write(spec.key, spec.value, round,
                                               trace_));
  }
  for (const auto& spec : cfg_.workload.deletes) {
    if (spec.round != round || !nodes_[spec.node].alive()) continue;
    state_inject(spec.node,
                 nodes_[spec.node].local_delete(spec.key, round, trace_));
  }
  for (const auto& spec : cfg_.workload.increments) {
    if (spec.round != round || !nodes_[spec.node].alive()) continue;
    state_inject(spec.node,
                 nodes_[spec.node].local_increment(spec.counter, spec.amount,
                                                   round, trace_));
  }
  for (const auto& spec : cfg_.workload.set_ops) {
    if (spec.round != round || !nodes_[spec.node].alive()) continue;
    state_inject(spec.node,
                 nodes_[spec.node].local_set_op(spec.set, spec.element,
                                                spec.remove, round, trace_));
  }
}

void Simulator::finalize() {
  const std::uint32_t end_round = cfg_.rounds;
  for (AgentId i = 0; i < cfg_.n_agents; ++i) {
    if (!nodes_[i].alive()) continue;
    TraceRecord store_rec{};
    store_rec.kind = TraceKind::final_value;
    store_rec.round = end_round;
    store_rec.a = i;
    store_rec.c = fnv1a64(nodes_[i].store.serialize());
    store_rec.str = trace_.intern("store");
    trace_.push(store_rec);

    if (cfg_.workload.averaging.enabled) {
      TraceRecord avg_rec{};
      avg_rec.kind = TraceKind::final_value;
      avg_rec.round = end_round;
      avg_rec.a = i;
      avg_rec.c = std::bit_cast<std::uint64_t>(nodes_[i].avg_value);
      avg_rec.str = trace_.intern("avg");
      trace_.push(avg_rec);
    }

    for (const auto& [tid, ad] : nodes_[i].tasks) {
      TraceRecord task_rec{};
      task_rec.kind = TraceKind::final_value;
      task_rec.round = end_round;
      task_rec.a = i;
      task_rec.b = ad.claimant.value_or(static_cast<AgentId>(~0u));
      task_rec.c = ad.epoch;
      task_rec.e = static_cast<std::int64_t>(ad.state);
      task_rec.str = trace_.intern("task/" + tid);
      trace_.push(task_rec);
    }

    TraceRecord held_rec{};
    held_rec.kind = TraceKind::final_value;
    held_rec.round = end_round;
    held_rec.a = i;
    held_rec.e = static_cast<std::int64_t>(nodes_[i].held().size());
    held_rec.str = trace_.intern("held");
    trace_.push(held_rec);
  }

  TraceRecord footer{};
  footer.kind = TraceKind::run_footer;
  footer.round = end_round;
  footer.c = trace_.size() + 1;  // count including this footer
  trace_.push(footer);
}

Trace run_scenario(const ScenarioConfig& cfg) {
  Simulator sim(cfg);
  return sim.run();
}

}  // namespace gossipmesh
