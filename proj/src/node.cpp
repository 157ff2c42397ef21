#include "gossipmesh/node.hpp"

#include <algorithm>
#include <json.hpp>
#include <stdexcept>

namespace gossipmesh {

using json = nlohmann::ordered_json;

namespace {

// Topic namespaces with dedicated handlers; everything else is a plain
// last-writer-wins write keyed by the topic.
constexpr const char* kMemberPrefix = "member/";
constexpr const char* kTaskPrefix = "task/";
constexpr const char* kIntentPrefix = "intent/";
constexpr const char* kCounterPrefix = "ctr/";
constexpr const char* kSetPrefix = "set/";

bool has_prefix(const std::string& s, const char* prefix) {
  return s.rfind(prefix, 0) == 0;
}

// Cap on confirmation-source bookkeeping per fact once adopted; beyond this
// more sources add no decision value, only memory.
constexpr int kMaxTrackedSources = 8;

std::optional<MemberRecord> member_from_payload(const std::string& payload) {
  json j = json::parse(payload, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("id") ||
      !j.contains("inc") || !j.contains("status") ||
      !j["id"].is_number_unsigned() || !j["inc"].is_number_unsigned() ||
      !j["status"].is_string())
    return std::nullopt;
  MemberRecord rec;
  rec.id = j["id"].get<AgentId>();
  rec.incarnation = j["inc"].get<std::uint32_t>();
  const std::string s = j["status"].get<std::string>();
  if (s == "alive")
    rec.status = MemberStatus::alive;
  else if (s == "suspect")
    rec.status = MemberStatus::suspect;
  else if (s == "dead")
    rec.status = MemberStatus::dead;
  else
    return std::nullopt;
  return rec;
}

std::string member_to_payload(const MemberRecord& rec) {
  json j;
  j["id"] = rec.id;
  j["inc"] = rec.incarnation;
  j["status"] = to_string(rec.status);
  return j.dump();
}

std::optional<TaskAd> task_from_payload(const std::string& payload) {
  json j = json::parse(payload, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  for (const char* field : {"claim_author", "claim_lamport", "claimant",
                            "descriptor", "epoch", "exec_rounds", "priority",
                            "state", "task_id"})
    if (!j.contains(field)) return std::nullopt;
  if (!j["claim_author"].is_number_unsigned() ||
      !j["claim_lamport"].is_number_unsigned() ||
      !j["descriptor"].is_array() || !j["epoch"].is_number_unsigned() ||
      !j["exec_rounds"].is_number_unsigned() || !j["priority"].is_string() ||
      !j["state"].is_string() || !j["task_id"].is_string())
    return std::nullopt;
  TaskAd ad;
  ad.task_id = j["task_id"].get<std::string>();
  if (ad.task_id.empty()) return std::nullopt;
  for (const auto& d : j["descriptor"]) {
    if (!d.is_string()) return std::nullopt;
    ad.descriptor.push_back(d.get<std::string>());
  }
  auto prio = priority_from_string(j["priority"].get<std::string>());
  if (!prio) return std::nullopt;
  ad.priority = *prio;
  const std::string st = j["state"].get<std::string>();
  if (st == "available")
    ad.state = TaskState::available;
  else if (st == "claimed")
    ad.state = TaskState::claimed;
  else if (st == "done")
    ad.state = TaskState::done;
  else
    return std::nullopt;
  if (j["claimant"].is_number_unsigned())
    ad.claimant = j["claimant"].get<AgentId>();
  else if (!j["claimant"].is_null())
    return std::nullopt;
  ad.claim_version = Version{j["claim_lamport"].get<std::uint64_t>(),
                             j["claim_author"].get<AgentId>()};
  ad.epoch = j["epoch"].get<std::uint32_t>();
  ad.exec_rounds = j["exec_rounds"].get<std::uint32_t>();
  return ad;
}

std::optional<IntentRecord> intent_from_payload(const std::string& payload) {
  json j = json::parse(payload, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("activity") ||
      !j.contains("agent") || !j.contains("lamport") || !j.contains("zone") ||
      !j["activity"].is_string() || !j["agent"].is_number_unsigned() ||
      !j["lamport"].is_number_unsigned() || !j["zone"].is_number_unsigned())
    return std::nullopt;
  IntentRecord rec;
  rec.agent = j["agent"].get<AgentId>();
  rec.activity = j["activity"].get<std::string>();
  rec.zone = j["zone"].get<std::uint32_t>();
  rec.version = Version{j["lamport"].get<std::uint64_t>(), rec.agent};
  return rec;
}

std::string intent_to_payload(const IntentRecord& rec) {
  json j;
  j["activity"] = rec.activity;
  j["agent"] = rec.agent;
  j["lamport"] = rec.version.lamport;
  j["zone"] = rec.zone;
  return j.dump();
}

}  // namespace

std::string lww_payload(const LwwRecord& rec) {
  if (!rec.tombstone) return rec.value;
  json j;
  j["del"] = true;
  j["exp"] = rec.expiry_round.has_value() ? json(*rec.expiry_round)
                                          : json(nullptr);
  return j.dump();
}

LwwRecord lww_from_payload(const std::string& key, const std::string& payload,
                           const Version& version, std::uint32_t born_round) {
  LwwRecord rec;
  rec.key = key;
  rec.version = version;
  rec.born_round = born_round;
  json j = json::parse(payload, nullptr, false);
  if (!j.is_discarded() && j.is_object() && j.contains("del") &&
      j["del"].is_boolean() && j["del"].get<bool>()) {
    rec.tombstone = true;
    if (j.contains("exp") && j["exp"].is_number_unsigned())
      rec.expiry_round = j["exp"].get<std::uint32_t>();
    return rec;
  }
  rec.value = payload;
  return rec;
}

std::uint64_t lww_fact_key(const LwwRecord& rec) {
  std::uint64_t h = fnv1a64(rec.key);
  h = fnv1a64_u64(0x1fULL, h);
  return fnv1a64(lww_payload(rec), h);
}

Node::Node(AgentId id, const ScenarioConfig* cfg)
    : view(id, cfg->n_agents),
      buffer(static_cast<std::size_t>(cfg->protocol.hot_buffer_capacity)),
      limiter(cfg->protocol.rate_limit),
      trust(cfg->protocol.trust_default, cfg->protocol.trust_alpha),
      id_(id),
      cfg_(cfg) {
  clock_ = Version{0, id};
}

// --- clock & rumor construction -------------------------------------------

Version Node::bump_clock() {
  clock_.lamport += 1;
  clock_.author = id_;
  return clock_;
}

void Node::observe_lamport(std::uint64_t lamport) {
  if (lamport > clock_.lamport) clock_.lamport = lamport;
}

Rumor Node::make_rumor(const std::string& topic, const std::string& payload,
                       Priority priority, std::uint32_t round, int ttl_hops,
                       bool authentic, Version version) {
  Rumor r;
  r.id = RumorId{id_, next_seq_++};
  r.topic = topic;
  r.payload = payload;
  r.version = version;
  r.priority = priority;
  r.ttl_hops = ttl_hops;
  r.created_round = round;
  r.authentic = authentic;
  return r;
}

void Node::buffer_own(const Rumor& rumor) {
  seen_.insert(rumor.id.key());
  auto& fs = fact_state_[ConfirmationTracker::fact_key(rumor)];
  fs.adopted = true;  // own facts need no confirmation
  if (rumor.ttl_hops > 0) buffer.insert(rumor);
}

bool Node::topic_allowed(const std::string& topic) const {
  if (has_prefix(topic, kMemberPrefix)) return true;  // protocol traffic
  const auto& allow = cfg_->protocol.topic_allow;
  if (allow.empty()) return true;
  for (const auto& prefix : allow)
    if (topic.rfind(prefix, 0) == 0) return true;
  return false;
}

// --- receive pipeline -------------------------------------------------------

EffectMask Node::handle_gossip(const Rumor& rumor, AgentId from,
                               std::uint32_t round, Trace& trace) {
  if (!alive_) return kEffectDeadTarget;
  if (!rumor.well_formed()) return kEffectRejected;

  // Authenticity stands in for a signature check: a tampered payload cannot
  // be re-signed, so it is never tracked, never adopted, and the relayer who
  // passed it along pays for it.
  if (!rumor.authentic) {
    trust.update(from, 0.0);
    return static_cast<EffectMask>(kEffectTrustHeld | kEffectRejected);
  }

  const std::uint64_t rumor_key = rumor.id.key();
  const std::uint64_t fact = ConfirmationTracker::fact_key(rumor);

  if (seen_.contains(rumor_key)) {
    // A duplicate still vouches: only adopters forward, so a new relayer is
    // a new independent assertion of the fact.
    on_new_confirmation(fact, from, round, trace);
    return kEffectDuplicate;
  }

  if (!topic_allowed(rumor.topic)) return kEffectFiltered;

  // Rate-dropped rumors are not marked seen: a re-push in a later, quieter
  // round can still be admitted.
  if (!limiter.admit(round, rumor.priority)) return kEffectRateDropped;

  seen_.insert(rumor_key);
  on_new_confirmation(fact, rumor.id.origin, round, trace);
  if (from != rumor.id.origin) on_new_confirmation(fact, from, round, trace);

  EffectMask effects = 0;

  // Credibility gate. Membership traffic bypasses it: failure detection must
  // not deadlock on trust in the very peers being judged.
  if (!has_prefix(rumor.topic, kMemberPrefix)) {
    CredibilityPolicy policy{cfg_->protocol.k_confirmations,
                             cfg_->effective_theta()};
    if (!is_credible(confirmations, trust, fact, rumor.priority, from,
                     policy)) {
      held_[rumor_key] = rumor;
      held_from_[rumor_key] = from;
      held_since_[rumor_key] = round;
      TraceRecord rec{};
      rec.kind = TraceKind::gate;
      rec.round = round;
      rec.a = id_;
      rec.b = from;
      rec.c = fact;
      rec.d = rumor_key;
      rec.e = confirmations.count(fact);
      trace.push(rec);
      return kEffectTrustHeld;
    }
  }

  if (!adopt(rumor, from, round, trace)) return kEffectRejected;
  effects |= kEffectAdopted;

  if (rumor.ttl_hops > 0) {
    buffer.insert(rumor);
    effects |= kEffectBuffered;
  } else {
    effects |= kEffectTtlExhausted;
  }
  return effects;
}

void Node::on_new_confirmation(std::uint64_t fact, AgentId source,
                               std::uint32_t round, Trace& trace) {
  auto& fs = fact_state_[fact];
  if (fs.adopted && confirmations.count(fact) >= kMaxTrackedSources) return;

  const int before = confirmations.count(fact);
  const int now = confirmations.record(fact, source, id_);
  if (now == before) return;  // known source (or self), nothing new

  if (!fs.has_relayer && source != id_) {
    fs.has_relayer = true;
    fs.first_relayer = source;
  } else if (fs.adopted && fs.has_relayer && source != fs.first_relayer) {
    // Independent corroboration of something this node acted on: the peer
    // that first delivered it earns reputation.
    trust.update(fs.first_relayer, 1.0);
  }

  if (fs.adopted) return;

  // Re-examine held rumors carrying this fact; a new confirmation may clear
  // the bar.
  CredibilityPolicy policy{cfg_->protocol.k_confirmations,
                           cfg_->effective_theta()};
  std::vector<std::uint64_t> promoted;
  for (const auto& [key, held_rumor] : held_) {
    if (ConfirmationTracker::fact_key(held_rumor) != fact) continue;
    if (!is_credible(confirmations, trust, fact, held_rumor.priority,
                     held_from_[key], policy))
      continue;
    promoted.push_back(key);
  }
  for (std::uint64_t key : promoted) {
    Rumor held_rumor = held_[key];
    AgentId relayer = held_from_[key];
    held_.erase(key);
    held_from_.erase(key);
    held_since_.erase(key);
    TraceRecord rec{};
    rec.kind = TraceKind::promote;
    rec.effects = static_cast<EffectMask>(kEffectAdopted | kEffectPromoted);
    rec.round = round;
    rec.round2 = held_rumor.created_round;
    rec.a = id_;
    rec.b = relayer;
    rec.c = key;
    rec.d = fact;
    rec.e = confirmations.count(fact);
    trace.push(rec);
    adopt(held_rumor, relayer, round, trace);
    if (held_rumor.ttl_hops > 0) buffer.insert(held_rumor);
  }
}

bool Node::adopt(const Rumor& rumor, AgentId from, std::uint32_t round,
                 Trace& trace) {
  observe_lamport(rumor.version.lamport);
  fact_state_[ConfirmationTracker::fact_key(rumor)].adopted = true;

  if (has_prefix(rumor.topic, kMemberPrefix)) {
    handle_member_payload(rumor, round, trace);
    return true;  // unparseable member payloads degrade to no-ops below
  }
  if (has_prefix(rumor.topic, kTaskPrefix)) {
    auto ad = task_from_payload(rumor.payload);
    if (!ad) return false;
    merge_task_ad(*ad, round, trace);
    return true;
  }
  if (has_prefix(rumor.topic, kIntentPrefix)) {
    auto rec = intent_from_payload(rumor.payload);
    if (!rec) return false;
    intents.update(*rec, round);
    return true;
  }
  if (has_prefix(rumor.topic, kCounterPrefix)) {
    auto remote = gcounter_from_json(rumor.payload);
    if (!remote) return false;
    store.merge_counter(rumor.topic.substr(4), *remote);
    return true;
  }
  if (has_prefix(rumor.topic, kSetPrefix)) {
    auto remote = orset_from_json(rumor.payload);
    if (!remote) return false;
    store.merge_set(rumor.topic.substr(4), *remote);
    return true;
  }

  // Plain data rumor: topic is the key, payload the value (or a tombstone).
  LwwRecord rec = lww_from_payload(rumor.topic, rumor.payload, rumor.version,
                                   rumor.created_round);
  auto result = store.apply_lww(rec, from);
  if (!result.accepted) {
    // The relayer pushed something older than what we already hold.
    trust.update(from, 0.0);
  }
  return true;
}

void Node::handle_member_payload(const Rumor& rumor, std::uint32_t round,
                                 Trace& trace) {
  auto rec = member_from_payload(rumor.payload);
  if (!rec) return;

  if (rec->id == id_) {
    // Someone is spreading doubt about us. Refute with a higher incarnation;
    // only the subject itself can do this.
    if (rec->status != MemberStatus::alive &&
        rec->incarnation >= incarnation_) {
      incarnation_ = rec->incarnation + 1;
      MemberRecord alive_rec{id_, MemberStatus::alive, incarnation_, round};
      view.set(alive_rec);
      TraceRecord ev{};
      ev.kind = TraceKind::member_event;
      ev.round = round;
      ev.a = id_;
      ev.b = id_;
      ev.c = incarnation_;
      ev.e = static_cast<std::int64_t>(MemberStatus::alive);
      trace.push(ev);
      gossip_member(alive_rec, round, trace);
    }
    return;
  }

  rec->last_update_round = round;
  MemberStatus before = view.status_of(rec->id);
  if (!view.apply(*rec)) return;
  MemberStatus after = view.status_of(rec->id);
  if (after != MemberStatus::suspect) suspicion_.disarm(rec->id);
  if (after == before) return;
  TraceRecord ev{};
  ev.kind = TraceKind::member_event;
  ev.round = round;
  ev.a = id_;
  ev.b = rec->id;
  ev.c = rec->incarnation;
  ev.e = static_cast<std::int64_t>(after);
  trace.push(ev);
}

// --- forwarding -------------------------------------------------------------

std::vector<OutMsg> Node::gossip_round(std::uint32_t round, Trace& trace) {
  (void)trace;
  std::vector<OutMsg> out;
  if (!alive_) return out;
  Rng rng = Rng::derive(cfg_->seed, kSaltPeerSelect, id_, round);
  for (const auto& entry : buffer.entries()) {
    double p = forward_probability(entry.rumor.priority, entry.rounds_seen);
    if (!rng.coin(p)) continue;
    auto peers = select_peers(view, cfg_->fanout, rng);
    if (peers.empty()) continue;
    Rumor copy = entry.rumor;
    copy.ttl_hops -= 1;  // hop spent on this relay
    for (AgentId peer : peers) out.push_back(OutMsg{peer, MsgType::push, copy});
  }
  buffer.bump_rounds_seen();
  return out;
}

// --- round-start sweep ------------------------------------------------------

void Node::sweep(std::uint32_t round, Trace& trace) {
  if (!alive_) return;

  store.expire_sweep(round, cfg_->protocol.ttl_rounds);

  // Held rumors that never earned enough confirmations age out with the data
  // horizon.
  if (cfg_->protocol.ttl_rounds >= 0) {
    std::vector<std::uint64_t> stale;
    for (const auto& [key, since] : held_since_)
      if (round >= since + static_cast<std::uint32_t>(
                               cfg_->protocol.ttl_rounds))
        stale.push_back(key);
    for (auto key : stale) {
      held_.erase(key);
      held_from_.erase(key);
      held_since_.erase(key);
    }
  }

  if (cfg_->protocol.membership) {
    for (AgentId target : suspicion_.expired(
             round, static_cast<std::uint32_t>(
                        cfg_->protocol.suspicion_timeout))) {
      if (view.status_of(target) != MemberStatus::suspect) continue;
      MemberRecord dead_rec{target, MemberStatus::dead,
                            view.get(target).incarnation, round};
      view.set(dead_rec);
      TraceRecord ev{};
      ev.kind = TraceKind::member_event;
      ev.round = round;
      ev.a = id_;
      ev.b = target;
      ev.c = dead_rec.incarnation;
      ev.e = static_cast<std::int64_t>(MemberStatus::dead);
      trace.push(ev);
      gossip_member(dead_rec, round, trace);
    }
  }

  // Tasks this node announced: if the claimant died, re-open at the next
  // epoch so someone else can pick the work up.
  for (auto& [tid, ad] : tasks) {
    if (!task_origin_.contains(tid)) continue;
    if (ad.state != TaskState::claimed || !ad.claimant) continue;
    if (view.status_of(*ad.claimant) != MemberStatus::dead) continue;
    auto& done_epoch = reannounced_epoch_[tid];
    if (done_epoch > ad.epoch) continue;  // already re-opened this epoch
    done_epoch = ad.epoch + 1;
    TaskAd reopened = ad;
    reopened.state = TaskState::available;
    reopened.claimant.reset();
    reopened.epoch = ad.epoch + 1;
    reopened.claim_version = bump_clock();
    ad = reopened;
    TraceRecord ev{};
    ev.kind = TraceKind::task_event;
    ev.round = round;
    ev.a = id_;
    ev.b = static_cast<AgentId>(~0u);
    ev.c = reopened.epoch;
    ev.e = static_cast<std::int64_t>(reopened.state);
    ev.str = trace.intern(tid);
    trace.push(ev);
    gossip_task(reopened, round, trace);
  }

  // Finish work whose duration has elapsed.
  std::vector<std::string> finished;
  for (const auto& [tid, exec] : executing_)
    if (round >= exec.started + exec.needed) finished.push_back(tid);
  for (const auto& tid : finished) {
    executing_.erase(tid);
    profile.load = 0.5 * static_cast<double>(executing_.size());
    auto it = tasks.find(tid);
    if (it == tasks.end()) continue;
    TaskAd done = it->second;
    done.state = TaskState::done;
    done.claimant = id_;
    done.claim_version = bump_clock();
    it->second = done;
    TraceRecord ev{};
    ev.kind = TraceKind::exec_event;
    ev.round = round;
    ev.a = id_;
    ev.e = 0;  // finish
    ev.str = trace.intern(tid);
    trace.push(ev);
    TraceRecord tev{};
    tev.kind = TraceKind::task_event;
    tev.round = round;
    tev.a = id_;
    tev.b = id_;
    tev.c = done.epoch;
    tev.e = static_cast<std::int64_t>(TaskState::done);
    tev.str = trace.intern(tid);
    trace.push(tev);
    gossip_task(done, round, trace);
  }

  // Retry claims on anything still open; load may have freed up.
  for (const auto& [tid, ad] : tasks) {
    if (ad.state != TaskState::available) continue;
    if (claim_attempts_.contains({tid, ad.epoch})) continue;
    maybe_claim(tid, round, trace);
  }

  // Zone coverage: when the dwell in the current zone is over, move to the
  // most neglected zone and announce it.
  if (cfg_->workload.intents.enabled && round >= dwell_until_) {
    Rng rng = Rng::derive(cfg_->seed, kSaltZonePick, id_, round);
    auto zone = intents.pick_uncovered_zone(cfg_->workload.intents.zones,
                                            round,
                                            cfg_->workload.intents.silence_rounds,
                                            rng);
    if (zone) {
      current_zone_ = *zone;
      dwell_until_ = round + cfg_->workload.intents.dwell_rounds;
      IntentRecord rec{id_, "survey", *zone, bump_clock()};
      intents.update(rec, round);
      TraceRecord ev{};
      ev.kind = TraceKind::zone_pick;
      ev.round = round;
      ev.a = id_;
      ev.d = cfg_->workload.intents.zones;
      ev.e = static_cast<std::int64_t>(*zone);
      trace.push(ev);
      Rumor r = make_rumor(std::string(kIntentPrefix) + std::to_string(id_),
                           intent_to_payload(rec), Priority::normal, round,
                           cfg_->effective_ttl_hops(), true, rec.version);
      buffer_own(r);
    }
  }
}

// --- local actions ----------------------------------------------------------

Rumor Node::originate(const std::string& topic, const std::string& payload,
                      Priority priority, std::uint32_t round,
                      std::optional<int> ttl_hops, bool authentic,
                      Trace& trace) {
  Version v = bump_clock();
  Rumor r = make_rumor(topic, payload, priority, round,
                       ttl_hops.value_or(cfg_->effective_ttl_hops()),
                       authentic, v);
  adopt(r, id_, round, trace);
  buffer_own(r);
  return r;
}

Rumor Node::local_write(const std::string& key, const std::string& value,
                        std::uint32_t round, Trace& trace) {
  (void)trace;
  Version v = bump_clock();
  LwwRecord rec{key, value, v, false, std::nullopt, round};
  store.apply_lww(rec, id_);
  Rumor r = make_rumor(key, lww_payload(rec), Priority::normal, round,
                       cfg_->effective_ttl_hops(), true, v);
  buffer_own(r);
  return r;
}

Rumor Node::local_delete(const std::string& key, std::uint32_t round,
                         Trace& trace) {
  (void)trace;
  Version v = bump_clock();
  LwwRecord rec{key, "", v, true,
                round + static_cast<std::uint32_t>(
                            cfg_->effective_grace_period()),
                round};
  store.apply_lww(rec, id_);
  Rumor r = make_rumor(key, lww_payload(rec), Priority::normal, round,
                       cfg_->effective_ttl_hops(), true, v);
  buffer_own(r);
  return r;
}

Rumor Node::local_increment(const std::string& counter, std::int64_t amount,
                            std::uint32_t round, Trace& trace) {
  (void)trace;
  store.counter(counter).increment(id_, amount);
  Version v = bump_clock();
  Rumor r = make_rumor(std::string(kCounterPrefix) + counter,
                       gcounter_to_json(store.counter(counter)),
                       Priority::normal, round, cfg_->effective_ttl_hops(),
                       true, v);
  buffer_own(r);
  return r;
}

Rumor Node::local_set_op(const std::string& set_name,
                         const std::string& element, bool remove,
                         std::uint32_t round, Trace& trace) {
  (void)trace;
  auto& st = store.set(set_name);
  if (remove)
    st.remove(element);
  else
    st.add(element, OrTag{id_, next_tag_++});
  Version v = bump_clock();
  Rumor r = make_rumor(std::string(kSetPrefix) + set_name, orset_to_json(st),
                       Priority::normal, round, cfg_->effective_ttl_hops(),
                       true, v);
  buffer_own(r);
  return r;
}

void Node::announce_task(const TaskSpec& spec, std::uint32_t round,
                         Trace& trace) {
  if (tasks.contains(spec.task_id))
    throw std::invalid_argument("announce_task: duplicate task id '" +
                                spec.task_id + "'");
  TaskAd ad;
  ad.task_id = spec.task_id;
  ad.descriptor = spec.descriptor;
  ad.priority = spec.priority;
  ad.state = TaskState::available;
  ad.claim_version = bump_clock();
  ad.epoch = 0;
  ad.exec_rounds = spec.exec_rounds;
  tasks[spec.task_id] = ad;
  task_origin_[spec.task_id] = id_;
  TraceRecord ev{};
  ev.kind = TraceKind::task_event;
  ev.round = round;
  ev.a = id_;
  ev.b = static_cast<AgentId>(~0u);
  ev.c = 0;
  ev.e = static_cast<std::int64_t>(TaskState::available);
  ev.str = trace.intern(spec.task_id);
  trace.push(ev);
  gossip_task(ad, round, trace);
  maybe_claim(spec.task_id, round, trace);
}

// --- membership transitions --------------------------------------------------

void Node::mark_suspect(AgentId target, std::uint32_t round, Trace& trace) {
  if (view.status_of(target) != MemberStatus::alive) return;
  MemberRecord rec{target, MemberStatus::suspect, view.get(target).incarnation,
                   round};
  view.set(rec);
  suspicion_.arm(target, round);
  TraceRecord ev{};
  ev.kind = TraceKind::member_event;
  ev.round = round;
  ev.a = id_;
  ev.b = target;
  ev.c = rec.incarnation;
  ev.e = static_cast<std::int64_t>(MemberStatus::suspect);
  trace.push(ev);
  gossip_member(rec, round, trace);
}

void Node::refute_or_rejoin(std::uint32_t round, Trace& trace) {
  incarnation_ += 1;
  MemberRecord rec{id_, MemberStatus::alive, incarnation_, round};
  view.set(rec);
  TraceRecord ev{};
  ev.kind = TraceKind::member_event;
  ev.round = round;
  ev.a = id_;
  ev.b = id_;
  ev.c = incarnation_;
  ev.e = static_cast<std::int64_t>(MemberStatus::alive);
  trace.push(ev);
  gossip_member(rec, round, trace);
}

// --- anti-entropy ------------------------------------------------------------

EffectMask Node::apply_ae_record(const LwwRecord& rec, AgentId from,
                                 std::uint32_t round, Trace& trace) {
  observe_lamport(rec.version.lamport);

  // Same bar as the rumor path: the record's author and the sync partner
  // both vouch for the fact; without enough distinct backers it waits for a
  // later sync instead of slipping in unexamined.
  const std::uint64_t fact = lww_fact_key(rec);
  on_new_confirmation(fact, rec.version.author, round, trace);
  if (from != rec.version.author) on_new_confirmation(fact, from, round, trace);
  if (!fact_state_[fact].adopted) {
    CredibilityPolicy policy{cfg_->protocol.k_confirmations,
                             cfg_->effective_theta()};
    if (!is_credible(confirmations, trust, fact, Priority::normal, from,
                     policy)) {
      TraceRecord ev{};
      ev.kind = TraceKind::gate;
      ev.round = round;
      ev.a = id_;
      ev.b = from;
      ev.c = fact;
      ev.e = confirmations.count(fact);
      trace.push(ev);
      return kEffectTrustHeld;
    }
  }

  fact_state_[fact].adopted = true;
  auto result = store.apply_lww(rec, from);
  if (!result.accepted) {
    trust.update(from, 0.0);
    return kEffectDuplicate;
  }
  return kEffectAdopted;
}

void Node::merge_counter_state(const std::string& name,
                               const GCounter& remote) {
  store.merge_counter(name, remote);
}

void Node::merge_set_state(const std::string& name, const ORSet& remote) {
  store.merge_set(name, remote);
}

void Node::merge_task_ad(const TaskAd& ad, std::uint32_t round, Trace& trace) {
  observe_lamport(ad.claim_version.lamport);
  auto it = tasks.find(ad.task_id);
  bool had_before = it != tasks.end();
  TaskAd before = had_before ? it->second : TaskAd{};
  TaskAd merged = had_before ? resolve_claims(before, ad) : ad;
  tasks[ad.task_id] = merged;
  update_execution(ad.task_id, before, had_before, round, trace);
}

Digest Node::store_digest() const { return store.digest(); }

std::map<std::string, std::uint64_t> Node::aux_hashes() const {
  auto out = store.crdt_hashes();
  for (const auto& [tid, ad] : tasks)
    out[std::string(kTaskPrefix) + tid] = fnv1a64(ad.to_json());
  return out;
}

// --- coordination internals ---------------------------------------------------

void Node::gossip_member(const MemberRecord& rec, std::uint32_t round,
                         Trace& trace) {
  (void)trace;
  if (!cfg_->protocol.membership) return;
  Rumor r = make_rumor(std::string(kMemberPrefix) + std::to_string(rec.id),
                       member_to_payload(rec), Priority::critical, round,
                       cfg_->effective_ttl_hops(), true, bump_clock());
  buffer_own(r);
}

void Node::gossip_task(const TaskAd& ad, std::uint32_t round, Trace& trace) {
  (void)trace;
  Rumor r = make_rumor(std::string(kTaskPrefix) + ad.task_id, ad.to_json(),
                       ad.priority, round, cfg_->effective_ttl_hops(), true,
                       ad.claim_version);
  buffer_own(r);
}

void Node::maybe_claim(const std::string& task_id, std::uint32_t round,
                       Trace& trace) {
  auto it = tasks.find(task_id);
  if (it == tasks.end()) return;
  if (claim_attempts_.contains({task_id, it->second.epoch})) return;
  Version provisional{clock_.lamport + 1, id_};
  auto claim = evaluate_claim(profile, it->second,
                              cfg_->protocol.load_threshold, id_, provisional);
  if (!claim) return;
  bump_clock();
  claim_attempts_.insert({task_id, it->second.epoch});
  TaskAd before = it->second;
  TaskAd merged = resolve_claims(before, *claim);
  tasks[task_id] = merged;
  TraceRecord ev{};
  ev.kind = TraceKind::task_event;
  ev.round = round;
  ev.a = id_;
  ev.b = id_;
  ev.c = claim->epoch;
  ev.e = static_cast<std::int64_t>(TaskState::claimed);
  ev.str = trace.intern(task_id);
  trace.push(ev);
  gossip_task(*claim, round, trace);
  update_execution(task_id, before, true, round, trace);
}

void Node::update_execution(const std::string& task_id, const TaskAd& before,
                            bool had_before, std::uint32_t round,
                            Trace& trace) {
  (void)before;
  (void)had_before;
  const TaskAd& now = tasks[task_id];
  bool running = executing_.contains(task_id);

  if (now.state == TaskState::claimed && now.claimant == id_ && !running) {
    executing_[task_id] = ExecState{round, now.exec_rounds};
    profile.load = 0.5 * static_cast<double>(executing_.size());
    TraceRecord ev{};
    ev.kind = TraceKind::exec_event;
    ev.round = round;
    ev.a = id_;
    ev.e = 1;  // start
    ev.str = trace.intern(task_id);
    trace.push(ev);
    return;
  }

  if (running && (now.state == TaskState::done ||
                  (now.state == TaskState::claimed && now.claimant != id_) ||
                  (now.state == TaskState::available))) {
    // Lost the claim race, or the task re-opened/finished under us: stop.
    if (now.state == TaskState::done && now.claimant == id_) return;
    executing_.erase(task_id);
    profile.load = 0.5 * static_cast<double>(executing_.size());
    TraceRecord ev{};
    ev.kind = TraceKind::exec_event;
    ev.round = round;
    ev.a = id_;
    ev.e = 2;  // abort
    ev.str = trace.intern(task_id);
    trace.push(ev);
    return;
  }

  if (now.state == TaskState::available) maybe_claim(task_id, round, trace);
}

}  // namespace gossipmesh
