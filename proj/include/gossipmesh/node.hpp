#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gossipmesh/coordination.hpp"
#include "gossipmesh/core.hpp"
#include "gossipmesh/dissemination.hpp"
#include "gossipmesh/membership.hpp"
#include "gossipmesh/scenario.hpp"
#include "gossipmesh/state_store.hpp"
#include "gossipmesh/trace.hpp"
#include "gossipmesh/trust.hpp"

namespace gossipmesh {

struct OutMsg {
  AgentId to = 0;
  MsgType type = MsgType::push;
  Rumor rumor;
};

// Canonical payload for an LWW record riding a rumor or an anti-entropy
// transfer; both paths use the same bytes so content hashes line up.
std::string lww_payload(const LwwRecord& rec);
LwwRecord lww_from_payload(const std::string& key, const std::string& payload,
                           const Version& version, std::uint32_t born_round);
// Content identity of a store record, equal to the fact key of the rumor
// that would carry it.
std::uint64_t lww_fact_key(const LwwRecord& rec);

// One agent: membership view, replicated store, hot rumor buffer, trust
// state, and the coordination behaviors. All methods are deterministic given
// the inputs; randomness comes in through explicitly derived streams.
class Node {
 public:
  Node(AgentId id, const ScenarioConfig* cfg);

  AgentId id() const { return id_; }
  bool alive() const { return alive_; }
  void set_alive(bool v) { alive_ = v; }
  std::uint32_t incarnation() const { return incarnation_; }

  // --- round phases -------------------------------------------------------

  // Round start: data expiry, held-rumor expiry, suspicion timeouts,
  // claimant-death re-announcement, intent re-picks, task completion.
  void sweep(std::uint32_t round, Trace& trace);

  // Forwarding pass: admitted buffered rumors go to fanout-selected peers
  // with ttl decremented.
  std::vector<OutMsg> gossip_round(std::uint32_t round, Trace& trace);

  // Receive one rumor; returns what happened to it.
  EffectMask handle_gossip(const Rumor& rumor, AgentId from,
                           std::uint32_t round, Trace& trace);

  // --- local actions (workload / behaviors) --------------------------------

  // Mint and adopt a fresh rumor; it enters the hot buffer for forwarding.
  Rumor originate(const std::string& topic, const std::string& payload,
                  Priority priority, std::uint32_t round,
                  std::optional<int> ttl_hops, bool authentic, Trace& trace);

  // Each local mutation applies to this node's replica and returns the rumor
  // that will carry it; record and rumor share one version stamp.
  Rumor local_write(const std::string& key, const std::string& value,
                    std::uint32_t round, Trace& trace);
  Rumor local_delete(const std::string& key, std::uint32_t round, Trace& trace);
  Rumor local_increment(const std::string& counter, std::int64_t amount,
                        std::uint32_t round, Trace& trace);
  Rumor local_set_op(const std::string& set_name, const std::string& element,
                     bool remove, std::uint32_t round, Trace& trace);
  // Throws std::invalid_argument on duplicate task_id at this origin.
  void announce_task(const TaskSpec& spec, std::uint32_t round, Trace& trace);

  // Membership transitions driven by the simulator's probe orchestration.
  void mark_suspect(AgentId target, std::uint32_t round, Trace& trace);
  // Incarnation bump + alive announcement (revive / rejoin).
  void refute_or_rejoin(std::uint32_t round, Trace& trace);

  // Anti-entropy receive path: merge one record without rumor semantics.
  // The credibility gate still applies — reconciliation is not a back door
  // around k-confirmation. Returns adopted / trust_held / duplicate.
  EffectMask apply_ae_record(const LwwRecord& rec, AgentId from,
                             std::uint32_t round, Trace& trace);
  void merge_counter_state(const std::string& name, const GCounter& remote);
  void merge_set_state(const std::string& name, const ORSet& remote);
  void merge_task_ad(const TaskAd& ad, std::uint32_t round, Trace& trace);

  // Anti-entropy digest of everything this node replicates: LWW versions
  // plus hashes for CRDTs and task ads.
  Digest store_digest() const;
  std::map<std::string, std::uint64_t> aux_hashes() const;

  // --- state (plain access for the simulator, metrics, and tests) ---------

  MembershipView view;
  Store store;
  HotBuffer buffer;
  RateLimiter limiter;
  ConfirmationTracker confirmations;
  TrustLedger trust;
  IntentRegistry intents;
  AgentProfile profile;
  std::map<std::string, TaskAd> tasks;
  double avg_value = 0.0;

  const std::map<std::uint64_t, Rumor>& held() const { return held_; }
  Version clock() const { return clock_; }

 private:
  struct FactState {
    bool adopted = false;
    bool has_relayer = false;
    AgentId first_relayer = 0;
  };
  struct ExecState {
    std::uint32_t started = 0;
    std::uint32_t needed = 0;
  };

  Version bump_clock();
  void observe_lamport(std::uint64_t lamport);
  Rumor make_rumor(const std::string& topic, const std::string& payload,
                   Priority priority, std::uint32_t round, int ttl_hops,
                   bool authentic, Version version);
  void buffer_own(const Rumor& rumor);
  bool adopt(const Rumor& rumor, AgentId from, std::uint32_t round,
             Trace& trace);
  void handle_member_payload(const Rumor& rumor, std::uint32_t round,
                             Trace& trace);
  void on_new_confirmation(std::uint64_t fact, AgentId source,
                           std::uint32_t round, Trace& trace);
  void gossip_member(const MemberRecord& rec, std::uint32_t round,
                     Trace& trace);
  void gossip_task(const TaskAd& ad, std::uint32_t round, Trace& trace);
  void maybe_claim(const std::string& task_id, std::uint32_t round,
                   Trace& trace);
  void update_execution(const std::string& task_id, const TaskAd& before,
                        bool had_before, std::uint32_t round, Trace& trace);
  bool topic_allowed(const std::string& topic) const;

  AgentId id_;
  const ScenarioConfig* cfg_;
  bool alive_ = true;
  std::uint32_t incarnation_ = 0;
  Version clock_;
  std::uint32_t next_seq_ = 0;
  std::uint32_t next_tag_ = 0;

  SuspicionTimers suspicion_;
  std::unordered_set<std::uint64_t> seen_;
  std::map<std::uint64_t, Rumor> held_;          // rumor key -> held rumor
  std::map<std::uint64_t, AgentId> held_from_;   // rumor key -> relayer
  std::map<std::uint64_t, std::uint32_t> held_since_;
  std::unordered_map<std::uint64_t, FactState> fact_state_;
  std::map<std::string, AgentId> task_origin_;
  std::map<std::string, std::uint32_t> task_exec_rounds_;
  std::set<std::pair<std::string, std::uint32_t>> claim_attempts_;
  std::map<std::string, std::uint32_t> reannounced_epoch_;
  std::map<std::string, ExecState> executing_;
  std::optional<std::uint32_t> current_zone_;
  std::uint32_t dwell_until_ = 0;
};

}  // namespace gossipmesh
