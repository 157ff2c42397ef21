#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "gossipmesh/node.hpp"
#include "gossipmesh/scenario.hpp"
#include "gossipmesh/trace.hpp"

namespace gossipmesh {

// Deterministic round-based network: every message outcome (loss, latency,
// partition, dead target) is decided from seeded streams, so a (config, seed)
// pair always produces bit-identical traces.
class Simulator {
 public:
  explicit Simulator(ScenarioConfig cfg);
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  // Runs the whole scenario and returns the completed trace (header..footer).
  Trace run();

  const ScenarioConfig& config() const { return cfg_; }
  std::vector<Node>& nodes() { return nodes_; }

 private:
  struct PendingMsg {
    std::uint64_t seq = 0;
    std::uint32_t send_round = 0;
    AgentId from = 0;
    AgentId to = 0;
    MsgType type = MsgType::push;
    Rumor rumor;
    bool lost = false;
  };

  void do_churn(std::uint32_t round);
  void do_sweeps(std::uint32_t round);
  void do_probes(std::uint32_t round);
  void do_adversaries(std::uint32_t round);
  void do_gossip(std::uint32_t round);
  void do_anti_entropy(std::uint32_t round);
  void do_averaging(std::uint32_t round);
  void do_delivery(std::uint32_t round);
  void do_workload(std::uint32_t round);
  void finalize();

  // One synchronous message leg (probe / anti-entropy / averaging traffic):
  // draws a loss coin, traces the attempt, reports whether it got through.
  bool leg(AgentId from, AgentId to, MsgType type, Rng& rng,
           std::uint32_t round, EffectMask extra = kEffectNone,
           std::uint64_t d = 0);

  void enqueue_push(AgentId from, const OutMsg& out, std::uint32_t send_round,
                    Rng& loss_rng, Rng& latency_rng);
  void schedule_broadcast(AgentId origin, const Rumor& rumor,
                          std::uint32_t send_round);

  bool cut_off(AgentId a, AgentId b) const {
    return partitioned_ && group_[a] != group_[b];
  }

  // Ground truth a scenario file cannot know in advance: the node currently
  // holding the claim on a task, per the merged view of every live ad.
  std::vector<AgentId> resolve_targets(const ChurnEvent& event) const;

  ScenarioConfig cfg_;
  std::vector<Node> nodes_;
  Trace trace_;
  std::map<std::uint32_t, std::vector<PendingMsg>> pending_;
  std::uint64_t next_msg_seq_ = 0;
  std::vector<std::uint8_t> group_;
  bool partitioned_ = false;
  std::set<AgentId> fabricated_;
};

// Convenience wrapper: validate, simulate, return the trace.
Trace run_scenario(const ScenarioConfig& cfg);

}  // namespace gossipmesh
