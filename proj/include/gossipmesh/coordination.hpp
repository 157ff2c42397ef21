#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gossipmesh/core.hpp"
#include "gossipmesh/rng.hpp"

namespace gossipmesh {

enum class TaskState : std::uint8_t { available = 0, claimed = 1, done = 2 };

const char* to_string(TaskState s);

// Gossiped task advertisement. `epoch` counts re-announcements: when a
// claimant dies the announcer re-opens the task at epoch+1, which beats any
// stale claimed-state ad from the previous epoch in the merge order.
struct TaskAd {
  std::string task_id;
  std::vector<std::string> descriptor;  // capability requirements
  Priority priority = Priority::normal;
  TaskState state = TaskState::available;
  std::optional<AgentId> claimant;
  Version claim_version;  // version of the current state transition
  std::uint32_t epoch = 0;
  std::uint32_t exec_rounds = 5;  // work duration, carried so any claimant knows

  std::string to_json() const;
};

// Deterministic conflict resolution between two ads for the same task:
//   done beats everything (terminal), higher epoch beats lower,
//   claimed beats available, and between two claims the *smaller*
//   (lamport, claimant) pair wins — first claim in the total order sticks,
//   every node resolves identically with no coordination.
TaskAd resolve_claims(const TaskAd& a, const TaskAd& b);

struct AgentProfile {
  std::vector<std::string> capabilities;
  double load = 0.0;  // 0..1 utilization
};

// Local claim decision: capable, not overloaded, task still available.
// Returns the claim ad to gossip, stamped with `claim_version`.
std::optional<TaskAd> evaluate_claim(const AgentProfile& profile,
                                     const TaskAd& ad, double load_threshold,
                                     AgentId self, Version claim_version);

// One pairwise gossip-averaging exchange: both sides move to the midpoint.
// The pair sum is conserved exactly as written (a+b)/2 on both sides.
std::pair<double, double> averaging_step(double a, double b);

// "I am doing X in zone Z" announcements, newest version wins per agent.
struct IntentRecord {
  AgentId agent = 0;
  std::string activity;
  std::uint32_t zone = 0;
  Version version;
};

class IntentRegistry {
 public:
  // Returns true when the record was newer and replaced/added state.
  bool update(const IntentRecord& record, std::uint32_t round);

  const IntentRecord* intent_of(AgentId agent) const;

  // Latest round at which anyone was heard covering `zone` (via update()).
  std::optional<std::uint32_t> last_mention(std::uint32_t zone) const;

  // Pick uniformly among zones nobody has been heard covering for
  // >= silence_rounds (never-mentioned zones are infinitely stale); when
  // every zone is fresh, fall back to the least recently mentioned one.
  // nullopt only when zone_count is 0.
  std::optional<std::uint32_t> pick_uncovered_zone(std::uint32_t zone_count,
                                                   std::uint32_t now,
                                                   std::uint32_t silence_rounds,
                                                   Rng& rng) const;

  const std::map<AgentId, IntentRecord>& intents() const { return intents_; }

 private:
  std::map<AgentId, IntentRecord> intents_;
  std::map<std::uint32_t, std::uint32_t> zone_last_mention_;
};

}  // namespace gossipmesh
