#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gossipmesh/core.hpp"
#include "gossipmesh/rng.hpp"

namespace gossipmesh {

enum class MemberStatus : std::uint8_t { alive = 0, suspect = 1, dead = 2 };

const char* to_string(MemberStatus s);

struct MemberRecord {
  AgentId id = 0;
  MemberStatus status = MemberStatus::alive;
  std::uint32_t incarnation = 0;
  std::uint32_t last_update_round = 0;
};

// Conflict rule for membership gossip: higher incarnation wins outright; at
// equal incarnation the worse claim wins (dead > suspect > alive), so a node
// can only clear suspicion about itself by bumping its own incarnation.
MemberRecord merge_member(const MemberRecord& local, const MemberRecord& remote);

// One node's view of the whole mesh. Stored as a baseline ("everyone alive at
// incarnation 0") plus overrides, so a 25k-node run does not pay O(N^2)
// memory for N mostly-default views.
class MembershipView {
 public:
  MembershipView(AgentId self, std::uint32_t n_agents)
      : self_(self), n_(n_agents) {}

  AgentId self() const { return self_; }
  std::uint32_t size() const { return n_; }

  MemberRecord get(AgentId id) const {
    auto it = overrides_.find(id);
    if (it != overrides_.end()) return it->second;
    return MemberRecord{id, MemberStatus::alive, 0, 0};
  }

  MemberStatus status_of(AgentId id) const { return get(id).status; }

  // Merge a gossiped record in; returns true when the view changed.
  bool apply(const MemberRecord& record);

  // Local transition (probe failure, timeout, refutation); unconditional.
  void set(const MemberRecord& record);

  std::uint32_t count(MemberStatus s) const {
    switch (s) {
      case MemberStatus::alive: return n_ - suspects_ - deads_;
      case MemberStatus::suspect: return suspects_;
      case MemberStatus::dead: return deads_;
    }
    return 0;
  }

  // Ids currently in the given status, ascending. O(overrides) for suspect
  // and dead; O(n) for alive (use count() when only the number is needed).
  std::vector<AgentId> ids_with_status(MemberStatus s) const;

  // Uniform pick among non-dead, non-self members (probe target). nullopt
  // when no candidate exists. Deterministic given the rng stream.
  std::optional<AgentId> pick_probe_target(Rng& rng) const;

  // Up to `want` distinct alive members excluding self and `target`
  // (indirect-probe proxies).
  std::vector<AgentId> pick_proxies(Rng& rng, int want, AgentId target) const;

 private:
  void account(MemberStatus before, MemberStatus after);

  AgentId self_;
  std::uint32_t n_;
  std::uint32_t suspects_ = 0;
  std::uint32_t deads_ = 0;
  std::unordered_map<AgentId, MemberRecord> overrides_;
};

// Suspicion bookkeeping driven by the protocol round loop.
class SuspicionTimers {
 public:
  void arm(AgentId id, std::uint32_t round) { since_.emplace(id, round); }
  void disarm(AgentId id) { since_.erase(id); }

  // Ids suspect for >= timeout rounds as of `round`, ascending; disarmed as
  // they are returned.
  std::vector<AgentId> expired(std::uint32_t round, std::uint32_t timeout);

  bool armed(AgentId id) const { return since_.contains(id); }

 private:
  std::unordered_map<AgentId, std::uint32_t> since_;
};

}  // namespace gossipmesh
