#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "gossipmesh/core.hpp"
#include "gossipmesh/membership.hpp"
#include "gossipmesh/rng.hpp"

namespace gossipmesh {

// Probability that a node forwards a buffered rumor this round. Critical
// rumors always go out; normal interest cools as 1/r with the rounds the
// rumor has sat in the buffer, routine twice as fast. rounds_seen starts
// at 1 on the round of first adoption.
double forward_probability(Priority priority, std::uint32_t rounds_seen);

// Active rumor set a node is still spreading. Bounded; when full, the entry
// that has been circulating longest (highest rounds_seen, ties by oldest
// created_round) is evicted — fresh rumors keep moving under pressure.
class HotBuffer {
 public:
  struct Entry {
    Rumor rumor;
    std::uint32_t rounds_seen = 1;
  };

  explicit HotBuffer(std::size_t capacity) : capacity_(capacity) {}

  // False if the rumor id is already buffered. Evicts per policy when full.
  bool insert(const Rumor& rumor);
  bool contains(std::uint64_t rumor_key) const {
    return index_.contains(rumor_key);
  }
  Entry* find(std::uint64_t rumor_key);
  void erase(std::uint64_t rumor_key);

  // Called once per round after the forwarding pass.
  void bump_rounds_seen() {
    for (auto& e : entries_) ++e.rounds_seen;
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::vector<Entry>& entries() { return entries_; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  void reindex();

  std::size_t capacity_;
  std::vector<Entry> entries_;  // insertion order == age order
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

// Per-round cap on *new* rumor adoptions; duplicates are dropped before they
// reach the limiter, so only distinct new rumor ids are charged. Critical
// rumors are exempt — flood resistance must not delay alarms.
class RateLimiter {
 public:
  explicit RateLimiter(int max_new_per_round) : max_(max_new_per_round) {}

  bool admit(std::uint32_t round, Priority priority) {
    if (priority == Priority::critical) return true;
    if (round != round_) {
      round_ = round;
      admitted_ = 0;
    }
    if (max_ >= 0 && admitted_ >= max_) return false;
    ++admitted_;
    return true;
  }

  int admitted_this_round(std::uint32_t round) const {
    return round == round_ ? admitted_ : 0;
  }

 private:
  int max_;  // negative disables the cap
  std::uint32_t round_ = 0xffffffffu;
  int admitted_ = 0;
};

// Uniform fanout-peer selection over live (non-dead, non-self, non-excluded)
// members, without replacement. Returns fewer than `fanout` when the
// candidate pool is smaller.
std::vector<AgentId> select_peers(const MembershipView& view, int fanout,
                                  Rng& rng,
                                  const std::vector<AgentId>& exclude = {});

}  // namespace gossipmesh
