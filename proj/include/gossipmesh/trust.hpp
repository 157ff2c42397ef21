#pragma once

#include <cstdint>
#include <set>
#include <unordered_map>
#include <vector>

#include "gossipmesh/core.hpp"

namespace gossipmesh {

// Tracks which distinct peers have asserted each fact. Facts are identified
// by content (topic + payload), not by rumor id: the same claim arriving from
// two independent origins counts as two confirmations even though the rumor
// ids differ.
class ConfirmationTracker {
 public:
  static std::uint64_t fact_key(const Rumor& rumor) {
    std::uint64_t h = fnv1a64(rumor.topic);
    h = fnv1a64_u64(0x1fULL, h);  // topic/payload separator
    return fnv1a64(rumor.payload, h);
  }

  // Record that `source` asserted the fact; returns the updated count of
  // distinct sources. `self` never counts toward its own confirmations.
  int record(std::uint64_t fact, AgentId source, AgentId self) {
    if (source == self) return count(fact);
    auto& entry = sources_[fact];
    entry.insert(source);
    return static_cast<int>(entry.size());
  }

  int count(std::uint64_t fact) const {
    auto it = sources_.find(fact);
    return it == sources_.end() ? 0 : static_cast<int>(it->second.size());
  }

  const std::set<AgentId>* sources(std::uint64_t fact) const {
    auto it = sources_.find(fact);
    return it == sources_.end() ? nullptr : &it->second;
  }

  void forget(std::uint64_t fact) { sources_.erase(fact); }

 private:
  std::unordered_map<std::uint64_t, std::set<AgentId>> sources_;
};

// Per-peer reputation as an exponential moving average over interaction
// outcomes: corroborated relays pull the score toward 1, contradicted ones
// toward 0. New peers start at `initial`.
class TrustLedger {
 public:
  TrustLedger(double initial, double alpha)
      : initial_(initial), alpha_(alpha) {}

  double score(AgentId peer) const {
    auto it = scores_.find(peer);
    return it == scores_.end() ? initial_ : it->second;
  }

  double update(AgentId peer, double outcome) {
    double s = score(peer);
    s = (1.0 - alpha_) * s + alpha_ * outcome;
    if (s < 0.0) s = 0.0;
    if (s > 1.0) s = 1.0;
    scores_[peer] = s;
    return s;
  }

  // Sum of trust scores across a set of asserting peers.
  double weight_of(const std::set<AgentId>& peers) const {
    double sum = 0.0;
    for (AgentId p : peers) sum += score(p);
    return sum;
  }

 private:
  double initial_;
  double alpha_;
  std::unordered_map<AgentId, double> scores_;
};

struct CredibilityPolicy {
  int k_confirmations = 1;
  double theta = 1.0;  // weighted-trust alternative threshold
};

// A rumor is credible enough to act on when either enough distinct peers
// assert it or the combined trust weight behind it clears theta. Critical
// rumors from highly trusted relayers (score >= 0.9) skip the wait.
bool is_credible(const ConfirmationTracker& confirmations,
                 const TrustLedger& trust, std::uint64_t fact,
                 Priority priority, AgentId relayer,
                 const CredibilityPolicy& policy);

}  // namespace gossipmesh
