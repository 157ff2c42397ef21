#include "gossipmesh/dissemination.hpp"

#include <algorithm>

namespace gossipmesh {

double forward_probability(Priority priority, std::uint32_t rounds_seen) {
  if (rounds_seen == 0) rounds_seen = 1;
  switch (priority) {
    case Priority::critical: return 1.0;
    case Priority::normal: return 1.0 / static_cast<double>(rounds_seen);
    case Priority::routine: return 1.0 / (2.0 * static_cast<double>(rounds_seen));
  }
  return 0.0;
}

bool HotBuffer::insert(const Rumor& rumor) {
  std::uint64_t key = rumor.id.key();
  if (index_.contains(key)) return false;
  if (entries_.size() >= capacity_ && capacity_ > 0) {
    // Evict the entry that has circulated longest: highest rounds_seen,
    // ties broken toward the oldest created_round.
    std::size_t victim = 0;
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      const Entry& e = entries_[i];
      const Entry& v = entries_[victim];
      if (e.rounds_seen > v.rounds_seen ||
          (e.rounds_seen == v.rounds_seen &&
           e.rumor.created_round < v.rumor.created_round))
        victim = i;
    }
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(victim));
    reindex();
  }
  index_[key] = entries_.size();
  entries_.push_back(Entry{rumor, 1});
  return true;
}

HotBuffer::Entry* HotBuffer::find(std::uint64_t rumor_key) {
  auto it = index_.find(rumor_key);
  if (it == index_.end()) return nullptr;
  return &entries_[it->second];
}

void HotBuffer::erase(std::uint64_t rumor_key) {
  auto it = index_.find(rumor_key);
  if (it == index_.end()) return;
  entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(it->second));
  reindex();
}

void HotBuffer::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i)
    index_[entries_[i].rumor.id.key()] = i;
}

std::vector<AgentId> select_peers(const MembershipView& view, int fanout,
                                  Rng& rng,
                                  const std::vector<AgentId>& exclude) {
  std::vector<AgentId> out;
  if (fanout <= 0) return out;
  std::uint32_t n = view.size();
  auto excluded = [&](AgentId id) {
    return std::find(exclude.begin(), exclude.end(), id) != exclude.end();
  };
  std::uint32_t candidates = 0;
  if (exclude.empty()) {
    candidates = n - view.count(MemberStatus::dead);
    if (view.status_of(view.self()) != MemberStatus::dead) --candidates;
  } else {
    for (AgentId id = 0; id < n; ++id)
      if (id != view.self() && !excluded(id) &&
          view.status_of(id) != MemberStatus::dead)
        ++candidates;
  }
  std::uint32_t goal =
      std::min<std::uint32_t>(static_cast<std::uint32_t>(fanout), candidates);
  if (goal == 0) return out;
  auto taken = [&](AgentId id) {
    return std::find(out.begin(), out.end(), id) != out.end();
  };
  int tries = 0;
  // Rejection sampling keeps this O(fanout) on healthy meshes regardless of
  // n; the scan fallback only triggers when nearly everyone is dead.
  while (out.size() < goal && tries < 96) {
    ++tries;
    AgentId id = rng.uniform_index(n);
    if (id == view.self() || taken(id) || excluded(id)) continue;
    if (view.status_of(id) == MemberStatus::dead) continue;
    out.push_back(id);
  }
  if (out.size() < goal) {
    for (AgentId id = 0; id < n && out.size() < goal; ++id) {
      if (id == view.self() || taken(id) || excluded(id)) continue;
      if (view.status_of(id) == MemberStatus::dead) continue;
      out.push_back(id);
    }
  }
  return out;
}

}  // namespace gossipmesh
