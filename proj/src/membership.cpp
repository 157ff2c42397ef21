#include "gossipmesh/membership.hpp"

#include <algorithm>
#include <stdexcept>

namespace gossipmesh {

const char* to_string(MemberStatus s) {
  switch (s) {
    case MemberStatus::alive: return "alive";
    case MemberStatus::suspect: return "suspect";
    case MemberStatus::dead: return "dead";
  }
  return "alive";
}

MemberRecord merge_member(const MemberRecord& local,
                          const MemberRecord& remote) {
  if (local.id != remote.id)
    throw std::invalid_argument("merge_member: id mismatch");
  if (remote.incarnation != local.incarnation)
    return remote.incarnation > local.incarnation ? remote : local;
  // Same incarnation: the worse claim sticks (alive < suspect < dead).
  if (remote.status != local.status)
    return static_cast<int>(remote.status) > static_cast<int>(local.status)
               ? remote
               : local;
  // Equal claims: keep the fresher bookkeeping stamp so the merge stays
  // commutative field-for-field.
  MemberRecord out = local;
  out.last_update_round =
      std::max(local.last_update_round, remote.last_update_round);
  return out;
}

bool MembershipView::apply(const MemberRecord& record) {
  MemberRecord before = get(record.id);
  MemberRecord after = merge_member(before, record);
  if (after.incarnation == before.incarnation &&
      after.status == before.status)
    return false;
  account(before.status, after.status);
  overrides_[record.id] = after;
  return true;
}

void MembershipView::set(const MemberRecord& record) {
  MemberRecord before = get(record.id);
  account(before.status, record.status);
  overrides_[record.id] = record;
}

void MembershipView::account(MemberStatus before, MemberStatus after) {
  if (before == after) return;
  if (before == MemberStatus::suspect) --suspects_;
  if (before == MemberStatus::dead) --deads_;
  if (after == MemberStatus::suspect) ++suspects_;
  if (after == MemberStatus::dead) ++deads_;
}

std::vector<AgentId> MembershipView::ids_with_status(MemberStatus s) const {
  std::vector<AgentId> out;
  if (s == MemberStatus::alive) {
    out.reserve(count(MemberStatus::alive));
    for (AgentId id = 0; id < n_; ++id)
      if (status_of(id) == MemberStatus::alive) out.push_back(id);
    return out;
  }
  for (const auto& [id, rec] : overrides_)
    if (rec.status == s) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<AgentId> MembershipView::pick_probe_target(Rng& rng) const {
  std::uint32_t candidates = n_ - deads_;
  if (status_of(self_) != MemberStatus::dead) --candidates;
  if (candidates == 0) return std::nullopt;
  // Rejection sampling against the baseline+overrides view; falls back to a
  // direct index into the candidate list when rejections pile up (possible
  // only when most of the mesh is dead, i.e. n is small by then).
  for (int tries = 0; tries < 64; ++tries) {
    AgentId id = rng.uniform_index(n_);
    if (id == self_) continue;
    if (status_of(id) != MemberStatus::dead) return id;
  }
  std::vector<AgentId> pool;
  pool.reserve(candidates);
  for (AgentId id = 0; id < n_; ++id)
    if (id != self_ && status_of(id) != MemberStatus::dead) pool.push_back(id);
  if (pool.empty()) return std::nullopt;
  return pool[rng.uniform_index(static_cast<std::uint32_t>(pool.size()))];
}

std::vector<AgentId> MembershipView::pick_proxies(Rng& rng, int want,
                                                  AgentId target) const {
  std::vector<AgentId> out;
  if (want <= 0) return out;
  std::uint32_t avail = count(MemberStatus::alive);
  if (status_of(self_) == MemberStatus::alive) --avail;
  if (target != self_ && status_of(target) == MemberStatus::alive) --avail;
  std::uint32_t goal = std::min<std::uint32_t>(static_cast<std::uint32_t>(want), avail);
  if (goal == 0) return out;
  auto taken = [&](AgentId id) {
    return std::find(out.begin(), out.end(), id) != out.end();
  };
  int tries = 0;
  while (out.size() < goal && tries < 96) {
    ++tries;
    AgentId id = rng.uniform_index(n_);
    if (id == self_ || id == target || taken(id)) continue;
    if (status_of(id) != MemberStatus::alive) continue;
    out.push_back(id);
  }
  if (out.size() < goal) {
    for (AgentId id = 0; id < n_ && out.size() < goal; ++id) {
      if (id == self_ || id == target || taken(id)) continue;
      if (status_of(id) == MemberStatus::alive) out.push_back(id);
    }
  }
  return out;
}

std::vector<AgentId> SuspicionTimers::expired(std::uint32_t round,
                                              std::uint32_t timeout) {
  std::vector<AgentId> out;
  for (const auto& [id, since] : since_)
    if (round >= since && round - since >= timeout) out.push_back(id);
  std::sort(out.begin(), out.end());
  for (AgentId id : out) since_.erase(id);
  return out;
}

}  // namespace gossipmesh
