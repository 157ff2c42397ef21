#include "gossipmesh/coordination.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <stdexcept>

namespace gossipmesh {

using json = nlohmann::ordered_json;

const char* to_string(TaskState s) {
  switch (s) {
    case TaskState::available: return "available";
    case TaskState::claimed: return "claimed";
    case TaskState::done: return "done";
  }
  return "available";
}

std::string TaskAd::to_json() const {
  json j;
  j["claim_author"] = claim_version.author;
  j["claim_lamport"] = claim_version.lamport;
  j["claimant"] = claimant.has_value() ? json(*claimant) : json(nullptr);
  j["descriptor"] = descriptor;
  j["epoch"] = epoch;
  j["exec_rounds"] = exec_rounds;
  j["priority"] = to_string(priority);
  j["state"] = to_string(state);
  j["task_id"] = task_id;
  return j.dump();
}

TaskAd resolve_claims(const TaskAd& a, const TaskAd& b) {
  if (a.task_id != b.task_id)
    throw std::invalid_argument("resolve_claims: task id mismatch");
  auto a_done = a.state == TaskState::done;
  auto b_done = b.state == TaskState::done;
  if (a_done != b_done) return a_done ? a : b;
  if (!a_done && a.epoch != b.epoch) return a.epoch > b.epoch ? a : b;
  if (a.state != b.state)
    return static_cast<int>(a.state) > static_cast<int>(b.state) ? a : b;
  // Same state (and epoch): earliest transition in the version total order
  // wins — first claim sticks everywhere with no coordination.
  auto key = [](const TaskAd& t) {
    return std::pair<std::uint64_t, AgentId>(
        t.claim_version.lamport, t.claimant.value_or(t.claim_version.author));
  };
  if (key(a) != key(b)) return key(a) < key(b) ? a : b;
  // Full tie: pick deterministically by serialized bytes so the merge stays
  // a total order even on degenerate inputs.
  return a.to_json() <= b.to_json() ? a : b;
}

std::optional<TaskAd> evaluate_claim(const AgentProfile& profile,
                                     const TaskAd& ad, double load_threshold,
                                     AgentId self, Version claim_version) {
  if (ad.state != TaskState::available) return std::nullopt;
  if (profile.load >= load_threshold) return std::nullopt;
  for (const auto& need : ad.descriptor) {
    if (std::find(profile.capabilities.begin(), profile.capabilities.end(),
                  need) == profile.capabilities.end())
      return std::nullopt;
  }
  TaskAd claim = ad;
  claim.state = TaskState::claimed;
  claim.claimant = self;
  claim.claim_version = claim_version;
  return claim;
}

std::pair<double, double> averaging_step(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("averaging_step: non-finite input");
  double mid = (a + b) / 2.0;
  return {mid, mid};
}

bool IntentRegistry::update(const IntentRecord& record, std::uint32_t round) {
  // Any structurally valid mention refreshes zone coverage recency, even a
  // stale-version one - the zone was evidently visited.
  auto [slot, inserted] = zone_last_mention_.try_emplace(record.zone, round);
  if (!inserted && round > slot->second) slot->second = round;
  auto it = intents_.find(record.agent);
  if (it != intents_.end() &&
      compare_versions(record.version, it->second.version) != Ordering::greater)
    return false;
  intents_[record.agent] = record;
  return true;
}

const IntentRecord* IntentRegistry::intent_of(AgentId agent) const {
  auto it = intents_.find(agent);
  return it == intents_.end() ? nullptr : &it->second;
}

std::optional<std::uint32_t> IntentRegistry::last_mention(
    std::uint32_t zone) const {
  auto it = zone_last_mention_.find(zone);
  if (it == zone_last_mention_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> IntentRegistry::pick_uncovered_zone(
    std::uint32_t zone_count, std::uint32_t now, std::uint32_t silence_rounds,
    Rng& rng) const {
  if (zone_count == 0) return std::nullopt;
  std::vector<std::uint32_t> silent;
  for (std::uint32_t z = 0; z < zone_count; ++z) {
    auto last = last_mention(z);
    // Zones never mentioned are infinitely stale.
    if (!last.has_value() || now - *last >= silence_rounds)
      silent.push_back(z);
  }
  if (!silent.empty())
    return silent[rng.uniform_index(static_cast<std::uint32_t>(silent.size()))];
  // Every zone is fresh: fall back to the least recently mentioned one.
  std::uint32_t pick = 0;
  std::uint32_t oldest = last_mention(0).value_or(0);
  for (std::uint32_t z = 1; z < zone_count; ++z) {
    std::uint32_t heard = last_mention(z).value_or(0);
    if (heard < oldest) {
      oldest = heard;
      pick = z;
    }
  }
  return pick;
}

}  // namespace gossipmesh
