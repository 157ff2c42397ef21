#include "gossipmesh/core.hpp"

#include <json.hpp>

namespace gossipmesh {

using json = nlohmann::ordered_json;

Ordering compare_versions(const Version& a, const Version& b) {
  if (a.lamport != b.lamport)
    return a.lamport < b.lamport ? Ordering::less : Ordering::greater;
  if (a.author != b.author)
    return a.author < b.author ? Ordering::less : Ordering::greater;
  return Ordering::equal;
}

Version next_version(const Version& local_clock, const Version& observed) {
  std::uint64_t base =
      local_clock.lamport > observed.lamport ? local_clock.lamport
                                             : observed.lamport;
  return Version{base + 1, local_clock.author};
}

const char* to_string(Priority p) {
  switch (p) {
    case Priority::critical: return "critical";
    case Priority::normal: return "normal";
    case Priority::routine: return "routine";
  }
  return "normal";
}

std::optional<Priority> priority_from_string(std::string_view s) {
  if (s == "critical") return Priority::critical;
  if (s == "normal") return Priority::normal;
  if (s == "routine") return Priority::routine;
  return std::nullopt;
}

bool Rumor::well_formed() const {
  return !topic.empty() && ttl_hops >= 0 && confidence >= 0.0 &&
         confidence <= 1.0;
}

static json version_json(const Version& v) {
  return json{{"author", v.author}, {"lamport", v.lamport}};
}

std::string Rumor::to_json() const {
  json j;
  j["authentic"] = authentic;
  j["confidence"] = confidence;
  j["created_round"] = created_round;
  j["origin"] = id.origin;
  j["payload"] = payload;
  j["priority"] = to_string(priority);
  j["seq"] = id.seq;
  j["topic"] = topic;
  j["ttl_hops"] = ttl_hops;
  j["version"] = version_json(version);
  return j.dump();
}

std::string Digest::to_json() const {
  json j = json::object();
  for (const auto& [key, v] : entries) j[key] = version_json(v);
  return j.dump();
}

DigestDiff digest_diff(const Digest& local, const Digest& remote) {
  DigestDiff diff;
  auto li = local.entries.begin();
  auto ri = remote.entries.begin();
  while (li != local.entries.end() || ri != remote.entries.end()) {
    if (ri == remote.entries.end() ||
        (li != local.entries.end() && li->first < ri->first)) {
      diff.send_to_remote.push_back(li->first);
      ++li;
    } else if (li == local.entries.end() || ri->first < li->first) {
      diff.need_from_remote.push_back(ri->first);
      ++ri;
    } else {
      switch (compare_versions(li->second, ri->second)) {
        case Ordering::less: diff.need_from_remote.push_back(li->first); break;
        case Ordering::greater: diff.send_to_remote.push_back(li->first); break;
        case Ordering::equal: break;
      }
      ++li;
      ++ri;
    }
  }
  return diff;
}

}  // namespace gossipmesh
