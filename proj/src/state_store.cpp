#include "gossipmesh/state_store.hpp"

#include <cstdlib>
#include <json.hpp>
#include <stdexcept>

namespace gossipmesh {

using json = nlohmann::ordered_json;

LwwRecord lww_merge(const LwwRecord& a, const LwwRecord& b) {
  if (a.key != b.key)
    throw std::invalid_argument("lww_merge: key mismatch '" + a.key + "' vs '" +
                                b.key + "'");
  switch (compare_versions(a.version, b.version)) {
    case Ordering::less: return b;
    case Ordering::greater: return a;
    case Ordering::equal: return a;  // identical version => identical write
  }
  return a;
}

void GCounter::increment(AgentId self, std::int64_t amount) {
  if (amount < 0)
    throw std::invalid_argument("GCounter::increment: negative amount");
  counts[self] += static_cast<std::uint64_t>(amount);
}

std::uint64_t GCounter::value() const {
  std::uint64_t sum = 0;
  for (const auto& [id, c] : counts) sum += c;
  return sum;
}

std::uint64_t GCounter::state_hash() const {
  std::uint64_t h = kFnvOffset;
  for (const auto& [id, c] : counts) {
    h = fnv1a64_u64(id, h);
    h = fnv1a64_u64(c, h);
  }
  return h;
}

GCounter gcounter_merge(const GCounter& a, const GCounter& b) {
  GCounter out = a;
  for (const auto& [id, c] : b.counts) {
    auto& slot = out.counts[id];
    if (c > slot) slot = c;
  }
  return out;
}

void ORSet::add(const std::string& element, OrTag tag) {
  adds[element].insert(tag);
}

void ORSet::remove(const std::string& element) {
  auto it = adds.find(element);
  if (it == adds.end()) return;
  // Cover exactly the tags observed here; concurrent adds elsewhere survive.
  for (const auto& tag : it->second) removes.insert(tag);
}

bool ORSet::contains(const std::string& element) const {
  auto it = adds.find(element);
  if (it == adds.end()) return false;
  for (const auto& tag : it->second)
    if (!removes.contains(tag)) return true;
  return false;
}

std::vector<std::string> ORSet::elements() const {
  std::vector<std::string> out;
  for (const auto& [element, tags] : adds)
    for (const auto& tag : tags)
      if (!removes.contains(tag)) {
        out.push_back(element);
        break;
      }
  return out;  // map iteration order => already sorted
}

std::uint64_t ORSet::state_hash() const {
  std::uint64_t h = kFnvOffset;
  for (const auto& [element, tags] : adds) {
    h = fnv1a64(element, h);
    for (const auto& tag : tags) {
      h = fnv1a64_u64(tag.agent, h);
      h = fnv1a64_u64(tag.seq, h);
    }
  }
  h = fnv1a64_u64(0x5eedULL, h);
  for (const auto& tag : removes) {
    h = fnv1a64_u64(tag.agent, h);
    h = fnv1a64_u64(tag.seq, h);
  }
  return h;
}

ORSet orset_merge(const ORSet& a, const ORSet& b) {
  ORSet out = a;
  for (const auto& [element, tags] : b.adds)
    out.adds[element].insert(tags.begin(), tags.end());
  out.removes.insert(b.removes.begin(), b.removes.end());
  return out;
}

std::string gcounter_to_json(const GCounter& c) {
  json counts = json::object();
  for (const auto& [id, n] : c.counts) counts[std::to_string(id)] = n;
  json j;
  j["counts"] = std::move(counts);
  return j.dump();
}

std::optional<GCounter> gcounter_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("counts") ||
      !j["counts"].is_object())
    return std::nullopt;
  GCounter out;
  for (const auto& [key, val] : j["counts"].items()) {
    if (!val.is_number_unsigned()) return std::nullopt;
    char* end = nullptr;
    unsigned long id = std::strtoul(key.c_str(), &end, 10);
    if (end == key.c_str() || *end != '\0') return std::nullopt;
    out.counts[static_cast<AgentId>(id)] = val.get<std::uint64_t>();
  }
  return out;
}

static json tag_to_json(const OrTag& tag) {
  return json::array({tag.agent, tag.seq});
}

static std::optional<OrTag> tag_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() ||
      !j[1].is_number_unsigned())
    return std::nullopt;
  return OrTag{j[0].get<AgentId>(), j[1].get<std::uint32_t>()};
}

std::string orset_to_json(const ORSet& s) {
  json adds = json::object();
  for (const auto& [element, tags] : s.adds) {
    json arr = json::array();
    for (const auto& tag : tags) arr.push_back(tag_to_json(tag));
    adds[element] = std::move(arr);
  }
  json removes = json::array();
  for (const auto& tag : s.removes) removes.push_back(tag_to_json(tag));
  json j;
  j["adds"] = std::move(adds);
  j["removes"] = std::move(removes);
  return j.dump();
}

std::optional<ORSet> orset_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("adds") ||
      !j.contains("removes") || !j["adds"].is_object() ||
      !j["removes"].is_array())
    return std::nullopt;
  ORSet out;
  for (const auto& [element, arr] : j["adds"].items()) {
    if (!arr.is_array()) return std::nullopt;
    for (const auto& t : arr) {
      auto tag = tag_from_json(t);
      if (!tag) return std::nullopt;
      out.adds[element].insert(*tag);
    }
  }
  for (const auto& t : j["removes"]) {
    auto tag = tag_from_json(t);
    if (!tag) return std::nullopt;
    out.removes.insert(*tag);
  }
  return out;
}

Store::ApplyResult Store::apply_lww(const LwwRecord& record, AgentId relayer) {
  ApplyResult result;
  auto it = lww_.find(record.key);
  if (it == lww_.end()) {
    lww_.emplace(record.key, record);
    relayers_[record.key] = {relayer};
    result.accepted = true;
    result.value_changed = true;
    return result;
  }
  const LwwRecord before = it->second;
  switch (compare_versions(record.version, before.version)) {
    case Ordering::less:
      // Incoming is stale; its relayer is propagating a losing value.
      result.displaced_relayers.push_back(relayer);
      return result;
    case Ordering::equal: {
      // Same write arriving via another path; remember the extra relayer.
      result.accepted = true;
      auto& who = relayers_[record.key];
      if (std::find(who.begin(), who.end(), relayer) == who.end())
        who.push_back(relayer);
      return result;
    }
    case Ordering::greater: {
      result.accepted = true;
      result.value_changed = before.value != record.value ||
                             before.tombstone != record.tombstone;
      it->second = record;
      auto& who = relayers_[record.key];
      who.erase(std::remove(who.begin(), who.end(), relayer), who.end());
      result.displaced_relayers = std::move(who);
      who = {relayer};
      return result;
    }
  }
  return result;
}

const LwwRecord* Store::find(const std::string& key) const {
  auto it = lww_.find(key);
  return it == lww_.end() ? nullptr : &it->second;
}

std::optional<std::string> Store::get(const std::string& key) const {
  const LwwRecord* rec = find(key);
  if (rec == nullptr || rec->tombstone) return std::nullopt;
  return rec->value;
}

void Store::merge_counter(const std::string& name, const GCounter& remote) {
  auto& local = counters_[name];
  local = gcounter_merge(local, remote);
}

void Store::merge_set(const std::string& name, const ORSet& remote) {
  auto& local = sets_[name];
  local = orset_merge(local, remote);
}

Digest Store::digest() const {
  Digest d;
  for (const auto& [key, rec] : lww_) d.entries[key] = rec.version;
  return d;
}

std::map<std::string, std::uint64_t> Store::crdt_hashes() const {
  std::map<std::string, std::uint64_t> out;
  for (const auto& [name, ctr] : counters_)
    out["ctr/" + name] = ctr.state_hash();
  for (const auto& [name, st] : sets_) out["set/" + name] = st.state_hash();
  return out;
}

std::vector<std::string> Store::expire_sweep(std::uint32_t now,
                                             std::int64_t ttl_rounds) {
  std::vector<std::string> removed;
  for (auto it = lww_.begin(); it != lww_.end();) {
    const LwwRecord& rec = it->second;
    bool drop = false;
    if (rec.tombstone) {
      drop = rec.expiry_round.has_value() && now >= *rec.expiry_round;
    } else if (ttl_rounds >= 0) {
      drop = now >= rec.born_round &&
             now - rec.born_round >= static_cast<std::uint32_t>(ttl_rounds);
    }
    if (drop) {
      removed.push_back(it->first);
      relayers_.erase(it->first);
      it = lww_.erase(it);
    } else {
      ++it;
    }
  }
  return removed;
}

std::string Store::serialize() const {
  json j;
  json lww = json::object();
  for (const auto& [key, rec] : lww_) {
    json cell;
    cell["value"] = rec.value;
    cell["lamport"] = rec.version.lamport;
    cell["author"] = rec.version.author;
    cell["tombstone"] = rec.tombstone;
    lww[key] = std::move(cell);
  }
  j["lww"] = std::move(lww);
  json ctrs = json::object();
  for (const auto& [name, ctr] : counters_) {
    json cell = json::object();
    for (const auto& [id, c] : ctr.counts) cell[std::to_string(id)] = c;
    ctrs[name] = std::move(cell);
  }
  j["counters"] = std::move(ctrs);
  json sets = json::object();
  for (const auto& [name, st] : sets_) {
    json cell;
    cell["elements"] = st.elements();
    cell["state"] = st.state_hash();
    sets[name] = std::move(cell);
  }
  j["sets"] = std::move(sets);
  return j.dump();
}

}  // namespace gossipmesh
