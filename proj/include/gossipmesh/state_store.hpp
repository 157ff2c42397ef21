#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gossipmesh/core.hpp"

namespace gossipmesh {

// One last-writer-wins cell. Deletes are tombstones (value empty, flag set)
// so that a delete can out-version a concurrent write; tombstones are purged
// only after `expiry_round`, long after every replica has seen them.
// `born_round` feeds temporal expiry of live records.
struct LwwRecord {
  std::string key;
  std::string value;
  Version version;
  bool tombstone = false;
  std::optional<std::uint32_t> expiry_round;
  std::uint32_t born_round = 0;
};

// Max-by-version merge of two records for the same key. Total order on
// (lamport, author) means no coordination is ever needed.
LwwRecord lww_merge(const LwwRecord& a, const LwwRecord& b);

// Grow-only counter: per-agent contribution map, value = sum, merge =
// element-wise max.
struct GCounter {
  std::map<AgentId, std::uint64_t> counts;

  void increment(AgentId self, std::int64_t amount);
  std::uint64_t value() const;
  std::uint64_t state_hash() const;
};

GCounter gcounter_merge(const GCounter& a, const GCounter& b);

// Unique tag minted per add so that concurrent add/remove of the same element
// resolves add-wins: a remove only covers the tags its replica had observed.
struct OrTag {
  AgentId agent = 0;
  std::uint32_t seq = 0;

  friend auto operator<=>(const OrTag&, const OrTag&) = default;
};

struct ORSet {
  std::map<std::string, std::set<OrTag>> adds;
  std::set<OrTag> removes;

  void add(const std::string& element, OrTag tag);
  void remove(const std::string& element);  // no-op if element not visible
  bool contains(const std::string& element) const;
  std::vector<std::string> elements() const;
  std::uint64_t state_hash() const;
};

ORSet orset_merge(const ORSet& a, const ORSet& b);

// Canonical JSON state for CRDTs riding rumors or anti-entropy transfers.
// Deterministic bytes: equal states serialize identically.
std::string gcounter_to_json(const GCounter& c);
std::optional<GCounter> gcounter_from_json(const std::string& text);
std::string orset_to_json(const ORSet& s);
std::optional<ORSet> orset_from_json(const std::string& text);

// Per-node replicated store: LWW cells plus named CRDTs. The store itself is
// transport-agnostic; dissemination and anti-entropy push records into it via
// apply_lww / merge_counter / merge_set.
class Store {
 public:
  struct ApplyResult {
    bool accepted = false;       // record won (or tied-equal) the merge
    bool value_changed = false;  // visible value actually changed
    // Agents whose relayed record just lost to a newer one; trust feedback
    // hook for the caller.
    std::vector<AgentId> displaced_relayers;
  };

  // Merge a remote or local record into the store. `relayer` is whoever
  // handed us this record (the origin itself for local writes).
  ApplyResult apply_lww(const LwwRecord& record, AgentId relayer);

  const LwwRecord* find(const std::string& key) const;
  // Visible value: nullopt for absent keys and tombstones.
  std::optional<std::string> get(const std::string& key) const;

  GCounter& counter(const std::string& name) { return counters_[name]; }
  const std::map<std::string, GCounter>& counters() const { return counters_; }
  void merge_counter(const std::string& name, const GCounter& remote);

  ORSet& set(const std::string& name) { return sets_[name]; }
  const std::map<std::string, ORSet>& sets() const { return sets_; }
  void merge_set(const std::string& name, const ORSet& remote);

  const std::map<std::string, LwwRecord>& records() const { return lww_; }

  // Anti-entropy support: key -> version summary of the LWW cells, and a
  // state hash per named CRDT (cheap "do we differ" check).
  Digest digest() const;
  std::map<std::string, std::uint64_t> crdt_hashes() const;

  // Temporal sweep: drop live records older than ttl_rounds (ttl < 0 = never)
  // and tombstones past their expiry_round. Returns removed keys, sorted.
  std::vector<std::string> expire_sweep(std::uint32_t now,
                                        std::int64_t ttl_rounds);

  // Canonical JSON of everything visible; equal strings <=> converged state.
  std::string serialize() const;

 private:
  std::map<std::string, LwwRecord> lww_;
  std::map<std::string, GCounter> counters_;
  std::map<std::string, ORSet> sets_;
  std::map<std::string, std::vector<AgentId>> relayers_;
};

}  // namespace gossipmesh
