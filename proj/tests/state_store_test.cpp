#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "gossipmesh/state_store.hpp"
#include "oracles.hpp"

using namespace gossipmesh;

static LwwRecord rec(const std::string& key, const std::string& value,
                     std::uint64_t lamport, AgentId author,
                     std::uint32_t born = 0) {
  LwwRecord r;
  r.key = key;
  r.value = value;
  r.version = {lamport, author};
  r.born_round = born;
  return r;
}

static LwwRecord tomb(const std::string& key, std::uint64_t lamport,
                      AgentId author, std::uint32_t expiry) {
  LwwRecord r;
  r.key = key;
  r.version = {lamport, author};
  r.tombstone = true;
  r.expiry_round = expiry;
  return r;
}

TEST_CASE("lww merge keeps the higher version") {
  // Agent A says Y=5, agent B later says Y=7: B's version wins everywhere.
  auto merged = lww_merge(rec("y", "5", 10, 0), rec("y", "7", 12, 1));
  CHECK(merged.value == "7");
  CHECK(merged.version == Version{12, 1});
}

TEST_CASE("tombstone with higher version beats the value") {
  auto merged = lww_merge(rec("k", "v", 5, 0), tomb("k", 6, 0, 100));
  CHECK(merged.tombstone);
  CHECK(merged.version == Version{6, 0});
}

TEST_CASE("re-creating a deleted key with a higher version revives it") {
  auto merged = lww_merge(tomb("k", 6, 0, 100), rec("k", "new", 7, 1));
  CHECK(!merged.tombstone);
  CHECK(merged.value == "new");
}

TEST_CASE("gcounter sums per-agent contributions") {
  GCounter c;
  c.increment(0, 3);
  c.increment(1, 4);
  c.increment(0, 2);
  CHECK(c.value() == 9);
  CHECK_THROWS_AS(c.increment(0, -1), std::invalid_argument);
}

TEST_CASE("gcounter merge is element-wise max") {
  GCounter a, b;
  a.increment(0, 5);
  a.increment(1, 1);
  b.increment(1, 3);
  b.increment(2, 7);
  GCounter m = gcounter_merge(a, b);
  CHECK(m.counts.at(0) == 5);
  CHECK(m.counts.at(1) == 3);
  CHECK(m.counts.at(2) == 7);
  CHECK(m.value() == 15);
}

TEST_CASE("three replicas converge under every merge order: brute force") {
  // Oracle: disjoint increments commute, so any sequence of pairwise merges
  // that reaches everyone must yield sum of all contributions. Enumerate all
  // merge orders as permutations of folds over the three replicas.
  GCounter r0, r1, r2;
  r0.increment(0, 7);
  r1.increment(1, 11);
  r2.increment(2, 13);
  const std::uint64_t expected = 7 + 11 + 13;

  std::vector<GCounter> replicas{r0, r1, r2};
  std::vector<int> order{0, 1, 2};
  std::sort(order.begin(), order.end());
  do {
    GCounter acc = replicas[order[0]];
    acc = gcounter_merge(acc, replicas[order[1]]);
    acc = gcounter_merge(acc, replicas[order[2]]);
    REQUIRE(acc.value() == expected);
    // Pairwise-then-merge-the-pairs shape as well.
    GCounter pair = gcounter_merge(replicas[order[0]], replicas[order[1]]);
    GCounter all = gcounter_merge(pair, replicas[order[2]]);
    REQUIRE(all.value() == expected);
    REQUIRE(all.counts == acc.counts);
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("orset add then remove of the same tag is gone after any merge") {
  ORSet a;
  a.add("x", {0, 1});
  a.remove("x");
  CHECK(!a.contains("x"));

  ORSet other;  // merge the (add,remove) pair anywhere: still gone
  ORSet m1 = orset_merge(a, other);
  ORSet m2 = orset_merge(other, a);
  CHECK(!m1.contains("x"));
  CHECK(!m2.contains("x"));
}

TEST_CASE("orset resolves concurrent add/remove as add-wins") {
  ORSet a, b;
  a.add("x", {0, 1});
  b = orset_merge(b, a);  // b sees x@tag(0,1)
  b.remove("x");          // b removes the tag it saw
  a.add("x", {0, 2});     // concurrently, a re-adds with a fresh tag
  ORSet m = orset_merge(a, b);
  CHECK(m.contains("x"));  // the unseen tag survives the remove
}

TEST_CASE("orset elements lists visible elements sorted unique") {
  ORSet s;
  s.add("b", {0, 1});
  s.add("a", {0, 2});
  s.add("a", {1, 1});
  s.remove("b");
  CHECK(s.elements() == std::vector<std::string>{"a"});
  s.add("b", {0, 3});
  CHECK(s.elements() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("crdt json round-trips preserve state and hashes") {
  GCounter c;
  c.increment(3, 5);
  c.increment(9, 2);
  auto c2 = gcounter_from_json(gcounter_to_json(c));
  REQUIRE(c2.has_value());
  CHECK(c2->counts == c.counts);
  CHECK(c2->state_hash() == c.state_hash());
  CHECK(!gcounter_from_json("not json").has_value());

  ORSet s;
  s.add("alpha", {8, 1});
  s.add("beta", {9, 1});
  s.remove("alpha");
  auto s2 = orset_from_json(orset_to_json(s));
  REQUIRE(s2.has_value());
  CHECK(s2->adds == s.adds);
  CHECK(s2->removes == s.removes);
  CHECK(s2->state_hash() == s.state_hash());
  CHECK(!orset_from_json("{]").has_value());
}

TEST_CASE("store apply reports acceptance and displaced relayers") {
  Store store;
  auto first = store.apply_lww(rec("k", "v1", 1, 0), 5);
  CHECK(first.accepted);
  CHECK(first.value_changed);
  CHECK(first.displaced_relayers.empty());

  // A newer record displaces the old one; whoever relayed the old value is
  // reported so trust can penalize the stale relay.
  auto second = store.apply_lww(rec("k", "v2", 2, 1), 6);
  CHECK(second.accepted);
  CHECK(second.value_changed);
  CHECK(second.displaced_relayers == std::vector<AgentId>{5});

  // Stale arrival loses and nothing changes.
  auto stale = store.apply_lww(rec("k", "old", 1, 0), 7);
  CHECK(!stale.accepted);
  CHECK(!stale.value_changed);
  CHECK(store.get("k") == "v2");
}

TEST_CASE("same-relayer refresh does not displace itself") {
  Store store;
  store.apply_lww(rec("k", "v1", 1, 0), 5);
  auto update = store.apply_lww(rec("k", "v2", 2, 0), 5);
  CHECK(update.accepted);
  CHECK(update.displaced_relayers.empty());
}

TEST_CASE("tombstones hide values and purge after expiry") {
  Store store;
  store.apply_lww(rec("k", "v", 1, 0), 0);
  CHECK(store.get("k") == "v");
  store.apply_lww(tomb("k", 2, 0, 20), 0);
  CHECK(!store.get("k").has_value());
  CHECK(store.find("k") != nullptr);  // record still present for anti-entropy

  auto removed_early = store.expire_sweep(19, -1);
  CHECK(removed_early.empty());
  auto removed = store.expire_sweep(20, -1);
  CHECK(removed == std::vector<std::string>{"k"});
  CHECK(store.find("k") == nullptr);
}

TEST_CASE("live records expire after ttl_rounds") {
  Store store;
  store.apply_lww(rec("old", "v", 1, 0, /*born=*/0), 0);
  store.apply_lww(rec("new", "v", 2, 0, /*born=*/50), 0);
  auto removed = store.expire_sweep(64, 64);
  CHECK(removed == std::vector<std::string>{"old"});
  CHECK(store.find("new") != nullptr);
  // ttl < 0 never expires.
  Store keep;
  keep.apply_lww(rec("k", "v", 1, 0, 0), 0);
  CHECK(keep.expire_sweep(1000000, -1).empty());
}

TEST_CASE("store serialization is deterministic and converges with content") {
  Store a, b;
  a.apply_lww(rec("x", "1", 1, 0), 0);
  a.apply_lww(rec("y", "2", 1, 1), 1);
  b.apply_lww(rec("y", "2", 1, 1), 1);
  b.apply_lww(rec("x", "1", 1, 0), 0);
  a.counter("c").increment(0, 4);
  b.counter("c").increment(0, 4);
  a.set("s").add("e", {0, 1});
  b.set("s").add("e", {0, 1});
  CHECK(a.serialize() == b.serialize());  // apply order must not matter
}

TEST_CASE("store digest reflects lww versions") {
  Store store;
  store.apply_lww(rec("a", "1", 3, 2), 0);
  Digest d = store.digest();
  REQUIRE(d.entries.count("a"));
  CHECK(d.entries.at("a") == Version{3, 2});
}

TEST_CASE("crdt hashes change when state changes") {
  Store store;
  store.counter("c").increment(0, 1);
  auto before = store.crdt_hashes();
  store.counter("c").increment(0, 1);
  auto after = store.crdt_hashes();
  CHECK(before.at("ctr/c") != after.at("ctr/c"));
}
