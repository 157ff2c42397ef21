#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "gossipmesh/coordination.hpp"

using namespace gossipmesh;

static TaskAd ad_available(const std::string& id, std::uint32_t epoch = 0) {
  TaskAd ad;
  ad.task_id = id;
  ad.descriptor = {"weld"};
  ad.state = TaskState::available;
  ad.epoch = epoch;
  return ad;
}

static TaskAd ad_claimed(const std::string& id, AgentId who,
                         std::uint64_t lamport, std::uint32_t epoch = 0) {
  TaskAd ad = ad_available(id, epoch);
  ad.state = TaskState::claimed;
  ad.claimant = who;
  ad.claim_version = {lamport, who};
  return ad;
}

TEST_CASE("claimed beats available; done beats claimed") {
  TaskAd available = ad_available("t");
  TaskAd claimed = ad_claimed("t", 3, 10);
  CHECK(resolve_claims(available, claimed).state == TaskState::claimed);
  CHECK(resolve_claims(claimed, available).state == TaskState::claimed);

  TaskAd done = claimed;
  done.state = TaskState::done;
  CHECK(resolve_claims(claimed, done).state == TaskState::done);
  CHECK(resolve_claims(done, available).state == TaskState::done);
}

TEST_CASE("between two claims the smaller (lamport, claimant) wins") {
  TaskAd early = ad_claimed("t", 7, 10);
  TaskAd late = ad_claimed("t", 3, 11);
  CHECK(resolve_claims(early, late).claimant == 7);
  CHECK(resolve_claims(late, early).claimant == 7);

  // Equal lamport: the smaller claimant id sticks.
  TaskAd a = ad_claimed("t", 4, 10);
  TaskAd b = ad_claimed("t", 9, 10);
  CHECK(resolve_claims(a, b).claimant == 4);
  CHECK(resolve_claims(b, a).claimant == 4);
}

TEST_CASE("a higher epoch re-announcement beats stale claims") {
  TaskAd stale_claim = ad_claimed("t", 5, 10, /*epoch=*/0);
  TaskAd reopened = ad_available("t", /*epoch=*/1);
  CHECK(resolve_claims(stale_claim, reopened).state == TaskState::available);
  CHECK(resolve_claims(reopened, stale_claim).epoch == 1);
}

TEST_CASE("evaluate_claim requires capability, capacity, availability") {
  TaskAd ad = ad_available("t");
  Version v{5, 2};

  AgentProfile capable{{"weld", "paint"}, 0.2};
  auto claim = evaluate_claim(capable, ad, 0.8, 2, v);
  REQUIRE(claim.has_value());
  CHECK(claim->state == TaskState::claimed);
  CHECK(claim->claimant == 2);
  CHECK(claim->claim_version == v);
  CHECK(claim->task_id == "t");

  // Tasks flow toward agents with available resources: overloaded agents
  // do not bid.
  AgentProfile busy{{"weld"}, 0.9};
  CHECK(!evaluate_claim(busy, ad, 0.8, 2, v).has_value());

  AgentProfile incapable{{"paint"}, 0.1};
  CHECK(!evaluate_claim(incapable, ad, 0.8, 2, v).has_value());

  TaskAd taken = ad_claimed("t", 9, 4);
  CHECK(!evaluate_claim(capable, taken, 0.8, 2, v).has_value());
}

TEST_CASE("multi-capability descriptors need all of them") {
  TaskAd ad = ad_available("t");
  ad.descriptor = {"weld", "inspect"};
  Version v{1, 1};
  CHECK(!evaluate_claim({{"weld"}, 0.0}, ad, 0.8, 1, v).has_value());
  CHECK(evaluate_claim({{"inspect", "weld"}, 0.0}, ad, 0.8, 1, v).has_value());
}

TEST_CASE("averaging step meets exactly in the middle") {
  auto [a, b] = averaging_step(4.0, 10.0);
  CHECK(a == 7.0);
  CHECK(b == 7.0);
  CHECK(a + b == 14.0);  // pair sum conserved exactly here
  CHECK_THROWS_AS(averaging_step(1.0 / 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("intent registry keeps the newest record per agent") {
  IntentRegistry reg;
  CHECK(reg.update({2, "survey", 5, {3, 2}}, 10));
  CHECK(!reg.update({2, "survey", 6, {2, 2}}, 11));  // older lamport: ignored
  REQUIRE(reg.intent_of(2) != nullptr);
  CHECK(reg.intent_of(2)->zone == 5);
  CHECK(reg.update({2, "assist", 7, {4, 2}}, 12));
  CHECK(reg.intent_of(2)->zone == 7);
  CHECK(reg.intent_of(9) == nullptr);
}

TEST_CASE("zone mentions are tracked by update round") {
  IntentRegistry reg;
  reg.update({1, "survey", 3, {1, 1}}, 7);
  CHECK(reg.last_mention(3) == 7);
  CHECK(!reg.last_mention(4).has_value());
}

TEST_CASE("pick_uncovered_zone prefers never-mentioned zones") {
  IntentRegistry reg;
  Rng rng(5);
  reg.update({1, "survey", 0, {1, 1}}, 10);
  reg.update({2, "survey", 1, {1, 2}}, 10);
  // Zones 2 and 3 have never been mentioned; only they may be picked.
  for (int i = 0; i < 100; ++i) {
    auto zone = reg.pick_uncovered_zone(4, 10, 5, rng);
    REQUIRE(zone.has_value());
    CHECK((*zone == 2 || *zone == 3));
  }
}

TEST_CASE("zones count as uncovered again after the silence bar") {
  IntentRegistry reg;
  Rng rng(6);
  reg.update({1, "survey", 0, {1, 1}}, 0);
  reg.update({1, "survey", 1, {2, 1}}, 8);
  // At round 10 with silence 10: zone 0 is stale (age 10), zone 1 fresh.
  auto zone = reg.pick_uncovered_zone(2, 10, 10, rng);
  REQUIRE(zone.has_value());
  CHECK(*zone == 0);
}

TEST_CASE("when every zone is fresh the least recent one is picked") {
  IntentRegistry reg;
  Rng rng(7);
  reg.update({1, "survey", 0, {1, 1}}, 9);
  reg.update({2, "survey", 1, {1, 2}}, 10);
  auto zone = reg.pick_uncovered_zone(2, 10, 100, rng);
  REQUIRE(zone.has_value());
  CHECK(*zone == 0);
}

TEST_CASE("no zones, no pick") {
  IntentRegistry reg;
  Rng rng(8);
  CHECK(!reg.pick_uncovered_zone(0, 10, 5, rng).has_value());
}
