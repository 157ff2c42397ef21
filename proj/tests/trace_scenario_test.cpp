#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "gossipmesh/scenario.hpp"
#include "gossipmesh/trace.hpp"

using namespace gossipmesh;

TEST_CASE("interning returns stable indices") {
  Trace trace;
  auto a = trace.intern("alpha");
  auto b = trace.intern("beta");
  auto a2 = trace.intern("alpha");
  CHECK(a == a2);
  CHECK(a != b);
  CHECK(trace.str(a) == "alpha");
}

TEST_CASE("trace hash is order and content sensitive") {
  auto build = [](std::uint32_t round_second) {
    Trace t;
    TraceRecord r{};
    r.kind = TraceKind::msg;
    r.round = 1;
    t.push(r);
    r.round = round_second;
    t.push(r);
    return t.hash();
  };
  CHECK(build(2) == build(2));       // deterministic
  CHECK(build(2) != build(3));       // content-sensitive

  Trace t1, t2;
  TraceRecord a{}, b{};
  a.kind = TraceKind::msg;
  a.a = 1;
  b.kind = TraceKind::msg;
  b.a = 2;
  t1.push(a);
  t1.push(b);
  t2.push(b);
  t2.push(a);
  CHECK(t1.hash() != t2.hash());     // order-sensitive
}

TEST_CASE("ndjson renders one object per record") {
  Trace trace;
  TraceRecord header{};
  header.kind = TraceKind::run_header;
  header.a = 4;
  header.str = trace.intern("demo");
  trace.push(header);
  TraceRecord msg{};
  msg.kind = TraceKind::msg;
  msg.mtype = MsgType::push;
  msg.a = 0;
  msg.b = 2;
  msg.effects = kEffectAdopted | kEffectBuffered;
  trace.push(msg);

  std::ostringstream out;
  trace.write_ndjson(out);
  std::istringstream in(out.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    auto j = nlohmann::json::parse(line);  // every line must parse alone
    CHECK(j.contains("kind"));
  }
  CHECK(lines == 2);
}

TEST_CASE("effect names decode the bitmask") {
  CHECK(effect_names(kEffectAdopted | kEffectBuffered) ==
        "adopted|buffered");
  CHECK(effect_names(kEffectNone) == "none");
  CHECK(effect_names(kEffectLost) == "lost");
}

TEST_CASE("scenario json round-trips through text") {
  ScenarioConfig cfg;
  cfg.name = "roundtrip";
  cfg.n_agents = 12;
  cfg.rounds = 9;
  cfg.fanout = 2;
  cfg.loss_p = 0.25;
  cfg.latency = {1, 3};
  cfg.seed = 77;
  cfg.protocol.k_confirmations = 2;
  cfg.protocol.anti_entropy_period = 5;
  cfg.protocol.topic_allow = {"alert/"};
  cfg.workload.rumors.push_back({1, 0, "alert/x", "p", Priority::critical,
                                 std::nullopt, true});
  cfg.workload.writes.push_back({2, 3, "door", "open"});
  cfg.churn.push_back({4, ChurnEvent::Action::kill, {5}, ""});
  cfg.expected.push_back({"dissemination.min_coverage", "ge", 0.5, 0.0});

  ScenarioConfig back = ScenarioConfig::from_json_text(cfg.to_json_text());
  CHECK(back.name == cfg.name);
  CHECK(back.n_agents == cfg.n_agents);
  CHECK(back.loss_p == cfg.loss_p);
  CHECK(back.latency.max_rounds == 3);
  CHECK(back.seed == 77);
  CHECK(back.protocol.k_confirmations == 2);
  CHECK(back.protocol.topic_allow == std::vector<std::string>{"alert/"});
  REQUIRE(back.workload.rumors.size() == 1);
  CHECK(back.workload.rumors[0].priority == Priority::critical);
  REQUIRE(back.churn.size() == 1);
  CHECK(back.churn[0].targets == std::vector<AgentId>{5});
  REQUIRE(back.expected.size() == 1);
  CHECK(back.expected[0].op == "ge");
  // Round-tripping again is a fixed point.
  CHECK(back.to_json_text() == cfg.to_json_text());
}

TEST_CASE("validation rejects inconsistent configs") {
  ScenarioConfig cfg;
  cfg.n_agents = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = ScenarioConfig{};
  cfg.n_agents = 4;
  cfg.rounds = 4;
  cfg.loss_p = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = ScenarioConfig{};
  cfg.n_agents = 4;
  cfg.rounds = 4;
  cfg.latency = {3, 2};  // min > max
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = ScenarioConfig{};
  cfg.n_agents = 4;
  cfg.rounds = 4;
  cfg.workload.rumors.push_back({1, 9, "t", "p", Priority::normal,
                                 std::nullopt, true});  // origin out of range
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = ScenarioConfig{};
  cfg.n_agents = 4;
  cfg.rounds = 4;
  cfg.fanout = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("malformed json reports the offending field") {
  CHECK_THROWS_AS(ScenarioConfig::from_json_text("{"), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json_text(R"({"n_agents": "many"})"),
                  ConfigError);
  try {
    ScenarioConfig::from_json_text(R"({"name":"x","n_agents":0,"rounds":1})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field == "n_agents");
  }
}

TEST_CASE("derived defaults follow the mesh size") {
  ScenarioConfig cfg;
  cfg.n_agents = 25000;
  cfg.rounds = 30;
  // ceil(log2 25000) = 15, so ttl defaults to 15 + 4.
  CHECK(cfg.effective_ttl_hops() == 19);
  cfg.protocol.ttl_hops = 7;
  CHECK(cfg.effective_ttl_hops() == 7);

  ScenarioConfig small;
  small.n_agents = 4;
  small.rounds = 4;
  CHECK(small.effective_ttl_hops() == ceil_log2(4) + 4);

  // Theta defaults to k.
  ScenarioConfig k2;
  k2.protocol.k_confirmations = 2;
  CHECK(k2.effective_theta() == 2.0);
  k2.protocol.theta = 1.25;
  CHECK(k2.effective_theta() == 1.25);

  // Grace period default: 4 * (ceil_log2 N + anti-entropy period).
  ScenarioConfig g;
  g.n_agents = 64;
  g.rounds = 10;
  g.protocol.anti_entropy_period = 10;
  CHECK(g.effective_grace_period() == 4 * (6 + 10));
  g.protocol.grace_period = 11;
  CHECK(g.effective_grace_period() == 11);
}

TEST_CASE("ceil_log2 reference points") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(4) == 2);
  CHECK(ceil_log2(1024) == 10);
  CHECK(ceil_log2(25000) == 15);
}
