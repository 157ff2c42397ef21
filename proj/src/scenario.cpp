#include "gossipmesh/scenario.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace gossipmesh {

using json = nlohmann::ordered_json;

int ceil_log2(std::uint32_t n) {
  if (n <= 1) return 0;
  return 32 - std::countl_zero(n - 1);
}

int ScenarioConfig::effective_ttl_hops() const {
  if (protocol.ttl_hops.has_value()) return *protocol.ttl_hops;
  return ceil_log2(n_agents) + 4;
}

int ScenarioConfig::effective_grace_period() const {
  if (protocol.grace_period.has_value()) return *protocol.grace_period;
  return 4 * (ceil_log2(n_agents) + std::max(protocol.anti_entropy_period, 1));
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ConfigError(field, msg);
}

void expect_keys(const json& j, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) { ok = true; break; }
    if (!ok) fail(where + "." + key, "unknown field");
  }
}

template <typename T>
T get_num(const json& j, const std::string& where, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<T>();
}

std::string get_str(const json& j, const std::string& where, const char* key,
                    const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& j, const std::string& where, const char* key,
              bool fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_boolean()) fail(where + "." + key, "expected a boolean");
  return v.get<bool>();
}

Priority get_priority(const json& j, const std::string& where) {
  std::string p = get_str(j, where, "priority", "normal");
  auto parsed = priority_from_string(p);
  if (!parsed) fail(where + ".priority", "expected critical|normal|routine");
  return *parsed;
}

std::vector<std::string> get_str_list(const json& j, const std::string& where,
                                      const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  const auto& v = j.at(key);
  if (!v.is_array()) fail(where + "." + key, "expected an array of strings");
  for (const auto& item : v) {
    if (!item.is_string()) fail(where + "." + key, "expected an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

ProtocolKnobs parse_protocol(const json& j) {
  ProtocolKnobs k;
  expect_keys(j, "protocol",
              {"ttl_hops", "rate_limit", "anti_entropy_period",
               "suspicion_timeout", "proxy_count", "k_confirmations", "theta",
               "trust_alpha", "trust_default", "ttl_rounds", "decay_lambda",
               "grace_period", "hot_buffer_capacity", "load_threshold",
               "membership", "topic_allow"});
  if (j.contains("ttl_hops"))
    k.ttl_hops = get_num<int>(j, "protocol", "ttl_hops", 0);
  k.rate_limit = get_num<int>(j, "protocol", "rate_limit", k.rate_limit);
  k.anti_entropy_period =
      get_num<int>(j, "protocol", "anti_entropy_period", k.anti_entropy_period);
  k.suspicion_timeout =
      get_num<int>(j, "protocol", "suspicion_timeout", k.suspicion_timeout);
  k.proxy_count = get_num<int>(j, "protocol", "proxy_count", k.proxy_count);
  k.k_confirmations =
      get_num<int>(j, "protocol", "k_confirmations", k.k_confirmations);
  if (j.contains("theta"))
    k.theta = get_num<double>(j, "protocol", "theta", 0.0);
  k.trust_alpha = get_num<double>(j, "protocol", "trust_alpha", k.trust_alpha);
  k.trust_default =
      get_num<double>(j, "protocol", "trust_default", k.trust_default);
  k.ttl_rounds =
      get_num<std::int64_t>(j, "protocol", "ttl_rounds", k.ttl_rounds);
  k.decay_lambda =
      get_num<double>(j, "protocol", "decay_lambda", k.decay_lambda);
  if (j.contains("grace_period"))
    k.grace_period = get_num<int>(j, "protocol", "grace_period", 0);
  k.hot_buffer_capacity =
      get_num<int>(j, "protocol", "hot_buffer_capacity", k.hot_buffer_capacity);
  k.load_threshold =
      get_num<double>(j, "protocol", "load_threshold", k.load_threshold);
  k.membership = get_bool(j, "protocol", "membership", k.membership);
  k.topic_allow = get_str_list(j, "protocol", "topic_allow");
  return k;
}

std::vector<ChurnEvent> parse_churn(const json& arr) {
  std::vector<ChurnEvent> out;
  int idx = 0;
  for (const auto& j : arr) {
    std::string where = "churn[" + std::to_string(idx++) + "]";
    expect_keys(j, where, {"round", "action", "targets"});
    ChurnEvent ev;
    ev.round = get_num<std::uint32_t>(j, where, "round", 0);
    std::string action = get_str(j, where, "action", "kill");
    if (action == "kill") ev.action = ChurnEvent::Action::kill;
    else if (action == "revive") ev.action = ChurnEvent::Action::revive;
    else if (action == "partition") ev.action = ChurnEvent::Action::partition;
    else if (action == "heal") ev.action = ChurnEvent::Action::heal;
    else fail(where + ".action", "expected kill|revive|partition|heal");
    if (!j.contains("targets") && ev.action != ChurnEvent::Action::heal)
      fail(where + ".targets", "required");
    if (j.contains("targets")) {
      const auto& t = j.at("targets");
      if (t.is_string()) {
        ev.dynamic_target = t.get<std::string>();
        if (ev.dynamic_target.rfind("claimant:", 0) != 0)
          fail(where + ".targets", "string form must be claimant:<task_id>");
      } else if (t.is_array()) {
        for (const auto& item : t) {
          if (!item.is_number_unsigned())
            fail(where + ".targets", "expected agent ids");
          ev.targets.push_back(item.get<AgentId>());
        }
      } else {
        fail(where + ".targets", "expected array or claimant:<task_id>");
      }
    }
    out.push_back(std::move(ev));
  }
  return out;
}

std::vector<AdversarySpec> parse_adversaries(const json& arr) {
  std::vector<AdversarySpec> out;
  int idx = 0;
  for (const auto& j : arr) {
    std::string where = "adversaries[" + std::to_string(idx++) + "]";
    expect_keys(j, where,
                {"id", "behavior", "topic", "payload", "rate", "start_round"});
    AdversarySpec a;
    a.id = get_num<AgentId>(j, where, "id", 0);
    std::string b = get_str(j, where, "behavior", "fabricate");
    if (b == "fabricate") a.behavior = AdversarySpec::Behavior::fabricate;
    else if (b == "tamper") a.behavior = AdversarySpec::Behavior::tamper;
    else if (b == "flood") a.behavior = AdversarySpec::Behavior::flood;
    else fail(where + ".behavior", "expected fabricate|tamper|flood");
    a.topic = get_str(j, where, "topic", a.topic);
    a.payload = get_str(j, where, "payload", a.payload);
    a.rate = get_num<int>(j, where, "rate", a.rate);
    a.start_round = get_num<std::uint32_t>(j, where, "start_round", 0);
    out.push_back(std::move(a));
  }
  return out;
}

Workload parse_workload(const json& j) {
  Workload w;
  expect_keys(j, "workload",
              {"rumors", "tasks", "writes", "deletes", "increments", "set_ops",
               "capabilities", "averaging", "intents"});
  int idx = 0;
  for (const auto& r : j.value("rumors", json::array())) {
    std::string where = "workload.rumors[" + std::to_string(idx++) + "]";
    expect_keys(r, where,
                {"round", "origin", "topic", "payload", "priority", "ttl_hops",
                 "authentic"});
    RumorSpec spec;
    spec.round = get_num<std::uint32_t>(r, where, "round", 0);
    spec.origin = get_num<AgentId>(r, where, "origin", 0);
    spec.topic = get_str(r, where, "topic", "");
    if (spec.topic.empty()) fail(where + ".topic", "required");
    spec.payload = get_str(r, where, "payload", "");
    spec.priority = get_priority(r, where);
    if (r.contains("ttl_hops"))
      spec.ttl_hops = get_num<int>(r, where, "ttl_hops", 0);
    spec.authentic = get_bool(r, where, "authentic", true);
    w.rumors.push_back(std::move(spec));
  }
  idx = 0;
  for (const auto& t : j.value("tasks", json::array())) {
    std::string where = "workload.tasks[" + std::to_string(idx++) + "]";
    expect_keys(t, where,
                {"round", "origin", "task_id", "descriptor", "priority",
                 "exec_rounds"});
    TaskSpec spec;
    spec.round = get_num<std::uint32_t>(t, where, "round", 0);
    spec.origin = get_num<AgentId>(t, where, "origin", 0);
    spec.task_id = get_str(t, where, "task_id", "");
    if (spec.task_id.empty()) fail(where + ".task_id", "required");
    spec.descriptor = get_str_list(t, where, "descriptor");
    spec.priority = get_priority(t, where);
    spec.exec_rounds = get_num<std::uint32_t>(t, where, "exec_rounds", 5);
    w.tasks.push_back(std::move(spec));
  }
  idx = 0;
  for (const auto& s : j.value("writes", json::array())) {
    std::string where = "workload.writes[" + std::to_string(idx++) + "]";
    expect_keys(s, where, {"round", "node", "key", "value"});
    WriteSpec spec;
    spec.round = get_num<std::uint32_t>(s, where, "round", 0);
    spec.node = get_num<AgentId>(s, where, "node", 0);
    spec.key = get_str(s, where, "key", "");
    if (spec.key.empty()) fail(where + ".key", "required");
    spec.value = get_str(s, where, "value", "");
    w.writes.push_back(std::move(spec));
  }
  idx = 0;
  for (const auto& s : j.value("deletes", json::array())) {
    std::string where = "workload.deletes[" + std::to_string(idx++) + "]";
    expect_keys(s, where, {"round", "node", "key"});
    DeleteSpec spec;
    spec.round = get_num<std::uint32_t>(s, where, "round", 0);
    spec.node = get_num<AgentId>(s, where, "node", 0);
    spec.key = get_str(s, where, "key", "");
    if (spec.key.empty()) fail(where + ".key", "required");
    w.deletes.push_back(std::move(spec));
  }
  idx = 0;
  for (const auto& s : j.value("increments", json::array())) {
    std::string where = "workload.increments[" + std::to_string(idx++) + "]";
    expect_keys(s, where, {"round", "node", "counter", "amount"});
    IncrementSpec spec;
    spec.round = get_num<std::uint32_t>(s, where, "round", 0);
    spec.node = get_num<AgentId>(s, where, "node", 0);
    spec.counter = get_str(s, where, "counter", spec.counter);
    spec.amount = get_num<std::int64_t>(s, where, "amount", 1);
    w.increments.push_back(std::move(spec));
  }
  idx = 0;
  for (const auto& s : j.value("set_ops", json::array())) {
    std::string where = "workload.set_ops[" + std::to_string(idx++) + "]";
    expect_keys(s, where, {"round", "node", "set", "element", "remove"});
    SetOpSpec spec;
    spec.round = get_num<std::uint32_t>(s, where, "round", 0);
    spec.node = get_num<AgentId>(s, where, "node", 0);
    spec.set = get_str(s, where, "set", spec.set);
    spec.element = get_str(s, where, "element", "");
    if (spec.element.empty()) fail(where + ".element", "required");
    spec.remove = get_bool(s, where, "remove", false);
    w.set_ops.push_back(std::move(spec));
  }
  idx = 0;
  for (const auto& s : j.value("capabilities", json::array())) {
    std::string where = "workload.capabilities[" + std::to_string(idx++) + "]";
    expect_keys(s, where, {"node", "capabilities"});
    CapabilitySpec spec;
    spec.node = get_num<AgentId>(s, where, "node", 0);
    spec.capabilities = get_str_list(s, where, "capabilities");
    w.capabilities.push_back(std::move(spec));
  }
  if (j.contains("averaging")) {
    const auto& a = j.at("averaging");
    expect_keys(a, "workload.averaging", {"enabled", "init"});
    w.averaging.enabled = get_bool(a, "workload.averaging", "enabled", true);
    if (a.contains("init")) {
      const auto& init = a.at("init");
      if (!init.is_array())
        fail("workload.averaging.init", "expected an array of numbers");
      for (const auto& v : init) {
        if (!v.is_number())
          fail("workload.averaging.init", "expected an array of numbers");
        w.averaging.init.push_back(v.get<double>());
      }
    }
  }
  if (j.contains("intents")) {
    const auto& a = j.at("intents");
    expect_keys(a, "workload.intents",
                {"enabled", "zones", "dwell_rounds", "silence_rounds"});
    w.intents.enabled = get_bool(a, "workload.intents", "enabled", true);
    w.intents.zones = get_num<std::uint32_t>(a, "workload.intents", "zones", 0);
    w.intents.dwell_rounds =
        get_num<std::uint32_t>(a, "workload.intents", "dwell_rounds", 5);
    w.intents.silence_rounds =
        get_num<std::uint32_t>(a, "workload.intents", "silence_rounds", 10);
  }
  return w;
}

std::vector<Expectation> parse_expected(const json& arr) {
  std::vector<Expectation> out;
  int idx = 0;
  for (const auto& j : arr) {
    std::string where = "expected[" + std::to_string(idx++) + "]";
    expect_keys(j, where, {"metric", "op", "value", "tolerance"});
    Expectation e;
    e.metric = get_str(j, where, "metric", "");
    if (e.metric.empty()) fail(where + ".metric", "required");
    e.op = get_str(j, where, "op", "eq");
    if (e.op != "eq" && e.op != "le" && e.op != "ge" && e.op != "near")
      fail(where + ".op", "expected eq|le|ge|near");
    if (!j.contains("value")) fail(where + ".value", "required");
    e.value = get_num<double>(j, where, "value", 0.0);
    e.tolerance = get_num<double>(j, where, "tolerance", 0.0);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("(root)", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("(root)", "expected a JSON object");
  expect_keys(j, "(root)",
              {"name", "n_agents", "rounds", "fanout", "loss_p", "latency",
               "seed", "mode", "protocol", "churn", "adversaries", "workload",
               "expected"});
  ScenarioConfig cfg;
  cfg.name = get_str(j, "(root)", "name", cfg.name);
  cfg.n_agents = get_num<std::uint32_t>(j, "(root)", "n_agents", cfg.n_agents);
  cfg.rounds = get_num<std::uint32_t>(j, "(root)", "rounds", cfg.rounds);
  cfg.fanout = get_num<int>(j, "(root)", "fanout", cfg.fanout);
  cfg.loss_p = get_num<double>(j, "(root)", "loss_p", cfg.loss_p);
  if (j.contains("latency")) {
    const auto& l = j.at("latency");
    if (l.is_number()) {
      cfg.latency.min_rounds = cfg.latency.max_rounds = l.get<std::uint32_t>();
    } else if (l.is_object()) {
      expect_keys(l, "latency", {"min", "max"});
      cfg.latency.min_rounds = get_num<std::uint32_t>(l, "latency", "min", 1);
      cfg.latency.max_rounds = get_num<std::uint32_t>(
          l, "latency", "max", cfg.latency.min_rounds);
    } else {
      fail("latency", "expected a number or {min, max}");
    }
  }
  cfg.seed = get_num<std::uint64_t>(j, "(root)", "seed", cfg.seed);
  std::string mode = get_str(j, "(root)", "mode", "gossip");
  if (mode == "gossip") cfg.mode = RunMode::gossip;
  else if (mode == "broadcast") cfg.mode = RunMode::broadcast;
  else fail("mode", "expected gossip|broadcast");
  if (j.contains("protocol")) cfg.protocol = parse_protocol(j.at("protocol"));
  if (j.contains("churn")) {
    if (!j.at("churn").is_array()) fail("churn", "expected an array");
    cfg.churn = parse_churn(j.at("churn"));
  }
  if (j.contains("adversaries")) {
    if (!j.at("adversaries").is_array())
      fail("adversaries", "expected an array");
    cfg.adversaries = parse_adversaries(j.at("adversaries"));
  }
  if (j.contains("workload")) cfg.workload = parse_workload(j.at("workload"));
  if (j.contains("expected")) {
    if (!j.at("expected").is_array()) fail("expected", "expected an array");
    cfg.expected = parse_expected(j.at("expected"));
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("(file)", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

void ScenarioConfig::validate() const {
  if (n_agents == 0) fail("n_agents", "must be >= 1");
  if (rounds == 0) fail("rounds", "must be >= 1");
  if (fanout < 0) fail("fanout", "must be >= 0");
  if (loss_p < 0.0 || loss_p >= 1.0) fail("loss_p", "must be in [0, 1)");
  if (latency.min_rounds < 1) fail("latency.min", "must be >= 1");
  if (latency.max_rounds < latency.min_rounds)
    fail("latency.max", "must be >= latency.min");
  if (protocol.anti_entropy_period < 0)
    fail("protocol.anti_entropy_period", "must be >= 0");
  if (protocol.suspicion_timeout < 1)
    fail("protocol.suspicion_timeout", "must be >= 1");
  if (protocol.proxy_count < 0) fail("protocol.proxy_count", "must be >= 0");
  if (protocol.k_confirmations < 1)
    fail("protocol.k_confirmations", "must be >= 1");
  if (protocol.trust_alpha < 0.0 || protocol.trust_alpha > 1.0)
    fail("protocol.trust_alpha", "must be in [0, 1]");
  if (protocol.trust_default < 0.0 || protocol.trust_default > 1.0)
    fail("protocol.trust_default", "must be in [0, 1]");
  if (protocol.decay_lambda < 0.0)
    fail("protocol.decay_lambda", "must be >= 0");
  if (protocol.hot_buffer_capacity < 1)
    fail("protocol.hot_buffer_capacity", "must be >= 1");
  if (protocol.load_threshold <= 0.0)
    fail("protocol.load_threshold", "must be > 0");
  auto check_agent = [&](AgentId id, const std::string& field) {
    if (id >= n_agents) fail(field, "agent id out of range");
  };
  for (std::size_t i = 0; i < workload.rumors.size(); ++i)
    check_agent(workload.rumors[i].origin,
                "workload.rumors[" + std::to_string(i) + "].origin");
  for (std::size_t i = 0; i < workload.tasks.size(); ++i)
    check_agent(workload.tasks[i].origin,
                "workload.tasks[" + std::to_string(i) + "].origin");
  for (std::size_t i = 0; i < workload.writes.size(); ++i)
    check_agent(workload.writes[i].node,
                "workload.writes[" + std::to_string(i) + "].node");
  for (std::size_t i = 0; i < workload.deletes.size(); ++i)
    check_agent(workload.deletes[i].node,
                "workload.deletes[" + std::to_string(i) + "].node");
  for (std::size_t i = 0; i < workload.increments.size(); ++i)
    check_agent(workload.increments[i].node,
                "workload.increments[" + std::to_string(i) + "].node");
  for (std::size_t i = 0; i < workload.set_ops.size(); ++i)
    check_agent(workload.set_ops[i].node,
                "workload.set_ops[" + std::to_string(i) + "].node");
  for (std::size_t i = 0; i < adversaries.size(); ++i)
    check_agent(adversaries[i].id, "adversaries[" + std::to_string(i) + "].id");
  for (std::size_t i = 0; i < churn.size(); ++i)
    for (AgentId t : churn[i].targets)
      check_agent(t, "churn[" + std::to_string(i) + "].targets");
  if (!workload.averaging.init.empty() &&
      workload.averaging.init.size() != n_agents)
    fail("workload.averaging.init", "must list one value per agent");
  if (workload.intents.enabled && workload.intents.zones == 0)
    fail("workload.intents.zones", "must be >= 1 when intents are enabled");
}

std::string ScenarioConfig::to_json_text() const {
  json j;
  j["name"] = name;
  j["n_agents"] = n_agents;
  j["rounds"] = rounds;
  j["fanout"] = fanout;
  j["loss_p"] = loss_p;
  j["latency"] = json{{"min", latency.min_rounds}, {"max", latency.max_rounds}};
  j["seed"] = seed;
  j["mode"] = mode == RunMode::gossip ? "gossip" : "broadcast";
  json p;
  if (protocol.ttl_hops) p["ttl_hops"] = *protocol.ttl_hops;
  p["rate_limit"] = protocol.rate_limit;
  p["anti_entropy_period"] = protocol.anti_entropy_period;
  p["suspicion_timeout"] = protocol.suspicion_timeout;
  p["proxy_count"] = protocol.proxy_count;
  p["k_confirmations"] = protocol.k_confirmations;
  if (protocol.theta) p["theta"] = *protocol.theta;
  p["trust_alpha"] = protocol.trust_alpha;
  p["trust_default"] = protocol.trust_default;
  p["ttl_rounds"] = protocol.ttl_rounds;
  p["decay_lambda"] = protocol.decay_lambda;
  if (protocol.grace_period) p["grace_period"] = *protocol.grace_period;
  p["hot_buffer_capacity"] = protocol.hot_buffer_capacity;
  p["load_threshold"] = protocol.load_threshold;
  p["membership"] = protocol.membership;
  if (!protocol.topic_allow.empty()) p["topic_allow"] = protocol.topic_allow;
  j["protocol"] = std::move(p);

  if (!churn.empty()) {
    json arr = json::array();
    for (const auto& ev : churn) {
      json e;
      e["round"] = ev.round;
      switch (ev.action) {
        case ChurnEvent::Action::kill: e["action"] = "kill"; break;
        case ChurnEvent::Action::revive: e["action"] = "revive"; break;
        case ChurnEvent::Action::partition: e["action"] = "partition"; break;
        case ChurnEvent::Action::heal: e["action"] = "heal"; break;
      }
      if (!ev.dynamic_target.empty())
        e["targets"] = ev.dynamic_target;
      else if (!ev.targets.empty() || ev.action != ChurnEvent::Action::heal)
        e["targets"] = ev.targets;
      arr.push_back(std::move(e));
    }
    j["churn"] = std::move(arr);
  }

  if (!adversaries.empty()) {
    json arr = json::array();
    for (const auto& a : adversaries) {
      json e;
      e["id"] = a.id;
      switch (a.behavior) {
        case AdversarySpec::Behavior::fabricate:
          e["behavior"] = "fabricate";
          break;
        case AdversarySpec::Behavior::tamper: e["behavior"] = "tamper"; break;
        case AdversarySpec::Behavior::flood: e["behavior"] = "flood"; break;
      }
      e["topic"] = a.topic;
      e["payload"] = a.payload;
      e["rate"] = a.rate;
      e["start_round"] = a.start_round;
      arr.push_back(std::move(e));
    }
    j["adversaries"] = std::move(arr);
  }

  json w;
  if (!workload.rumors.empty()) {
    json arr = json::array();
    for (const auto& r : workload.rumors) {
      json e;
      e["round"] = r.round;
      e["origin"] = r.origin;
      e["topic"] = r.topic;
      e["payload"] = r.payload;
      e["priority"] = to_string(r.priority);
      if (r.ttl_hops) e["ttl_hops"] = *r.ttl_hops;
      e["authentic"] = r.authentic;
      arr.push_back(std::move(e));
    }
    w["rumors"] = std::move(arr);
  }
  if (!workload.tasks.empty()) {
    json arr = json::array();
    for (const auto& t : workload.tasks) {
      json e;
      e["round"] = t.round;
      e["origin"] = t.origin;
      e["task_id"] = t.task_id;
      e["descriptor"] = t.descriptor;
      e["priority"] = to_string(t.priority);
      e["exec_rounds"] = t.exec_rounds;
      arr.push_back(std::move(e));
    }
    w["tasks"] = std::move(arr);
  }
  if (!workload.writes.empty()) {
    json arr = json::array();
    for (const auto& s : workload.writes)
      arr.push_back(json{{"round", s.round},
                         {"node", s.node},
                         {"key", s.key},
                         {"value", s.value}});
    w["writes"] = std::move(arr);
  }
  if (!workload.deletes.empty()) {
    json arr = json::array();
    for (const auto& s : workload.deletes)
      arr.push_back(json{{"round", s.round}, {"node", s.node}, {"key", s.key}});
    w["deletes"] = std::move(arr);
  }
  if (!workload.increments.empty()) {
    json arr = json::array();
    for (const auto& s : workload.increments)
      arr.push_back(json{{"round", s.round},
                         {"node", s.node},
                         {"counter", s.counter},
                         {"amount", s.amount}});
    w["increments"] = std::move(arr);
  }
  if (!workload.set_ops.empty()) {
    json arr = json::array();
    for (const auto& s : workload.set_ops)
      arr.push_back(json{{"round", s.round},
                         {"node", s.node},
                         {"set", s.set},
                         {"element", s.element},
                         {"remove", s.remove}});
    w["set_ops"] = std::move(arr);
  }
  if (!workload.capabilities.empty()) {
    json arr = json::array();
    for (const auto& c : workload.capabilities)
      arr.push_back(
          json{{"node", c.node}, {"capabilities", c.capabilities}});
    w["capabilities"] = std::move(arr);
  }
  if (workload.averaging.enabled) {
    json a;
    a["enabled"] = true;
    if (!workload.averaging.init.empty()) a["init"] = workload.averaging.init;
    w["averaging"] = std::move(a);
  }
  if (workload.intents.enabled) {
    json a;
    a["enabled"] = true;
    a["zones"] = workload.intents.zones;
    a["dwell_rounds"] = workload.intents.dwell_rounds;
    a["silence_rounds"] = workload.intents.silence_rounds;
    w["intents"] = std::move(a);
  }
  if (!w.empty()) j["workload"] = std::move(w);

  if (!expected.empty()) {
    json arr = json::array();
    for (const auto& e : expected)
      arr.push_back(json{{"metric", e.metric},
                         {"op", e.op},
                         {"value", e.value},
                         {"tolerance", e.tolerance}});
    j["expected"] = std::move(arr);
  }
  return j.dump(2);
}

}  // namespace gossipmesh
