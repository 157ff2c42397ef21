#include "gossipmesh/bundles.hpp"

namespace gossipmesh {

namespace {

Expectation expect(std::string metric, std::string op, double value,
                   double tolerance = 0.0) {
  Expectation e;
  e.metric = std::move(metric);
  e.op = std::move(op);
  e.value = value;
  e.tolerance = tolerance;
  return e;
}

// Four agents, fanout two, one critical alert: the smallest run where the
// whole dissemination story is visible by hand. The origin adopts at round 0,
// pushes at round 1, and the node both pushes missed at round 1 gets it at
// round 2 — adoption staleness {0, 1, 1, 2}.
ScenarioConfig fig1() {
  ScenarioConfig cfg;
  cfg.name = "fig1";
  cfg.n_agents = 4;
  cfg.rounds = 4;
  cfg.fanout = 2;
  cfg.seed = 1;
  cfg.protocol.membership = false;
  cfg.protocol.anti_entropy_period = 0;
  RumorSpec rumor;
  rumor.round = 0;
  rumor.origin = 0;
  rumor.topic = "alert/evac";
  rumor.payload = "evacuate-now";
  rumor.priority = Priority::critical;
  cfg.workload.rumors.push_back(rumor);
  cfg.expected = {
      expect("dissemination.min_coverage", "eq", 1.0),
      expect("dissemination.rounds_to_full", "eq", 2.0),
      expect("dissemination.staleness.max", "eq", 2.0),
      expect("dissemination.staleness.p50", "eq", 1.0),
  };
  return cfg;
}

// One critical fact through twenty-five thousand agents: epidemic spread
// reaches everyone in O(log N) rounds with fanout 3.
ScenarioConfig convergence25k() {
  ScenarioConfig cfg;
  cfg.name = "convergence25k";
  cfg.n_agents = 25000;
  cfg.rounds = 30;
  cfg.fanout = 3;
  cfg.seed = 1;
  cfg.protocol.membership = false;
  cfg.protocol.anti_entropy_period = 0;
  RumorSpec rumor;
  rumor.round = 0;
  rumor.origin = 0;
  rumor.topic = "sync/blast";
  rumor.payload = "all-hands";
  rumor.priority = Priority::critical;
  cfg.workload.rumors.push_back(rumor);
  cfg.expected = {
      expect("dissemination.min_coverage", "eq", 1.0),
      expect("dissemination.rounds_to_full", "le", 20.0),
      expect("dissemination.rounds_to_full", "ge", 10.0),
  };
  return cfg;
}

// Twenty tasks, thirty-two agents with overlapping skill sets: gossiped ads,
// local claim decisions, deterministic conflict resolution, execution, and
// done-state convergence.
ScenarioConfig factory_tasks() {
  ScenarioConfig cfg;
  cfg.name = "factory_tasks";
  cfg.n_agents = 32;
  cfg.rounds = 40;
  cfg.fanout = 3;
  cfg.seed = 1;
  cfg.protocol.anti_entropy_period = 5;
  const char* skills[3] = {"weld", "paint", "inspect"};
  for (int i = 0; i < 20; ++i) {
    TaskSpec task;
    task.round = 0;
    task.origin = static_cast<AgentId>(i % 4);
    task.task_id = (i < 10 ? "t0" : "t1") + std::to_string(i % 10);
    task.descriptor = {skills[i % 3]};
    task.exec_rounds = 8;
    cfg.workload.tasks.push_back(task);
  }
  for (AgentId j = 0; j < 32; ++j) {
    CapabilitySpec cap;
    cap.node = j;
    cap.capabilities = {skills[j % 3], "general"};
    cfg.workload.capabilities.push_back(cap);
  }
  cfg.expected = {
      expect("tasks.agreed_fraction", "eq", 1.0),
      expect("tasks.done_fraction", "eq", 1.0),
      expect("tasks.reannounced", "eq", 0.0),
  };
  return cfg;
}

// Eight agents spreading intent announcements over sixteen zones: silent
// zones attract the next re-pick, so coverage completes without assignment.
ScenarioConfig disaster_zones() {
  ScenarioConfig cfg;
  cfg.name = "disaster_zones";
  cfg.n_agents = 8;
  cfg.rounds = 60;
  cfg.fanout = 3;
  cfg.seed = 1;
  cfg.protocol.membership = false;
  cfg.protocol.anti_entropy_period = 0;
  cfg.workload.intents.enabled = true;
  cfg.workload.intents.zones = 16;
  cfg.workload.intents.dwell_rounds = 5;
  cfg.workload.intents.silence_rounds = 10;
  cfg.expected = {
      expect("zones.coverage", "eq", 1.0),
  };
  return cfg;
}

// One fabricating adversary against a two-confirmation policy. The invented
// alarm has exactly one backer forever, so nobody adopts it; the true alarm
// enters at two independent origins and sails through.
ScenarioConfig adversary_k2() {
  ScenarioConfig cfg;
  cfg.name = "adversary_k2";
  cfg.n_agents = 64;
  cfg.rounds = 30;
  cfg.fanout = 3;
  cfg.seed = 1;
  cfg.protocol.membership = false;
  cfg.protocol.anti_entropy_period = 10;
  cfg.protocol.k_confirmations = 2;
  AdversarySpec adv;
  adv.id = 63;
  adv.behavior = AdversarySpec::Behavior::fabricate;
  adv.topic = "alarm/fire";
  adv.payload = "fabricated-sighting";
  adv.start_round = 0;
  cfg.adversaries.push_back(adv);
  for (AgentId origin : {AgentId(5), AgentId(9)}) {
    RumorSpec rumor;
    rumor.round = 0;
    rumor.origin = origin;
    rumor.topic = "alarm/real";
    rumor.payload = "verified-incident";
    rumor.priority = Priority::critical;
    cfg.workload.rumors.push_back(rumor);
  }
  cfg.expected = {
      expect("dissemination.false_adoptions", "eq", 0.0),
      expect("dissemination.min_coverage", "eq", 1.0),
      expect("dissemination.gate_holds", "ge", 1.0),
  };
  return cfg;
}

// Writes, CRDT ops, and a delete race a node crash and later rejoin. Probes
// detect the death, the announcer machinery is idle (no tasks), anti-entropy
// backfills the rejoined node, and the tombstone purges identically
// everywhere: byte-identical stores at the end.
ScenarioConfig churn_recovery() {
  ScenarioConfig cfg;
  cfg.name = "churn_recovery";
  cfg.n_agents = 64;
  cfg.rounds = 50;
  cfg.fanout = 3;
  cfg.seed = 1;
  cfg.protocol.anti_entropy_period = 5;
  cfg.protocol.ttl_rounds = -1;  // no age-out; convergence is the point
  cfg.protocol.grace_period = 20;

  WriteSpec w1;
  w1.round = 1;
  w1.node = 3;
  w1.key = "door/a";
  w1.value = "locked";
  cfg.workload.writes.push_back(w1);
  WriteSpec w2;
  w2.round = 1;
  w2.node = 11;
  w2.key = "door/b";
  w2.value = "open";
  cfg.workload.writes.push_back(w2);

  IncrementSpec inc;
  inc.round = 2;
  inc.node = 20;
  inc.counter = "events";
  inc.amount = 3;
  cfg.workload.increments.push_back(inc);

  SetOpSpec s1;
  s1.round = 2;
  s1.node = 8;
  s1.set = "targets";
  s1.element = "alpha";
  cfg.workload.set_ops.push_back(s1);
  SetOpSpec s2;
  s2.round = 2;
  s2.node = 9;
  s2.set = "targets";
  s2.element = "beta";
  cfg.workload.set_ops.push_back(s2);
  SetOpSpec s3;
  s3.round = 12;
  s3.node = 8;
  s3.set = "targets";
  s3.element = "alpha";
  s3.remove = true;
  cfg.workload.set_ops.push_back(s3);

  DeleteSpec del;
  del.round = 15;
  del.node = 11;
  del.key = "door/b";
  cfg.workload.deletes.push_back(del);

  ChurnEvent kill;
  kill.round = 5;
  kill.action = ChurnEvent::Action::kill;
  kill.targets = {7};
  cfg.churn.push_back(kill);
  ChurnEvent revive;
  revive.round = 30;
  revive.action = ChurnEvent::Action::revive;
  revive.targets = {7};
  cfg.churn.push_back(revive);

  cfg.expected = {
      expect("stores.identical", "eq", 1.0),
      expect("membership.refutations", "ge", 1.0),
      expect("membership.false_suspicions", "eq", 0.0),
  };
  return cfg;
}

// Pairwise gossip averaging over 200 rounds: the global sum is conserved to
// numerical identity, variance never rises, and everyone lands within 1e-3
// of the true mean.
ScenarioConfig averaging() {
  ScenarioConfig cfg;
  cfg.name = "averaging";
  cfg.n_agents = 64;
  cfg.rounds = 200;
  cfg.fanout = 3;
  cfg.seed = 1;
  cfg.protocol.membership = false;
  cfg.protocol.anti_entropy_period = 0;
  cfg.workload.averaging.enabled = true;
  cfg.expected = {
      expect("averaging.sum_drift", "le", 1e-9),
      expect("averaging.variance_monotone", "eq", 1.0),
      expect("averaging.max_dev_from_mean", "le", 1e-3),
      expect("averaging.replay_consistent", "eq", 1.0),
  };
  return cfg;
}

}  // namespace

std::vector<std::string> bundled_scenario_names() {
  return {"fig1",         "convergence25k", "factory_tasks", "disaster_zones",
          "adversary_k2", "churn_recovery", "averaging"};
}

std::optional<ScenarioConfig> bundled_scenario(const std::string& name) {
  if (name == "fig1") return fig1();
  if (name == "convergence25k") return convergence25k();
  if (name == "factory_tasks") return factory_tasks();
  if (name == "disaster_zones") return disaster_zones();
  if (name == "adversary_k2") return adversary_k2();
  if (name == "churn_recovery") return churn_recovery();
  if (name == "averaging") return averaging();
  return std::nullopt;
}

}  // namespace gossipmesh
