#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gossipmesh/core.hpp"

namespace gossipmesh {

struct ConfigError : std::runtime_error {
  ConfigError(std::string field_, const std::string& msg)
      : std::runtime_error(field_ + ": " + msg), field(std::move(field_)) {}
  std::string field;
};

struct LatencySpec {
  std::uint32_t min_rounds = 1;
  std::uint32_t max_rounds = 1;
};

struct ChurnEvent {
  enum class Action { kill, revive, partition, heal };
  std::uint32_t round = 0;
  Action action = Action::kill;
  std::vector<AgentId> targets;
  // "claimant:<task_id>" resolves at runtime to whoever holds the claim.
  std::string dynamic_target;
};

struct AdversarySpec {
  enum class Behavior { fabricate, tamper, flood };
  AgentId id = 0;
  Behavior behavior = Behavior::fabricate;
  std::string topic = "alarm";
  std::string payload = "bogus";
  int rate = 1;  // new rumors per round (flood) / re-pushes (fabricate)
  std::uint32_t start_round = 0;
};

struct RumorSpec {
  std::uint32_t round = 0;
  AgentId origin = 0;
  std::string topic;
  std::string payload;
  Priority priority = Priority::normal;
  std::optional<int> ttl_hops;
  bool authentic = true;
};

struct TaskSpec {
  std::uint32_t round = 0;
  AgentId origin = 0;
  std::string task_id;
  std::vector<std::string> descriptor;
  Priority priority = Priority::normal;
  std::uint32_t exec_rounds = 5;  // work duration once claimed
};

struct WriteSpec {
  std::uint32_t round = 0;
  AgentId node = 0;
  std::string key;
  std::string value;
};

struct DeleteSpec {
  std::uint32_t round = 0;
  AgentId node = 0;
  std::string key;
};

struct IncrementSpec {
  std::uint32_t round = 0;
  AgentId node = 0;
  std::string counter = "events";
  std::int64_t amount = 1;
};

struct SetOpSpec {
  std::uint32_t round = 0;
  AgentId node = 0;
  std::string set = "targets";
  std::string element;
  bool remove = false;
};

struct AveragingSpec {
  bool enabled = false;
  std::vector<double> init;  // empty => uniform(0,1) from the seed
};

struct IntentSpec {
  bool enabled = false;
  std::uint32_t zones = 0;
  std::uint32_t dwell_rounds = 5;     // rounds an agent works a zone
  std::uint32_t silence_rounds = 10;  // staleness bar for re-picking
};

struct CapabilitySpec {
  AgentId node = 0;
  std::vector<std::string> capabilities;
};

struct Workload {
  std::vector<RumorSpec> rumors;
  std::vector<TaskSpec> tasks;
  std::vector<WriteSpec> writes;
  std::vector<DeleteSpec> deletes;
  std::vector<IncrementSpec> increments;
  std::vector<SetOpSpec> set_ops;
  std::vector<CapabilitySpec> capabilities;  // default: every node capable
  AveragingSpec averaging;
  IntentSpec intents;
};

struct ProtocolKnobs {
  std::optional<int> ttl_hops;     // default ceil(log2 n) + 4
  int rate_limit = 32;             // new adoptions per node per round; <0 = off
  int anti_entropy_period = 10;    // rounds between digest syncs; 0 = off
  int suspicion_timeout = 3;       // rounds from suspect to dead
  int proxy_count = 3;             // indirect-probe helpers
  int k_confirmations = 1;
  std::optional<double> theta;     // default: k_confirmations
  double trust_alpha = 0.1;
  double trust_default = 0.5;
  std::int64_t ttl_rounds = 64;    // data expiry; <0 = never
  double decay_lambda = 0.0;
  std::optional<int> grace_period; // tombstone retention; default 4*(log2 n + ae)
  int hot_buffer_capacity = 1024;
  double load_threshold = 0.8;
  bool membership = true;          // probe/suspect machinery on/off
  std::vector<std::string> topic_allow;  // empty = allow all
};

enum class RunMode { gossip, broadcast };

struct Expectation {
  std::string metric;    // dot path into the metrics JSON
  std::string op;        // eq | le | ge | near
  double value = 0.0;
  double tolerance = 0.0;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::uint32_t n_agents = 1;
  std::uint32_t rounds = 1;
  int fanout = 3;
  double loss_p = 0.0;
  LatencySpec latency;
  std::uint64_t seed = 1;
  RunMode mode = RunMode::gossip;
  ProtocolKnobs protocol;
  std::vector<ChurnEvent> churn;
  std::vector<AdversarySpec> adversaries;
  Workload workload;
  std::vector<Expectation> expected;

  int effective_ttl_hops() const;
  double effective_theta() const {
    return protocol.theta.value_or(
        static_cast<double>(protocol.k_confirmations));
  }
  int effective_grace_period() const;

  void validate() const;  // throws ConfigError

  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig from_file(const std::string& path);
  std::string to_json_text() const;
};

// ceil(log2(n)) for n >= 1 (0 for n <= 1); shared by TTL and grace defaults.
int ceil_log2(std::uint32_t n);

}  // namespace gossipmesh
