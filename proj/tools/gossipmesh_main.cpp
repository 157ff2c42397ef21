// Command-line front end: run a bundled or file-based scenario, emit metrics
// as JSON or CSV, optionally dump the full event trace, and sweep a config
// knob across values. Exit codes: 0 success, 2 bad config/usage, 3 an
// embedded expectation failed.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gossipmesh/bundles.hpp"
#include "gossipmesh/metrics.hpp"
#include "gossipmesh/scenario.hpp"
#include "gossipmesh/simnet.hpp"

namespace gm = gossipmesh;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitExpectation = 3;

gm::ScenarioConfig load_scenario(const std::string& ref) {
  if (auto bundled = gm::bundled_scenario(ref)) return *bundled;
  return gm::ScenarioConfig::from_file(ref);  // throws ConfigError
}

// Sweepable knobs, addressed by the same dot paths the JSON config uses.
void apply_override(gm::ScenarioConfig& cfg, const std::string& key,
                    double value) {
  auto as_int = static_cast<int>(value);
  auto as_u32 = static_cast<std::uint32_t>(value);
  if (key == "n_agents")
    cfg.n_agents = as_u32;
  else if (key == "rounds")
    cfg.rounds = as_u32;
  else if (key == "fanout")
    cfg.fanout = as_int;
  else if (key == "loss_p")
    cfg.loss_p = value;
  else if (key == "latency.min_rounds")
    cfg.latency.min_rounds = as_u32;
  else if (key == "latency.max_rounds")
    cfg.latency.max_rounds = as_u32;
  else if (key == "protocol.ttl_hops")
    cfg.protocol.ttl_hops = as_int;
  else if (key == "protocol.rate_limit")
    cfg.protocol.rate_limit = as_int;
  else if (key == "protocol.anti_entropy_period")
    cfg.protocol.anti_entropy_period = as_int;
  else if (key == "protocol.suspicion_timeout")
    cfg.protocol.suspicion_timeout = as_int;
  else if (key == "protocol.proxy_count")
    cfg.protocol.proxy_count = as_int;
  else if (key == "protocol.k_confirmations")
    cfg.protocol.k_confirmations = as_int;
  else if (key == "protocol.theta")
    cfg.protocol.theta = value;
  else if (key == "protocol.trust_alpha")
    cfg.protocol.trust_alpha = value;
  else if (key == "protocol.trust_default")
    cfg.protocol.trust_default = value;
  else if (key == "protocol.ttl_rounds")
    cfg.protocol.ttl_rounds = static_cast<std::int64_t>(value);
  else if (key == "protocol.decay_lambda")
    cfg.protocol.decay_lambda = value;
  else if (key == "protocol.grace_period")
    cfg.protocol.grace_period = as_int;
  else if (key == "protocol.hot_buffer_capacity")
    cfg.protocol.hot_buffer_capacity = as_int;
  else if (key == "protocol.load_threshold")
    cfg.protocol.load_threshold = value;
  else
    throw gm::ConfigError(key, "not a sweepable knob");
}

struct RunOutput {
  json metrics;
  std::vector<gm::ExpectationResult> expectations;
};

RunOutput run_once(gm::ScenarioConfig cfg, const std::string& trace_path) {
  gm::Simulator sim(std::move(cfg));
  gm::Trace trace = sim.run();
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) throw gm::ConfigError("--trace", "cannot open " + trace_path);
    trace.write_ndjson(out);
  }
  RunOutput result;
  result.metrics = gm::compute_metrics(trace);
  result.expectations =
      gm::check_expectations(result.metrics, sim.config().expected);
  return result;
}

void write_output(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    if (!body.empty() && body.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw gm::ConfigError("--out", "cannot open " + path);
  out << body;
}

int report_expectations(const std::vector<gm::ExpectationResult>& results) {
  int failures = 0;
  for (const auto& res : results) {
    const auto& e = res.expectation;
    if (!res.found) {
      std::cerr << "EXPECT FAIL " << e.metric << " (" << e.op << " " << e.value
                << "): metric not found\n";
      ++failures;
    } else if (!res.ok) {
      std::cerr << "EXPECT FAIL " << e.metric << " " << e.op << " " << e.value
                << " (tol " << e.tolerance << "), got " << res.got << "\n";
      ++failures;
    } else {
      std::cerr << "EXPECT ok   " << e.metric << " " << e.op << " " << e.value
                << ", got " << res.got << "\n";
    }
  }
  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gossipmesh: deterministic gossip-coordination simulator for agent "
      "meshes"};

  std::string scenario_ref;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format = "json";
  std::string trace_path;
  std::string mode;
  std::string sweep_expr;
  int seeds = 1;
  bool list = false;

  app.add_option("--scenario", scenario_ref,
                 "Bundled scenario name or path to a scenario JSON file");
  app.add_option("--seed", seed, "Seed override")
      ->envname("GOSSIPMESH_SEED");
  app.add_option("--out", out_path, "Write metrics here (default stdout)");
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--trace", trace_path, "Write the event trace (NDJSON) here");
  app.add_option("--mode", mode, "Dissemination mode override")
      ->check(CLI::IsMember({"gossip", "broadcast"}));
  app.add_option("--sweep", sweep_expr,
                 "KEY=V1,V2,...: run once per value of a config knob");
  app.add_option("--seeds", seeds,
                 "Run this many consecutive seeds per configuration")
      ->check(CLI::PositiveNumber);
  app.add_flag("--list", list, "List bundled scenarios and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (list) {
    for (const auto& name : gm::bundled_scenario_names())
      std::cout << name << "\n";
    return kExitOk;
  }
  if (scenario_ref.empty()) {
    std::cerr << "error: --scenario is required (or use --list)\n";
    return kExitConfig;
  }

  try {
    gm::ScenarioConfig base = load_scenario(scenario_ref);
    if (seed) base.seed = *seed;
    if (mode == "gossip") base.mode = gm::RunMode::gossip;
    if (mode == "broadcast") base.mode = gm::RunMode::broadcast;

    // Parse the sweep expression into (key, values).
    std::string sweep_key;
    std::vector<double> sweep_values;
    if (!sweep_expr.empty()) {
      auto eq = sweep_expr.find('=');
      if (eq == std::string::npos || eq == 0)
        throw gm::ConfigError("--sweep", "expected KEY=V1,V2,...");
      sweep_key = sweep_expr.substr(0, eq);
      std::string rest = sweep_expr.substr(eq + 1);
      std::size_t pos = 0;
      while (pos <= rest.size()) {
        auto comma = rest.find(',', pos);
        std::string tok = rest.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok.empty())
          throw gm::ConfigError("--sweep", "empty value in list");
        try {
          sweep_values.push_back(std::stod(tok));
        } catch (const std::exception&) {
          throw gm::ConfigError("--sweep", "bad number '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      if (sweep_values.empty())
        throw gm::ConfigError("--sweep", "no values given");
    }

    const bool single = sweep_values.empty() && seeds == 1;

    if (single) {
      RunOutput run = run_once(base, trace_path);
      json doc = run.metrics;
      int failures = report_expectations(run.expectations);
      json checks = json::array();
      for (const auto& res : run.expectations) {
        json row;
        row["metric"] = res.expectation.metric;
        row["op"] = res.expectation.op;
        row["value"] = res.expectation.value;
        row["tolerance"] = res.expectation.tolerance;
        row["got"] = res.got;
        row["ok"] = res.found && res.ok;
        checks.push_back(row);
      }
      doc["expectations"] = std::move(checks);
      write_output(out_path,
                   format == "csv" ? gm::metrics_to_csv(doc) : doc.dump(2));
      return failures == 0 ? kExitOk : kExitExpectation;
    }

    // Sweep and/or multi-seed: one metrics document per run, no expectation
    // gating (exploration output).
    json runs = json::array();
    std::vector<double> values = sweep_values;
    if (values.empty()) values.push_back(0.0);  // seeds-only sweep
    for (double value : values) {
      for (int k = 0; k < seeds; ++k) {
        gm::ScenarioConfig cfg = base;
        if (!sweep_key.empty()) apply_override(cfg, sweep_key, value);
        cfg.seed = base.seed + static_cast<std::uint64_t>(k);
        RunOutput run = run_once(cfg, "");
        json entry;
        if (!sweep_key.empty()) entry[sweep_key] = value;
        entry["seed"] = cfg.seed;
        entry["metrics"] = std::move(run.metrics);
        runs.push_back(std::move(entry));
      }
    }
    if (format == "csv") {
      std::string body = "run,metric,value\n";
      for (std::size_t i = 0; i < runs.size(); ++i) {
        std::string flat = gm::metrics_to_csv(runs[i]["metrics"]);
        std::size_t start = flat.find('\n') + 1;  // drop inner header
        std::size_t pos = start;
        while (pos < flat.size()) {
          auto nl = flat.find('\n', pos);
          body += std::to_string(i) + "," + flat.substr(pos, nl - pos) + "\n";
          pos = nl + 1;
        }
      }
      write_output(out_path, body);
    } else {
      write_output(out_path, runs.dump(2));
    }
    return kExitOk;
  } catch (const gm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
