#include "gossipmesh/metrics.hpp"

#include <algorithm>

#include "gossipmesh/coordination.hpp"
#include "gossipmesh/membership.hpp"
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace gossipmesh {

using json = nlohmann::ordered_json;

namespace {

struct FactInfo {
  std::uint32_t inject_round = 0;
  std::int64_t cls = kInjectRumor;
  std::set<AgentId> origins;
  std::set<AgentId> adopters;  // excludes origins
  std::uint32_t last_adopt_round = 0;
  std::vector<std::int64_t> staleness;  // per non-origin adoption
  std::uint32_t topic_str = TraceRecord::kNoString;
  bool seen_inject = false;
};

struct TaskInfo {
  std::uint32_t announce_round = 0;
  bool announced = false;
  std::uint32_t first_claim = 0;
  bool claimed = false;
  std::set<std::uint32_t> reopen_epochs;
};

double percentile(std::vector<std::int64_t>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  double idx = p * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(idx);
  auto hi = std::min(lo + 1, sorted.size() - 1);
  double frac = idx - static_cast<double>(lo);
  return static_cast<double>(sorted[lo]) +
         frac * static_cast<double>(sorted[hi] - sorted[lo]);
}

bool delivered(EffectMask effects) {
  return (effects & (kEffectLost | kEffectDeadTarget | kEffectPartitioned)) ==
         0;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

void flatten(const json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [key, val] : j.items())
      flatten(val, prefix.empty() ? key : prefix + "." + key, out);
  } else if (j.is_array()) {
    std::size_t i = 0;
    for (const auto& val : j) flatten(val, prefix + "." + std::to_string(i++), out);
  } else {
    out << prefix << "," << j.dump() << "\n";
  }
}

}  // namespace

json compute_metrics(const Trace& trace) {
  const auto& recs = trace.records();
  if (recs.size() < 2 || recs.front().kind != TraceKind::run_header ||
      recs.back().kind != TraceKind::run_footer ||
      recs.back().c != recs.size())
    throw std::runtime_error(
        "compute_metrics: trace is truncated or missing header/footer");

  const TraceRecord& header = recs.front();
  const std::uint32_t n = header.a;
  const bool broadcast_mode = header.e == 1;

  // --- accumulation pass ---------------------------------------------------

  std::unordered_map<std::uint64_t, FactInfo> facts;
  struct Adoption {
    std::uint64_t fact;
    AgentId node;
    std::uint32_t round;
  };
  std::vector<Adoption> adoptions;

  std::map<std::string, std::uint64_t> msgs_by_type;
  std::uint64_t msgs_total = 0, msgs_lost = 0, msgs_dead = 0, msgs_part = 0;
  std::uint64_t dup_deliveries = 0, push_deliveries = 0;
  std::unordered_map<AgentId, std::uint64_t> sends, recvs;

  struct MEvent {
    std::uint32_t round;
    AgentId observer, subject;
    std::int64_t status;
  };
  std::vector<MEvent> member_events;
  struct Churn {
    std::uint32_t round;
    AgentId target;
    std::string action;
  };
  std::vector<Churn> churn_events;

  std::map<std::string, TaskInfo> task_infos;
  struct ExecEvent {
    std::uint32_t round;
    AgentId node;
    std::string tid;
    std::int64_t code;
  };
  std::vector<ExecEvent> exec_events;

  std::uint64_t gate_holds = 0;
  std::set<std::int64_t> zones_visited;
  std::uint64_t zone_total = 0, zone_picks = 0;

  std::map<AgentId, double> avg_init;
  struct AvgExchange {
    std::uint32_t round;
    AgentId initiator, partner;
  };
  std::vector<AvgExchange> avg_exchanges;

  std::map<AgentId, std::uint64_t> store_hashes;
  std::map<AgentId, double> avg_final;
  // tid -> node -> (claimant, epoch, state)
  std::map<std::string, std::map<AgentId, std::tuple<AgentId, std::uint64_t,
                                                     std::int64_t>>>
      task_finals;
  std::uint64_t held_end = 0;

  for (const auto& rec : recs) {
    switch (rec.kind) {
      case TraceKind::run_header:
      case TraceKind::run_footer:
        break;
      case TraceKind::inject: {
        auto& f = facts[rec.d];
        if (!f.seen_inject || rec.round < f.inject_round)
          f.inject_round = rec.round;
        f.seen_inject = true;
        f.cls = std::max(f.cls, rec.e);
        f.origins.insert(rec.a);
        f.topic_str = rec.str;
        break;
      }
      case TraceKind::msg: {
        ++msgs_total;
        ++msgs_by_type[to_string(rec.mtype)];
        ++sends[rec.a];
        if (rec.effects & kEffectLost) ++msgs_lost;
        if (rec.effects & kEffectDeadTarget) ++msgs_dead;
        if (rec.effects & kEffectPartitioned) ++msgs_part;
        if (delivered(rec.effects)) {
          ++recvs[rec.b];
          if (rec.mtype == MsgType::push || rec.mtype == MsgType::broadcast) {
            ++push_deliveries;
            if (rec.effects & kEffectDuplicate) ++dup_deliveries;
          }
          if (rec.effects & kEffectAdopted)
            adoptions.push_back({rec.d, rec.b, rec.round2});
          if (rec.mtype == MsgType::avg_resp && rec.effects == kEffectNone)
            avg_exchanges.push_back({rec.round, rec.b, rec.a});
        }
        break;
      }
      case TraceKind::promote:
        adoptions.push_back({rec.d, rec.a, rec.round});
        break;
      case TraceKind::gate:
        ++gate_holds;
        break;
      case TraceKind::member_event:
        member_events.push_back({rec.round, rec.a, rec.b, rec.e});
        break;
      case TraceKind::churn_event:
        churn_events.push_back({rec.round, rec.a, trace.str(rec.str)});
        break;
      case TraceKind::task_event: {
        auto& info = task_infos[trace.str(rec.str)];
        auto state = static_cast<TaskState>(rec.e);
        if (state == TaskState::available) {
          if (rec.c == 0) {
            if (!info.announced || rec.round < info.announce_round)
              info.announce_round = rec.round;
            info.announced = true;
          } else {
            info.reopen_epochs.insert(static_cast<std::uint32_t>(rec.c));
          }
        } else if (state == TaskState::claimed) {
          if (!info.claimed || rec.round < info.first_claim)
            info.first_claim = rec.round;
          info.claimed = true;
        }
        break;
      }
      case TraceKind::exec_event:
        exec_events.push_back({rec.round, rec.a, trace.str(rec.str), rec.e});
        break;
      case TraceKind::zone_pick:
        ++zone_picks;
        zones_visited.insert(rec.e);
        zone_total = std::max(zone_total, rec.d);
        break;
      case TraceKind::avg_init:
        avg_init[rec.a] = std::bit_cast<double>(rec.c);
        break;
      case TraceKind::final_value: {
        const std::string& label = trace.str(rec.str);
        if (label == "store")
          store_hashes[rec.a] = rec.c;
        else if (label == "avg")
          avg_final[rec.a] = std::bit_cast<double>(rec.c);
        else if (label == "held")
          held_end += static_cast<std::uint64_t>(rec.e);
        else if (label.rfind("task/", 0) == 0)
          task_finals[label.substr(5)][rec.a] = {rec.b, rec.c, rec.e};
        break;
      }
    }
  }

  // --- dissemination ---------------------------------------------------------

  for (const auto& adoption : adoptions) {
    auto it = facts.find(adoption.fact);
    if (it == facts.end()) continue;  // protocol chatter, not an injected fact
    auto& f = it->second;
    if (f.origins.contains(adoption.node)) continue;
    if (f.adopters.insert(adoption.node).second) {
      f.last_adopt_round = std::max(f.last_adopt_round, adoption.round);
      f.staleness.push_back(static_cast<std::int64_t>(adoption.round) -
                            static_cast<std::int64_t>(f.inject_round));
    }
  }

  json per_fact = json::array();
  std::vector<std::int64_t> staleness_samples;
  std::int64_t rounds_to_full = -1;
  std::uint64_t rumor_facts = 0, full_facts = 0;
  std::uint64_t false_adoptions = 0;

  // Deterministic ordering for the report: by inject round, then topic.
  std::vector<std::pair<std::uint64_t, const FactInfo*>> fact_list;
  for (const auto& [key, f] : facts)
    if (f.seen_inject) fact_list.push_back({key, &f});
  std::sort(fact_list.begin(), fact_list.end(),
            [&](const auto& x, const auto& y) {
              if (x.second->inject_round != y.second->inject_round)
                return x.second->inject_round < y.second->inject_round;
              return x.first < y.first;
            });

  for (const auto& [key, fp] : fact_list) {
    const FactInfo& f = *fp;
    if (f.cls == kInjectAdversarial) {
      false_adoptions += f.adopters.size();
      json row;
      row["topic"] = f.topic_str == TraceRecord::kNoString
                         ? ""
                         : trace.str(f.topic_str);
      row["class"] = "adversarial";
      row["inject_round"] = f.inject_round;
      row["adopters"] = f.adopters.size();
      per_fact.push_back(row);
      continue;
    }
    if (f.cls != kInjectRumor) continue;  // state ops converge via stores
    ++rumor_facts;
    std::size_t covered = f.adopters.size() + f.origins.size();
    double coverage = n == 0 ? 0.0 : static_cast<double>(covered) / n;
    bool full = covered == n;
    std::int64_t ttf = -1;
    if (full) {
      ++full_facts;
      ttf = f.adopters.empty()
                ? 0
                : static_cast<std::int64_t>(f.last_adopt_round) -
                      static_cast<std::int64_t>(f.inject_round);
      rounds_to_full = std::max(rounds_to_full, ttf);
    }
    for (std::size_t i = 0; i < f.origins.size(); ++i)
      staleness_samples.push_back(0);
    staleness_samples.insert(staleness_samples.end(), f.staleness.begin(),
                             f.staleness.end());
    json row;
    row["topic"] =
        f.topic_str == TraceRecord::kNoString ? "" : trace.str(f.topic_str);
    row["class"] = "rumor";
    row["inject_round"] = f.inject_round;
    row["coverage"] = coverage;
    row["rounds_to_full"] = ttf;
    per_fact.push_back(row);
  }

  std::sort(staleness_samples.begin(), staleness_samples.end());
  json staleness_hist = json::object();
  for (auto s : staleness_samples) {
    auto key = std::to_string(s);
    staleness_hist[key] = staleness_hist.value(key, 0) + 1;
  }

  // --- membership -------------------------------------------------------------

  // Ground-truth liveness timeline from churn events.
  std::map<AgentId, std::vector<std::pair<std::uint32_t, bool>>> life;
  for (const auto& ev : churn_events) {
    if (ev.action == "kill") life[ev.target].push_back({ev.round, false});
    if (ev.action == "revive") life[ev.target].push_back({ev.round, true});
  }
  auto alive_at = [&](AgentId id, std::uint32_t round) {
    bool alive = true;
    auto it = life.find(id);
    if (it == life.end()) return true;
    for (const auto& [r, state] : it->second) {
      if (r > round) break;
      alive = state;
    }
    return alive;
  };
  auto ever_killed_for_good = [&](AgentId id) {
    auto it = life.find(id);
    if (it == life.end()) return false;
    return !it->second.empty() && !it->second.back().second;
  };

  json detections = json::array();
  std::vector<double> first_detects;
  std::int64_t max_all_dead = -1;
  bool all_dead_complete = true;
  std::uint64_t false_suspicions = 0, refutations = 0;

  for (const auto& ev : member_events) {
    if (ev.status == static_cast<std::int64_t>(MemberStatus::suspect) &&
        alive_at(ev.subject, ev.round))
      ++false_suspicions;
    if (ev.status == static_cast<std::int64_t>(MemberStatus::alive) &&
        ev.observer == ev.subject)
      ++refutations;
  }

  for (const auto& [target, timeline] : life) {
    for (const auto& [kill_round, state] : timeline) {
      if (state) continue;  // revive
      // First detection: any other node marks the target suspect or dead.
      std::int64_t first = -1;
      for (const auto& ev : member_events) {
        if (ev.subject != target || ev.observer == target) continue;
        if (ev.round < kill_round) continue;
        if (ev.status == static_cast<std::int64_t>(MemberStatus::alive))
          continue;
        if (first < 0 || static_cast<std::int64_t>(ev.round) < first)
          first = ev.round;
      }
      // Full propagation: every expected observer has marked it dead.
      std::map<AgentId, std::uint32_t> dead_marks;
      for (const auto& ev : member_events) {
        if (ev.subject != target || ev.observer == target) continue;
        if (ev.round < kill_round) continue;
        if (ev.status != static_cast<std::int64_t>(MemberStatus::dead))
          continue;
        auto it = dead_marks.find(ev.observer);
        if (it == dead_marks.end() || ev.round < it->second)
          dead_marks[ev.observer] = ev.round;
      }
      std::int64_t all_dead = -1;
      bool complete = true;
      for (AgentId obs = 0; obs < n; ++obs) {
        if (obs == target || ever_killed_for_good(obs)) continue;
        auto it = dead_marks.find(obs);
        if (it == dead_marks.end()) {
          complete = false;
          break;
        }
        all_dead = std::max(all_dead,
                            static_cast<std::int64_t>(it->second));
      }
      json row;
      row["target"] = target;
      row["killed_round"] = kill_round;
      row["first_detection_latency"] =
          first < 0 ? -1 : first - static_cast<std::int64_t>(kill_round);
      row["all_dead_latency"] =
          complete && all_dead >= 0
              ? all_dead - static_cast<std::int64_t>(kill_round)
              : -1;
      detections.push_back(row);
      if (first >= 0)
        first_detects.push_back(
            static_cast<double>(first - static_cast<std::int64_t>(kill_round)));
      if (complete && all_dead >= 0)
        max_all_dead = std::max(
            max_all_dead, all_dead - static_cast<std::int64_t>(kill_round));
      else
        all_dead_complete = false;
      break;  // one kill per target is the supported shape; first one counts
    }
  }

  double mean_first_detect = 0.0;
  for (double d : first_detects) mean_first_detect += d;
  if (!first_detects.empty())
    mean_first_detect /= static_cast<double>(first_detects.size());

  // --- tasks -------------------------------------------------------------------

  std::uint64_t tasks_total = 0, tasks_agreed = 0, tasks_done = 0;
  std::uint64_t reannounced = 0;
  std::vector<double> claim_latencies;
  for (const auto& [tid, info] : task_infos) {
    if (!info.announced) continue;
    ++tasks_total;
    reannounced += info.reopen_epochs.size();
    if (info.claimed)
      claim_latencies.push_back(
          static_cast<double>(info.first_claim - info.announce_round));
    auto fin = task_finals.find(tid);
    if (fin == task_finals.end() || fin->second.empty()) continue;
    bool agree = true;
    const auto& first = fin->second.begin()->second;
    for (const auto& [node, tuple] : fin->second)
      if (tuple != first) {
        agree = false;
        break;
      }
    AgentId claimant = std::get<0>(first);
    auto state = static_cast<TaskState>(std::get<2>(first));
    if (agree && claimant != static_cast<AgentId>(~0u) &&
        (state == TaskState::claimed || state == TaskState::done)) {
      ++tasks_agreed;
      if (state == TaskState::done) ++tasks_done;
    }
  }
  double mean_claim_latency = 0.0;
  for (double d : claim_latencies) mean_claim_latency += d;
  if (!claim_latencies.empty())
    mean_claim_latency /= static_cast<double>(claim_latencies.size());

  // Duplicate execution: rounds where two agents were simultaneously running
  // the same task, summed over tasks.
  std::uint64_t duplicate_exec_rounds = 0;
  {
    std::map<std::string, std::map<AgentId, std::vector<std::pair<
                                               std::uint32_t, std::uint32_t>>>>
        intervals;
    std::map<std::pair<std::string, AgentId>, std::uint32_t> open;
    for (const auto& ev : exec_events) {
      auto key = std::make_pair(ev.tid, ev.node);
      if (ev.code == 1) {
        open[key] = ev.round;
      } else {
        auto it = open.find(key);
        if (it != open.end()) {
          intervals[ev.tid][ev.node].push_back({it->second, ev.round});
          open.erase(it);
        }
      }
    }
    const auto horizon = static_cast<std::uint32_t>(header.d);
    for (const auto& [key, start] : open)
      intervals[key.first][key.second].push_back({start, horizon});
    for (const auto& [tid, per_agent] : intervals) {
      std::map<std::uint32_t, int> active;
      for (const auto& [agent, spans] : per_agent)
        for (const auto& [s, e] : spans)
          for (std::uint32_t r = s; r < e; ++r) ++active[r];
      for (const auto& [r, count] : active)
        if (count >= 2) ++duplicate_exec_rounds;
    }
  }

  // --- averaging (full replay from initial values) -----------------------------

  json averaging = json::object();
  averaging["enabled"] = !avg_init.empty();
  if (!avg_init.empty()) {
    std::map<AgentId, double> values = avg_init;
    double sum0 = 0.0;
    for (const auto& [id, v] : values) sum0 += v;
    const double mean = sum0 / static_cast<double>(values.size());

    auto variance = [&]() {
      double acc = 0.0;
      for (const auto& [id, v] : values) {
        double d = v - mean;
        acc += d * d;
      }
      return acc / static_cast<double>(values.size());
    };

    bool monotone = true;
    double prev_var = variance();
    std::uint32_t current_round = 0;
    bool first = true;
    for (const auto& ex : avg_exchanges) {
      if (!first && ex.round != current_round) {
        double v = variance();
        if (v > prev_var + 1e-12) monotone = false;
        prev_var = std::min(prev_var, v);
      }
      first = false;
      current_round = ex.round;
      double mid = (values[ex.initiator] + values[ex.partner]) / 2.0;
      values[ex.initiator] = mid;
      values[ex.partner] = mid;
    }
    double final_var = variance();
    if (final_var > prev_var + 1e-12) monotone = false;

    double sum_end = 0.0, max_dev = 0.0;
    for (const auto& [id, v] : values) {
      sum_end += v;
      max_dev = std::max(max_dev, std::abs(v - mean));
    }

    bool replay_consistent = true;
    for (const auto& [id, v] : avg_final) {
      auto it = values.find(id);
      if (it == values.end() || it->second != v) replay_consistent = false;
    }

    averaging["exchanges"] = avg_exchanges.size();
    averaging["sum_drift"] = std::abs(sum_end - sum0);
    averaging["variance_monotone"] = monotone;
    averaging["final_variance"] = final_var;
    averaging["max_dev_from_mean"] = max_dev;
    averaging["replay_consistent"] = replay_consistent;
  }

  // --- assemble ----------------------------------------------------------------

  json out;
  json run;
  run["scenario"] = trace.str(header.str);
  run["n"] = n;
  run["fanout"] = header.b;
  run["seed"] = header.c;
  run["rounds"] = header.d;
  run["mode"] = broadcast_mode ? "broadcast" : "gossip";
  run["records"] = recs.size();
  run["trace_hash"] = hex64(trace.hash());
  out["run"] = std::move(run);

  json dissemination;
  dissemination["facts"] = rumor_facts;
  dissemination["full_coverage_facts"] = full_facts;
  dissemination["rounds_to_full"] = rounds_to_full;
  double min_cov = 1.0;
  for (const auto& row : per_fact)
    if (row["class"] == "rumor")
      min_cov = std::min(min_cov, row["coverage"].get<double>());
  dissemination["min_coverage"] = rumor_facts == 0 ? 0.0 : min_cov;
  json staleness;
  staleness["samples"] = staleness_samples.size();
  staleness["histogram"] = std::move(staleness_hist);
  staleness["p50"] = percentile(staleness_samples, 0.5);
  staleness["p90"] = percentile(staleness_samples, 0.9);
  staleness["p99"] = percentile(staleness_samples, 0.99);
  staleness["max"] =
      staleness_samples.empty() ? 0 : staleness_samples.back();
  dissemination["staleness"] = std::move(staleness);
  dissemination["redundancy"] =
      push_deliveries == 0
          ? 0.0
          : static_cast<double>(dup_deliveries) /
                static_cast<double>(push_deliveries);
  dissemination["false_adoptions"] = false_adoptions;
  dissemination["gate_holds"] = gate_holds;
  dissemination["per_fact"] = std::move(per_fact);
  out["dissemination"] = std::move(dissemination);

  json messages;
  messages["total"] = msgs_total;
  messages["lost"] = msgs_lost;
  messages["dead_target"] = msgs_dead;
  messages["partitioned"] = msgs_part;
  messages["push_deliveries"] = push_deliveries;
  messages["duplicates"] = dup_deliveries;
  json by_type = json::object();
  for (const auto& [t, c] : msgs_by_type) by_type[t] = c;
  messages["by_type"] = std::move(by_type);
  std::uint64_t load_max = 0, load_sum = 0;
  for (AgentId i = 0; i < n; ++i) {
    std::uint64_t load = sends[i] + recvs[i];
    load_max = std::max(load_max, load);
    load_sum += load;
  }
  messages["load_max"] = load_max;
  messages["load_mean"] =
      n == 0 ? 0.0 : static_cast<double>(load_sum) / static_cast<double>(n);
  out["messages"] = std::move(messages);

  json membership;
  membership["events"] = member_events.size();
  membership["mean_first_detection"] =
      first_detects.empty() ? -1.0 : mean_first_detect;
  membership["max_all_dead_latency"] =
      all_dead_complete ? max_all_dead : -1;
  membership["false_suspicions"] = false_suspicions;
  membership["refutations"] = refutations;
  membership["detections"] = std::move(detections);
  out["membership"] = std::move(membership);

  json tasks;
  tasks["count"] = tasks_total;
  tasks["agreed_fraction"] =
      tasks_total == 0 ? 1.0
                       : static_cast<double>(tasks_agreed) /
                             static_cast<double>(tasks_total);
  tasks["done_fraction"] = tasks_total == 0
                               ? 1.0
                               : static_cast<double>(tasks_done) /
                                     static_cast<double>(tasks_total);
  tasks["mean_claim_latency"] =
      claim_latencies.empty() ? -1.0 : mean_claim_latency;
  tasks["duplicate_exec_rounds"] = duplicate_exec_rounds;
  tasks["reannounced"] = reannounced;
  out["tasks"] = std::move(tasks);

  out["averaging"] = std::move(averaging);

  json stores;
  stores["nodes"] = store_hashes.size();
  std::set<std::uint64_t> distinct;
  for (const auto& [id, h] : store_hashes) distinct.insert(h);
  stores["distinct"] = distinct.size();
  stores["identical"] = !store_hashes.empty() && distinct.size() == 1;
  out["stores"] = std::move(stores);

  json zones;
  zones["total"] = zone_total;
  zones["visited"] = zones_visited.size();
  zones["coverage"] = zone_total == 0
                          ? 0.0
                          : static_cast<double>(zones_visited.size()) /
                                static_cast<double>(zone_total);
  zones["picks"] = zone_picks;
  out["zones"] = std::move(zones);

  json held;
  held["total_end"] = held_end;
  out["held"] = std::move(held);

  return out;
}

std::string metrics_to_csv(const json& metrics) {
  std::ostringstream out;
  out << "metric,value\n";
  flatten(metrics, "", out);
  return out.str();
}

std::vector<ExpectationResult> check_expectations(
    const json& metrics, const std::vector<Expectation>& expected) {
  std::vector<ExpectationResult> results;
  for (const auto& exp : expected) {
    ExpectationResult res;
    res.expectation = exp;
    const json* cursor = &metrics;
    std::size_t pos = 0;
    bool found = true;
    while (pos <= exp.metric.size()) {
      auto dot = exp.metric.find('.', pos);
      std::string part = exp.metric.substr(
          pos, dot == std::string::npos ? std::string::npos : dot - pos);
      if (!cursor->is_object() || !cursor->contains(part)) {
        found = false;
        break;
      }
      cursor = &(*cursor)[part];
      if (dot == std::string::npos) break;
      pos = dot + 1;
    }
    if (found && cursor->is_boolean())
      res.got = cursor->get<bool>() ? 1.0 : 0.0;
    else if (found && cursor->is_number())
      res.got = cursor->get<double>();
    else
      found = false;
    res.found = found;
    if (found) {
      if (exp.op == "eq")
        res.ok = std::abs(res.got - exp.value) <= exp.tolerance;
      else if (exp.op == "le")
        res.ok = res.got <= exp.value + exp.tolerance;
      else if (exp.op == "ge")
        res.ok = res.got >= exp.value - exp.tolerance;
      else if (exp.op == "near")
        res.ok = std::abs(res.got - exp.value) <= exp.tolerance;
    }
    results.push_back(res);
  }
  return results;
}

}  // namespace gossipmesh
