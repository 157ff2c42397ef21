#include "gossipmesh/trace.hpp"

#include <json.hpp>
#include <ostream>

#include "gossipmesh/membership.hpp"

namespace gossipmesh {

using json = nlohmann::ordered_json;

std::string effect_names(EffectMask effects) {
  static constexpr std::pair<EffectMask, const char*> kNames[] = {
      {kEffectAdopted, "adopted"},
      {kEffectBuffered, "buffered"},
      {kEffectDuplicate, "duplicate"},
      {kEffectTtlExhausted, "ttl_exhausted"},
      {kEffectRateDropped, "rate_dropped"},
      {kEffectTrustHeld, "trust_held"},
      {kEffectRejected, "rejected"},
      {kEffectFiltered, "filtered"},
      {kEffectLost, "lost"},
      {kEffectDeadTarget, "dead_target"},
      {kEffectPartitioned, "partitioned"},
      {kEffectPromoted, "promoted"},
  };
  std::string out;
  for (const auto& [bit, name] : kNames) {
    if (effects & bit) {
      if (!out.empty()) out += "|";
      out += name;
    }
  }
  if (out.empty()) out = "none";
  return out;
}

const char* to_string(MsgType t) {
  switch (t) {
    case MsgType::push: return "push";
    case MsgType::probe_ping: return "probe_ping";
    case MsgType::probe_ack: return "probe_ack";
    case MsgType::probe_req: return "probe_req";
    case MsgType::probe_relay: return "probe_relay";
    case MsgType::probe_relay_ack: return "probe_relay_ack";
    case MsgType::probe_req_ack: return "probe_req_ack";
    case MsgType::ae_digest: return "ae_digest";
    case MsgType::ae_record: return "ae_record";
    case MsgType::avg_req: return "avg_req";
    case MsgType::avg_resp: return "avg_resp";
    case MsgType::broadcast: return "broadcast";
  }
  return "push";
}

static const char* kind_name(TraceKind k) {
  switch (k) {
    case TraceKind::run_header: return "run_header";
    case TraceKind::run_footer: return "run_footer";
    case TraceKind::msg: return "msg";
    case TraceKind::member_event: return "member_event";
    case TraceKind::churn_event: return "churn_event";
    case TraceKind::inject: return "inject";
    case TraceKind::gate: return "gate";
    case TraceKind::promote: return "promote";
    case TraceKind::task_event: return "task_event";
    case TraceKind::exec_event: return "exec_event";
    case TraceKind::zone_pick: return "zone_pick";
    case TraceKind::avg_init: return "avg_init";
    case TraceKind::final_value: return "final_value";
  }
  return "msg";
}

std::uint32_t Trace::intern(std::string_view s) {
  auto it = intern_.find(std::string(s));
  if (it != intern_.end()) return it->second;
  std::uint32_t idx = static_cast<std::uint32_t>(strings_.size());
  strings_.emplace_back(s);
  intern_.emplace(strings_.back(), idx);
  return idx;
}

std::uint64_t Trace::hash() const {
  std::uint64_t h = kFnvOffset;
  for (const auto& s : strings_) {
    h = fnv1a64_u64(s.size(), h);
    h = fnv1a64(s, h);
  }
  for (const auto& r : records_) {
    h = fnv1a64_u64(static_cast<std::uint64_t>(r.kind), h);
    h = fnv1a64_u64(static_cast<std::uint64_t>(r.mtype), h);
    h = fnv1a64_u64(r.effects, h);
    h = fnv1a64_u64(r.round, h);
    h = fnv1a64_u64(r.round2, h);
    h = fnv1a64_u64(r.a, h);
    h = fnv1a64_u64(r.b, h);
    h = fnv1a64_u64(r.c, h);
    h = fnv1a64_u64(r.d, h);
    h = fnv1a64_u64(static_cast<std::uint64_t>(r.e), h);
    h = fnv1a64_u64(r.str, h);
  }
  return h;
}

void Trace::write_ndjson(std::ostream& out) const {
  for (const auto& r : records_) {
    json j;
    j["kind"] = kind_name(r.kind);
    j["round"] = r.round;
    switch (r.kind) {
      case TraceKind::run_header:
        j["n_agents"] = r.a;
        j["fanout"] = r.b;
        j["seed"] = r.c;
        j["rounds"] = r.d;
        j["mode"] = r.e;
        break;
      case TraceKind::run_footer:
        j["records"] = r.c;
        break;
      case TraceKind::msg:
        j["type"] = to_string(r.mtype);
        j["from"] = r.a;
        j["to"] = r.b;
        j["deliver_round"] = r.round2;
        j["key"] = r.c;
        j["version"] = r.d;
        j["ttl"] = r.e;
        j["effects"] = effect_names(r.effects);
        break;
      case TraceKind::member_event:
        j["observer"] = r.a;
        j["subject"] = r.b;
        j["status"] = to_string(static_cast<MemberStatus>(r.e));
        j["incarnation"] = r.c;
        break;
      case TraceKind::churn_event:
        j["target"] = r.a;
        break;
      case TraceKind::inject:
        j["origin"] = r.a;
        j["key"] = r.c;
        j["fact"] = r.d;
        j["class"] = r.e;
        break;
      case TraceKind::gate:
        j["node"] = r.a;
        j["fact"] = r.c;
        j["confirmations"] = r.e;
        break;
      case TraceKind::promote:
        j["node"] = r.a;
        j["key"] = r.c;
        break;
      case TraceKind::task_event:
        j["node"] = r.a;
        j["claimant"] = r.b;
        j["state"] = r.e;
        break;
      case TraceKind::exec_event:
        j["node"] = r.a;
        j["running"] = r.e != 0;
        break;
      case TraceKind::zone_pick:
        j["node"] = r.a;
        j["zone"] = r.e;
        break;
      case TraceKind::avg_init:
        j["node"] = r.a;
        break;
      case TraceKind::final_value:
        j["node"] = r.a;
        j["value"] = r.c;
        break;
    }
    if (r.str != TraceRecord::kNoString) j["label"] = strings_[r.str];
    out << j.dump() << "\n";
  }
}

}  // namespace gossipmesh
