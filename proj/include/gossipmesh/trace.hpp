#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gossipmesh/core.hpp"

namespace gossipmesh {

// What a delivered message did at the receiver, or why it never arrived.
// Stored as a bitmask: one message can be e.g. adopted|buffered.
enum Effect : std::uint16_t {
  kEffectNone = 0,
  kEffectAdopted = 1u << 0,
  kEffectBuffered = 1u << 1,
  kEffectDuplicate = 1u << 2,
  kEffectTtlExhausted = 1u << 3,
  kEffectRateDropped = 1u << 4,
  kEffectTrustHeld = 1u << 5,
  kEffectRejected = 1u << 6,   // failed the authenticity check
  kEffectFiltered = 1u << 7,   // topic filter declined it
  kEffectLost = 1u << 8,       // network loss
  kEffectDeadTarget = 1u << 9, // receiver was down
  kEffectPartitioned = 1u << 10,
  kEffectPromoted = 1u << 11,  // held rumor later cleared the credibility bar
};
using EffectMask = std::uint16_t;

std::string effect_names(EffectMask effects);

enum class MsgType : std::uint8_t {
  push = 0,
  probe_ping,
  probe_ack,
  probe_req,      // indirect probe request to a proxy
  probe_relay,    // proxy -> target ping
  probe_relay_ack,
  probe_req_ack,  // proxy -> requester result
  ae_digest,
  ae_record,
  avg_req,
  avg_resp,
  broadcast,
};

const char* to_string(MsgType t);

enum class TraceKind : std::uint8_t {
  run_header = 0,  // a = n_agents, b = fanout, c = seed, d = rounds, e = mode
  msg,          // a,b = from,to; round/round2 = send/deliver
  member_event, // a = observer, b = subject; e = new status; c = incarnation
  churn_event,  // a = target; str = action
  inject,       // a = origin; c = rumor key; d = fact key; e = kind; str = topic
  gate,         // credibility gate held a rumor: a = node, c = fact key, e = count
  promote,      // held rumor adopted after confirmations; a = node, c = rumor key
  task_event,   // a = node, b = claimant-or-~0; str = task id; e = state; c = epoch
  exec_event,   // a = node; str = task id; e = 1 start / 0 finish / 2 abort
  zone_pick,    // a = node; e = zone
  avg_init,     // a = node; c = value bits
  final_value,  // end-of-run snapshot rows (payload varies by str label)
  run_footer,   // c = record count at close; marks the trace complete
};

// inject.e values: what kind of fact entered the system.
inline constexpr std::int64_t kInjectRumor = 0;    // coverage-tracked fact
inline constexpr std::int64_t kInjectStateOp = 1;  // write/delete/counter/set/task
inline constexpr std::int64_t kInjectAdversarial = 2;

// One packed trace record. Field meaning depends on `kind`; `str` is an
// interned-string index (kNoString when unused).
struct TraceRecord {
  TraceKind kind;
  MsgType mtype = MsgType::push;
  EffectMask effects = kEffectNone;
  std::uint32_t round = 0;
  std::uint32_t round2 = 0;
  AgentId a = 0;
  AgentId b = 0;
  std::uint64_t c = 0;
  std::uint64_t d = 0;
  std::int64_t e = 0;
  std::uint32_t str = kNoString;

  static constexpr std::uint32_t kNoString = 0xffffffffu;
};

// Append-only, deterministic event log. The metrics layer consumes traces,
// never live simulator state, so replaying a trace reproduces every metric.
class Trace {
 public:
  std::uint32_t intern(std::string_view s);
  const std::string& str(std::uint32_t idx) const { return strings_[idx]; }

  TraceRecord& push(TraceRecord rec) {
    records_.push_back(rec);
    return records_.back();
  }
  std::size_t size() const { return records_.size(); }
  const std::vector<TraceRecord>& records() const { return records_; }
  const std::vector<std::string>& strings() const { return strings_; }

  // FNV-1a over interned strings then all record fields, in order. Two runs
  // with the same seed and config must produce the same hash.
  std::uint64_t hash() const;

  // Human/tooling view: one JSON object per line.
  void write_ndjson(std::ostream& out) const;

 private:
  std::vector<TraceRecord> records_;
  std::vector<std::string> strings_;
  std::unordered_map<std::string, std::uint32_t> intern_;
};

}  // namespace gossipmesh
