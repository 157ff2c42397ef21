#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gossipmesh {

using AgentId = std::uint32_t;

// Logical version attached to every mutable datum: a Lamport counter plus the
// author id as a deterministic tie-break. Comparison is lexicographic, so two
// distinct authors can never produce incomparable versions.
struct Version {
  std::uint64_t lamport = 0;
  AgentId author = 0;

  friend auto operator<=>(const Version&, const Version&) = default;
};

enum class Ordering { less, equal, greater };

Ordering compare_versions(const Version& a, const Version& b);

// Advance a local clock after observing some remote version: one past the
// larger Lamport value, authored locally.
Version next_version(const Version& local_clock, const Version& observed);

enum class Priority : std::uint8_t { critical = 0, normal = 1, routine = 2 };

const char* to_string(Priority p);
std::optional<Priority> priority_from_string(std::string_view s);

// Rumor identity: origin plus a per-origin sequence number. Retransmissions
// of the same rumor share the id; a new fact gets a new seq.
struct RumorId {
  AgentId origin = 0;
  std::uint32_t seq = 0;

  friend auto operator<=>(const RumorId&, const RumorId&) = default;

  std::uint64_t key() const {
    return (static_cast<std::uint64_t>(origin) << 32) | seq;
  }
};

// The gossip envelope. Payload bytes are opaque to the dissemination layer;
// only topic handlers interpret them. `authentic` stands in for a signature
// check: relays that tamper with the payload cannot re-sign it.
struct Rumor {
  RumorId id;
  std::string topic;
  std::string payload;
  Version version;
  Priority priority = Priority::normal;
  int ttl_hops = 0;
  std::uint32_t created_round = 0;
  bool authentic = true;
  double confidence = 1.0;

  bool well_formed() const;
  std::string to_json() const;
};

// Key -> newest-known-version summary exchanged during anti-entropy.
struct Digest {
  std::map<std::string, Version> entries;

  std::string to_json() const;
};

struct DigestDiff {
  std::vector<std::string> need_from_remote;  // remote strictly newer / unknown here
  std::vector<std::string> send_to_remote;    // local strictly newer / unknown there
};

// Symmetric comparison of two digests. Keys present in both with equal
// versions appear in neither list.
DigestDiff digest_diff(const Digest& local, const Digest& remote);

// FNV-1a, used for trace hashing and content keys. Stable by construction.
inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t h = kFnvOffset) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a64_u64(std::uint64_t v, std::uint64_t h) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (i * 8)) & 0xff;
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace gossipmesh
