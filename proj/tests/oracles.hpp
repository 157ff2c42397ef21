// Reference implementations used as independent oracles by the test suite.
// Everything here is written from the mathematical definition, not by
// calling the library under test, so a bug in the library cannot hide by
// agreeing with itself. Frozen: changes here invalidate the suite.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// --- reference PRNG (SplitMix64 + Lemire bounded sampling) -----------------
// Re-typed from the published constants; used to replay seeded draws.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint32_t lemire_bounded(std::uint64_t& state, std::uint32_t bound) {
  std::uint64_t x = splitmix64(state) & 0xffffffffULL;
  std::uint64_t m = x * bound;
  auto l = static_cast<std::uint32_t>(m);
  if (l < bound) {
    std::uint32_t t = (0u - bound) % bound;
    while (l < t) {
      x = splitmix64(state) & 0xffffffffULL;
      m = x * bound;
      l = static_cast<std::uint32_t>(m);
    }
  }
  return static_cast<std::uint32_t>(m >> 32);
}

// --- statistics -------------------------------------------------------------

inline double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

inline double variance(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size());
}

inline double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  std::size_t n = xs.size();
  if (n == 0) return 0.0;
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

// Ordinary least squares y = a*x + b; returns {a, b, r_squared}.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

inline LinearFit fit_line(const std::vector<double>& xs,
                          const std::vector<double>& ys) {
  LinearFit fit;
  auto n = static_cast<double>(xs.size());
  if (xs.size() != ys.size() || xs.size() < 2) return fit;
  double mx = mean(xs), my = mean(ys);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  (void)n;
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // R^2 = 1 - SS_res / SS_tot.
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double pred = fit.slope * xs[i] + fit.intercept;
    ss_res += (ys[i] - pred) * (ys[i] - pred);
  }
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

// Expected coverage of a single lossy blast to N-1 receivers, counting the
// origin itself as covered: (1 + (N-1)*(1-p)) / N.
inline double broadcast_coverage_mean(std::uint32_t n, double loss_p) {
  return (1.0 + (static_cast<double>(n) - 1.0) * (1.0 - loss_p)) /
         static_cast<double>(n);
}

// --- OR-set semantics model -------------------------------------------------
// Direct transcription of the add-wins OR-set definition: state is the set of
// (element, tag) add pairs plus the set of removed tags. An element is
// present iff it has at least one un-removed tag. remove() covers exactly the
// tags visible at the local replica; merge is componentwise union.

struct OrsetModel {
  using Tag = std::pair<std::uint32_t, std::uint32_t>;  // (replica, counter)
  std::set<std::pair<std::string, Tag>> adds;
  std::set<Tag> removes;

  void add(const std::string& elem, Tag tag) { adds.insert({elem, tag}); }

  void remove(const std::string& elem) {
    for (const auto& [e, t] : adds)
      if (e == elem && !removes.count(t)) removes.insert(t);
  }

  void merge(const OrsetModel& other) {
    adds.insert(other.adds.begin(), other.adds.end());
    removes.insert(other.removes.begin(), other.removes.end());
  }

  bool contains(const std::string& elem) const {
    for (const auto& [e, t] : adds)
      if (e == elem && !removes.count(t)) return true;
    return false;
  }

  std::vector<std::string> elements() const {
    std::vector<std::string> out;
    for (const auto& [e, t] : adds)
      if (!removes.count(t) && (out.empty() || out.back() != e))
        if (std::find(out.begin(), out.end(), e) == out.end())
          out.push_back(e);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool operator==(const OrsetModel& o) const {
    return adds == o.adds && removes == o.removes;
  }
};

// --- LWW winner model ---------------------------------------------------------
// The record with the lexicographically larger (lamport, author) version
// wins; equal versions mean identical records (single-writer per version).

struct LwwModelRecord {
  std::uint64_t lamport = 0;
  std::uint32_t author = 0;
};

inline bool lww_wins(const LwwModelRecord& a, const LwwModelRecord& b) {
  return a.lamport != b.lamport ? a.lamport > b.lamport : a.author > b.author;
}

}  // namespace oracle
