#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gossipmesh {

// Age of a datum born at `born_round`, as seen at `now`. Rounds are the only
// clock in the system, so age is measured in rounds.
inline std::uint32_t age_of(std::uint32_t born_round, std::uint32_t now) {
  if (now < born_round)
    throw std::invalid_argument("age_of: now precedes born_round");
  return now - born_round;
}

// Relevance weight of information aged `age` rounds. Hard zero at the TTL
// boundary (age >= ttl), exponential fade exp(-lambda * age) inside it.
// lambda = 0 gives pure hard-cutoff semantics. ttl < 0 means "no cutoff".
double decay_weight(std::int64_t age, std::int64_t ttl_rounds, double lambda);

// A scalar estimate that fades toward "unknown" as its supporting samples
// age. Samples carry their own birth rounds; estimate() is the decay-weighted
// mean of the still-relevant ones.
class DecayedBelief {
 public:
  DecayedBelief(std::int64_t ttl_rounds, double lambda)
      : ttl_rounds_(ttl_rounds), lambda_(lambda) {}

  void observe(double value, std::uint32_t round) {
    samples_.push_back({value, round});
  }

  // Weighted mean of samples with nonzero weight at `now`; `fallback` when
  // everything has expired.
  double estimate(std::uint32_t now, double fallback = 0.0) const;

  // Total decay weight currently behind the estimate (0 = fully stale).
  double support(std::uint32_t now) const;

  std::size_t sample_count() const { return samples_.size(); }

  // Drop samples that can never contribute again.
  void compact(std::uint32_t now);

 private:
  struct Sample {
    double value;
    std::uint32_t born_round;
  };
  std::int64_t ttl_rounds_;
  double lambda_;
  std::vector<Sample> samples_;
};

}  // namespace gossipmesh
