#include "gossipmesh/temporal.hpp"

#include <cmath>

namespace gossipmesh {

double decay_weight(std::int64_t age, std::int64_t ttl_rounds, double lambda) {
  if (age < 0) throw std::invalid_argument("decay_weight: negative age");
  if (lambda < 0) throw std::invalid_argument("decay_weight: negative lambda");
  if (ttl_rounds >= 0 && age >= ttl_rounds) return 0.0;
  if (lambda == 0.0) return 1.0;
  return std::exp(-lambda * static_cast<double>(age));
}

double DecayedBelief::estimate(std::uint32_t now, double fallback) const {
  double wsum = 0.0, vsum = 0.0;
  for (const auto& s : samples_) {
    double w = decay_weight(age_of(s.born_round, now), ttl_rounds_, lambda_);
    wsum += w;
    vsum += w * s.value;
  }
  if (wsum <= 0.0) return fallback;
  return vsum / wsum;
}

double DecayedBelief::support(std::uint32_t now) const {
  double wsum = 0.0;
  for (const auto& s : samples_)
    wsum += decay_weight(age_of(s.born_round, now), ttl_rounds_, lambda_);
  return wsum;
}

void DecayedBelief::compact(std::uint32_t now) {
  if (ttl_rounds_ < 0) return;
  std::erase_if(samples_, [&](const Sample& s) {
    return now >= s.born_round &&
           age_of(s.born_round, now) >=
               static_cast<std::uint32_t>(ttl_rounds_);
  });
}

}  // namespace gossipmesh
