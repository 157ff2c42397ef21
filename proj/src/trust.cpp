#include "gossipmesh/trust.hpp"

namespace gossipmesh {

bool is_credible(const ConfirmationTracker& confirmations,
                 const TrustLedger& trust, std::uint64_t fact,
                 Priority priority, AgentId relayer,
                 const CredibilityPolicy& policy) {
  if (priority == Priority::critical && trust.score(relayer) >= 0.9)
    return true;
  int have = confirmations.count(fact);
  if (have >= policy.k_confirmations) return true;
  const auto* srcs = confirmations.sources(fact);
  if (srcs != nullptr && trust.weight_of(*srcs) >= policy.theta) return true;
  return false;
}

}  // namespace gossipmesh
