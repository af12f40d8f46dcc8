#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcwlan/topology.hpp"

namespace mcwlan {

enum class ActiveTimeDistribution { exponential, deterministic };

struct SimConfig {
  double horizon = 1.0;  // seconds of simulated time
  std::uint64_t seed = 1;
  double warmup_fraction = 0.1;
  ActiveTimeDistribution active_time = ActiveTimeDistribution::exponential;
  int batches = 20;  // for batch-means standard errors
  EnumerationBudget budget;
};

// pi_hat and pi_se are aligned with `states` (canonical order).
struct SimEstimate {
  std::vector<VertexMask> states;
  std::vector<double> pi_hat, pi_se;
  std::vector<double> x_hat, x_se;  // indexed id-1
  std::uint64_t total_events = 0;
  double observed_time = 0.0;
};

// Event-driven run of the cell-level chain: each unblocked idle cell j turns
// active at rate lambda[j]; an active cell i stays active for a time with
// mean 1/mu[i], exponential or fixed.
SimEstimate simulate(const ContentionGraph& g, std::span<const double> lambda,
                     std::span<const double> mu, const SimConfig& cfg);

// Mean number of transitions per second under the product-form law, for
// choosing a horizon that yields a target event count.
double stationary_event_rate(const ContentionGraph& g,
                             std::span<const double> lambda,
                             std::span<const double> mu,
                             const EnumerationBudget& budget = {});

}  // namespace mcwlan
