#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "mcwlan/assign.hpp"
#include "mcwlan/errors.hpp"

namespace mcwlan {

ChannelAssignment misa(const ContentionGraph& physical, int M,
                       OrderPolicy policy, std::uint64_t seed) {
  if (M < 1) throw ConfigError("number of channels must be at least 1");
  const int n = physical.n_cells();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  if (policy == OrderPolicy::random) {
    std::mt19937_64 rng(seed);
    // Fisher-Yates with explicit draws, so the order is the same on every
    // standard library.
    for (int i = n - 1; i > 0; --i)
      std::swap(order[i], order[rng() % static_cast<std::uint64_t>(i + 1)]);
  }

  ChannelAssignment c{std::vector<int>(n, M), M};
  ContentionGraph residual = physical;
  for (int ch = 1; ch < M && residual.num_vertices() > 0; ++ch) {
    const auto taken = maximal_independent_set(residual, order);
    for (int id : taken) c.channels[id - 1] = ch;
    residual = residual.induced(~ids_to_mask(taken));
  }
  // Whatever remains after M-1 rounds shares channel M (the initial value).
  return c;
}

NashReport is_nash_equilibrium(const ContentionGraph& physical,
                               const ChannelAssignment& c,
                               const Utility& utility, double eps) {
  validate_assignment(physical, c);
  NashReport rep;
  rep.utility = utility(c);
  ChannelAssignment trial = c;
  for (int id = 1; id <= physical.n_cells(); ++id) {
    const int own = c.channels[id - 1];
    for (int ch = 1; ch <= c.M; ++ch) {
      if (ch == own) continue;
      trial.channels[id - 1] = ch;
      const double u = utility(trial);
      if (u > rep.utility + eps) rep.improving.push_back({id, ch, u});
    }
    trial.channels[id - 1] = own;
  }
  rep.is_nash = rep.improving.empty();
  return rep;
}

SearchResult exhaustive_search(const ContentionGraph& physical, int M,
                               const Utility& utility,
                               std::uint64_t max_assignments) {
  if (M < 1) throw ConfigError("number of channels must be at least 1");
  const int n = physical.n_cells();
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > max_assignments / static_cast<std::uint64_t>(M) + 1) {
      total = max_assignments + 1;
      break;
    }
    total *= static_cast<std::uint64_t>(M);
  }
  if (total > max_assignments)
    throw BudgetError(std::to_string(M) + "^" + std::to_string(n) +
                      " assignments exceed the search budget of " +
                      std::to_string(max_assignments));

  // Odometer with cell 1 most significant, so enumeration is lexicographic
  // and a strict improvement test keeps the first optimum.
  ChannelAssignment cur{std::vector<int>(n, 1), M};
  SearchResult best{cur, -1.0, 0};
  while (true) {
    const double u = utility(cur);
    ++best.evaluated;
    if (u > best.utility + 1e-12) {
      best.utility = u;
      best.best = cur;
    }
    int i = n - 1;
    while (i >= 0 && cur.channels[i] == M) cur.channels[i--] = 1;
    if (i < 0) break;
    ++cur.channels[i];
  }
  return best;
}

}  // namespace mcwlan
