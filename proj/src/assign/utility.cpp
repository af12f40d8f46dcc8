#include <numeric>
#include <string>

#include "mcwlan/assign.hpp"
#include "mcwlan/errors.hpp"

namespace mcwlan {

void validate_assignment(const ContentionGraph& physical,
                         const ChannelAssignment& c) {
  if (c.M < 1) throw ConfigError("number of channels must be at least 1");
  if (static_cast<int>(c.channels.size()) != physical.n_cells())
    throw ConfigError("assignment has " + std::to_string(c.channels.size()) +
                      " entries for " + std::to_string(physical.n_cells()) +
                      " cells");
  for (int ch : c.channels)
    if (ch < 1 || ch > c.M)
      throw ConfigError("channel " + std::to_string(ch) + " outside 1.." +
                        std::to_string(c.M));
}

ThetaBarUtility::ThetaBarUtility(ContentionGraph physical)
    : physical_(std::move(physical)) {}

const MisCounts& ThetaBarUtility::counts_for(VertexMask cells) const {
  auto it = cache_.find(cells);
  if (it == cache_.end())
    it = cache_.emplace(cells, count_maximum_independent_sets(physical_.induced(cells)))
             .first;
  return it->second;
}

std::vector<double> ThetaBarUtility::x_inf(const ChannelAssignment& c) const {
  validate_assignment(physical_, c);
  const int n = physical_.n_cells();
  // Channels do not interact, so each co-channel subgraph is solved alone.
  std::vector<VertexMask> by_channel(static_cast<std::size_t>(c.M) + 1, 0);
  for (int id = 1; id <= n; ++id)
    if (physical_.has_vertex(id)) by_channel[c.channels[id - 1]] |= cell_bit(id);
  std::vector<double> x(n, 0.0);
  for (int ch = 1; ch <= c.M; ++ch) {
    if (!by_channel[ch]) continue;
    const LargeRhoLimits lim = large_rho_limits(counts_for(by_channel[ch]), by_channel[ch]);
    for (int id : mask_to_ids(by_channel[ch])) x[id - 1] = lim.x[id - 1];
  }
  return x;
}

double ThetaBarUtility::operator()(const ChannelAssignment& c) const {
  const auto x = x_inf(c);
  return std::accumulate(x.begin(), x.end(), 0.0) / physical_.num_vertices();
}

double utility_theta_bar(const ContentionGraph& physical,
                         const ChannelAssignment& c) {
  return ThetaBarUtility(physical)(c);
}

FiniteRhoUtility::FiniteRhoUtility(ContentionGraph physical,
                                   std::vector<CellSpec> cells, MacParams mac,
                                   TrafficMode traffic)
    : physical_(std::move(physical)), cells_(std::move(cells)), mac_(mac),
      traffic_(traffic) {}

double FiniteRhoUtility::operator()(const ChannelAssignment& c) const {
  validate_assignment(physical_, c);
  MultiCellProblem prob;
  prob.graph = logical_graph(physical_, c);
  prob.cells = cells_;
  prob.mac = mac_;
  prob.traffic = traffic_;
  const FixedPointSolution sol = solve_fixed_point(prob);
  return sol.theta_bar / physical_.num_vertices();
}

}  // namespace mcwlan
