#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "mcwlan/dcf.hpp"
#include "mcwlan/multicell.hpp"
#include "mcwlan/topology.hpp"

namespace mcwlan {

using Utility = std::function<double(const ChannelAssignment&)>;

// Mean normalized throughput (1/N) sum x_i with x from the large-rho limit
// of each channel's logical graph. Per-channel MIS counts are cached by
// vertex set, which makes repeated evaluation during learning and search
// cheap. Not thread-safe; use one instance per thread.
class ThetaBarUtility {
 public:
  explicit ThetaBarUtility(ContentionGraph physical);

  double operator()(const ChannelAssignment& c) const;
  std::vector<double> x_inf(const ChannelAssignment& c) const;
  const ContentionGraph& physical() const { return physical_; }

 private:
  const MisCounts& counts_for(VertexMask cells) const;

  ContentionGraph physical_;
  mutable std::unordered_map<VertexMask, MisCounts> cache_;
};

double utility_theta_bar(const ContentionGraph& physical,
                         const ChannelAssignment& c);

// The same mean, with x from the full fixed point on the logical graph.
class FiniteRhoUtility {
 public:
  FiniteRhoUtility(ContentionGraph physical, std::vector<CellSpec> cells,
                   MacParams mac, TrafficMode traffic);
  double operator()(const ChannelAssignment& c) const;

 private:
  ContentionGraph physical_;
  std::vector<CellSpec> cells_;
  MacParams mac_;
  TrafficMode traffic_;
};

void validate_assignment(const ContentionGraph& physical,
                         const ChannelAssignment& c);

// ---- L_R-I learning automaton ----

struct LAState {
  int n_cells = 0;
  int M = 0;
  std::vector<double> P;  // row-major N x M, P[(i-1)*M + (j-1)] = p_{i,j}
  std::int64_t step = 0;
  double b = 0.01;

  static LAState uniform(int n_cells, int M, double b);
  // Row i puts `weight` on c_i and spreads the rest evenly.
  static LAState biased(const ChannelAssignment& toward, double weight, double b);

  double p(int id, int channel) const { return P[(id - 1) * M + (channel - 1)]; }
};

struct LriStep {
  ChannelAssignment sampled;
  double utility = 0.0;
};

// Samples c_i ~ p_i for every cell, evaluates U and applies
// p_i += b * U * (e_{c_i} - p_i). Throws ConfigError if U is outside [0,1].
LriStep lri_step(LAState& state, const Utility& utility, std::mt19937_64& rng);

struct LriOptions {
  int M = 2;
  double b = 0.01;
  std::int64_t max_steps = 1'000'000;
  double convergence_threshold = 1e-3;
  std::uint64_t seed = 1;
  std::optional<LAState> init;  // uniform when empty
  bool record_trace = true;
};

struct LriResult {
  ChannelAssignment assignment;  // row-wise argmax of the final P
  double utility = 0.0;          // U(assignment)
  std::vector<double> trace;     // U of each sampled assignment
  bool converged = false;
  std::int64_t steps = 0;
  LAState final_state;
};

LriResult run_lri(const ContentionGraph& physical, const Utility& utility,
                  const LriOptions& options);

// ---- mISA ----

enum class OrderPolicy { lexicographic, random };

ChannelAssignment misa(const ContentionGraph& physical, int M,
                       OrderPolicy policy = OrderPolicy::lexicographic,
                       std::uint64_t seed = 0);

// ---- Nash check and exhaustive oracle ----

struct Deviation {
  int cell = 0;
  int channel = 0;
  double utility = 0.0;
};

struct NashReport {
  bool is_nash = true;
  double utility = 0.0;
  std::vector<Deviation> improving;
};

NashReport is_nash_equilibrium(const ContentionGraph& physical,
                               const ChannelAssignment& c,
                               const Utility& utility, double eps = 1e-12);

struct SearchResult {
  ChannelAssignment best;
  double utility = 0.0;
  std::uint64_t evaluated = 0;
};

// Exact argmax over all M^N assignments; ties keep the lexicographically
// smallest. Throws BudgetError if M^N exceeds max_assignments.
SearchResult exhaustive_search(const ContentionGraph& physical, int M,
                               const Utility& utility,
                               std::uint64_t max_assignments = 2'000'000);

}  // namespace mcwlan
