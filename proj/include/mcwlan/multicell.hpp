#pragma once

#include <span>
#include <vector>

#include "mcwlan/dcf.hpp"
#include "mcwlan/topology.hpp"

namespace mcwlan {

enum class TrafficMode { saturated, tcp_download };

struct SolverOptions {
  double damping = 0.5;
  double tolerance = 1e-10;  // on max_i |delta beta_i|
  int max_iterations = 10000;
  // Below this, a cell is treated as never in backoff.
  double starved_mass = 1e-300;
};

struct MultiCellProblem {
  ContentionGraph graph;  // logical graph
  std::vector<CellSpec> cells;
  MacParams mac;
  TrafficMode traffic = TrafficMode::saturated;
  EnumerationBudget budget;
  SolverOptions options;
};

// All per-cell vectors are indexed id-1.
struct FixedPointSolution {
  std::vector<int> n_eff;
  std::vector<double> beta, gamma, lambda, mu_inv, rho;
  std::vector<bool> starved;
  IndependentSetFamily family;
  std::vector<double> pi;  // aligned with family.states
  std::vector<double> x;   // direct sum
  std::vector<double> x_theorem1;
  std::vector<double> theta_single;  // per-node single-cell throughput
  std::vector<double> theta_cell, theta_node;
  std::vector<double> x_inf, theta_node_inf;
  double theta_bar = 0.0;
  double theta_bar_inf = 0.0;
  double jain = 1.0;
  int iterations = 0;
  double residual = 0.0;  // max_i |beta_i - G(gamma_i)|
  MacParams effective_mac;  // after the TCP rewrite, if any
};

double activation_rate(double beta, int n, double sigma);
double mean_active_duration(double beta, int n, double t_s, double t_c);

std::vector<double> stationary_distribution(const IndependentSetFamily& family,
                                            std::span<const double> rho);

struct CollisionEstimate {
  std::vector<double> gamma;
  std::vector<bool> starved;
};
CollisionEstimate collision_probabilities(const IndependentSetFamily& family,
                                          std::span<const double> pi,
                                          std::span<const double> beta,
                                          std::span<const int> n_nodes,
                                          double starved_mass = 1e-300);

FixedPointSolution solve_fixed_point(const MultiCellProblem& problem);

std::vector<double> unblocked_fractions_direct(const IndependentSetFamily& family,
                                               std::span<const double> pi);
std::vector<double> unblocked_fractions_theorem1(const ContentionGraph& g,
                                                 std::span<const double> rho,
                                                 const EnumerationBudget& budget = {});

struct CellThroughputs {
  std::vector<double> cell;  // Theta_i
  std::vector<double> node;  // theta_i
};
CellThroughputs cell_throughputs(std::span<const double> x,
                                 std::span<const int> n_nodes,
                                 const MacParams& mac);

struct LargeRhoLimits {
  std::vector<double> x;
  double theta_bar = 0.0;
};
LargeRhoLimits large_rho_limits(const IndependentSetFamily& family);
LargeRhoLimits large_rho_limits(const MisCounts& counts, VertexMask vertices);

struct JainIndex {
  double value = 1.0;
  bool degenerate = false;  // all x zero
};
JainIndex jain_fairness(std::span<const double> x);

}  // namespace mcwlan
