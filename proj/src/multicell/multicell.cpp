#include "mcwlan/multicell.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "mcwlan/errors.hpp"
#include "mcwlan/kernels.hpp"

namespace mcwlan {

double activation_rate(double beta, int n, double sigma) {
  return (1.0 - std::pow(1.0 - beta, n)) / sigma;
}

double mean_active_duration(double beta, int n, double t_s, double t_c) {
  if (beta <= 0.0) return t_s;
  const double p_any = 1.0 - std::pow(1.0 - beta, n);
  const double p_succ = n * beta * std::pow(1.0 - beta, n - 1) / p_any;
  return p_succ * t_s + (1.0 - p_succ) * t_c;
}

std::vector<double> stationary_distribution(const IndependentSetFamily& family,
                                            std::span<const double> rho) {
  const auto& k = kernels::active_kernels();
  std::vector<double> pi(family.states.size());
  k.subset_products(family.states.data(), family.states.size(), rho.data(),
                    family.n_cells, pi.data());
  const double z = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (double& p : pi) p /= z;
  return pi;
}

CollisionEstimate collision_probabilities(const IndependentSetFamily& family,
                                          std::span<const double> pi,
                                          std::span<const double> beta,
                                          std::span<const int> n_nodes,
                                          double starved_mass) {
  const auto& k = kernels::active_kernels();
  const int n = family.n_cells;
  std::vector<double> quiet(n);  // probability a whole neighbouring cell stays silent
  for (int j = 0; j < n; ++j) quiet[j] = std::pow(1.0 - beta[j], n_nodes[j]);

  CollisionEstimate out;
  out.gamma.assign(n, 1.0);
  out.starved.assign(n, false);
  const std::size_t count = family.states.size();
  for (int i = 0; i < n; ++i) {
    const VertexMask me = VertexMask{1} << i;
    if (!(family.universe & me)) continue;
    const double mass = k.masked_sum(family.backoff.data(), pi.data(), count, me, me);
    if (mass < starved_mass) {
      out.starved[i] = true;
      continue;
    }
    // Mass-weighted chance that no contending node, in this cell or in an
    // unblocked neighbour, transmits in the same slot.
    const double clear = k.masked_product_sum(
        family.backoff.data(), family.backoff.data(), pi.data(), count, me, me,
        family.adjacency[i], quiet.data());
    const double own = std::pow(1.0 - beta[i], n_nodes[i] - 1);
    out.gamma[i] = std::clamp(1.0 - own * (clear / mass), 0.0, 1.0);
  }
  return out;
}

std::vector<double> unblocked_fractions_direct(const IndependentSetFamily& family,
                                               std::span<const double> pi) {
  const auto& k = kernels::active_kernels();
  std::vector<double> x(family.n_cells, 0.0);
  for (int i = 0; i < family.n_cells; ++i) {
    if (!(family.universe & (VertexMask{1} << i))) continue;
    x[i] = k.masked_sum(family.states.data(), pi.data(), family.states.size(),
                        family.adjacency[i], 0);
  }
  return x;
}

namespace {

double partition_sum(const ContentionGraph& g, std::span<const double> rho,
                     const EnumerationBudget& budget) {
  const IndependentSetFamily fam = enumerate_state_space(g, budget);
  std::vector<double> w(fam.states.size());
  kernels::active_kernels().subset_products(fam.states.data(), fam.states.size(),
                                            rho.data(), fam.n_cells, w.data());
  return std::accumulate(w.begin(), w.end(), 0.0);
}

}  // namespace

std::vector<double> unblocked_fractions_theorem1(const ContentionGraph& g,
                                                 std::span<const double> rho,
                                                 const EnumerationBudget& budget) {
  const double delta = partition_sum(g, rho, budget);
  std::vector<double> x(g.n_cells(), 0.0);
  for (int id = 1; id <= g.n_cells(); ++id) {
    if (!g.has_vertex(id)) continue;
    const double delta_i =
        partition_sum(closed_neighborhood_subgraph(g, id), rho, budget);
    x[id - 1] = (1.0 + rho[id - 1]) * delta_i / delta;
  }
  return x;
}

CellThroughputs cell_throughputs(std::span<const double> x,
                                 std::span<const int> n_nodes,
                                 const MacParams& mac) {
  CellThroughputs out;
  out.cell.resize(x.size());
  out.node.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double single = single_cell_throughput(n_nodes[i], mac);
    out.cell[i] = x[i] * single;
    out.node[i] = out.cell[i] / n_nodes[i];
  }
  return out;
}

LargeRhoLimits large_rho_limits(const MisCounts& counts, VertexMask vertices) {
  LargeRhoLimits out;
  out.x.assign(counts.eta_i.size(), 0.0);
  for (std::size_t i = 0; i < counts.eta_i.size(); ++i)
    if (vertices & (VertexMask{1} << i))
      out.x[i] = static_cast<double>(counts.eta_i[i]) /
                 static_cast<double>(counts.eta);
  out.theta_bar = counts.alpha;
  return out;
}

LargeRhoLimits large_rho_limits(const IndependentSetFamily& family) {
  MisCounts c{family.alpha, family.eta, family.eta_i};
  return large_rho_limits(c, family.universe);
}

JainIndex jain_fairness(std::span<const double> x) {
  if (x.empty()) throw ConfigError("fairness index of an empty network");
  double s = 0.0, s2 = 0.0;
  for (double v : x) {
    s += v;
    s2 += v * v;
  }
  if (s2 == 0.0) return {1.0, true};
  return {s * s / (static_cast<double>(x.size()) * s2), false};
}

namespace {

struct RateState {
  std::vector<double> lambda, mu_inv, rho;
};

RateState rates_for(std::span<const double> beta, std::span<const int> n,
                    double sigma, FrameDurations t) {
  RateState r;
  const std::size_t N = beta.size();
  r.lambda.resize(N);
  r.mu_inv.resize(N);
  r.rho.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    r.lambda[i] = activation_rate(beta[i], n[i], sigma);
    r.mu_inv[i] = mean_active_duration(beta[i], n[i], t.t_s, t.t_c);
    r.rho[i] = r.lambda[i] * r.mu_inv[i];
  }
  return r;
}

}  // namespace

FixedPointSolution solve_fixed_point(const MultiCellProblem& problem) {
  const ContentionGraph& g = problem.graph;
  const int N = g.n_cells();
  if (static_cast<int>(problem.cells.size()) != N)
    throw ConfigError("graph has " + std::to_string(N) + " cells but " +
                      std::to_string(problem.cells.size()) + " cell specs given");
  if (N == 0) throw ConfigError("topology has no cells");
  problem.mac.validate();
  const SolverOptions& opt = problem.options;

  FixedPointSolution sol;
  sol.effective_mac = problem.mac;
  sol.n_eff.resize(N);
  for (const CellSpec& c : problem.cells) {
    if (c.id < 1 || c.id > N) throw ConfigError("cell ids must be 1..N");
    if (c.n_nodes < 1)
      throw ConfigError("cell " + std::to_string(c.id) + " needs n_nodes >= 1");
    sol.n_eff[c.id - 1] = c.n_nodes;
  }
  if (problem.traffic == TrafficMode::tcp_download) {
    const TcpEquivalent eq = tcp_equivalent_cell(problem.mac);
    sol.effective_mac = eq.params;
    std::fill(sol.n_eff.begin(), sol.n_eff.end(), eq.n_eff);
  }
  const MacParams& mac = sol.effective_mac;
  const auto b = mean_backoffs(mac);
  const FrameDurations t = frame_durations(mac);

  sol.family = enumerate_state_space(g, problem.budget);

  std::vector<double> beta(N, attempt_prob_G(0.0, b));
  std::deque<double> tail;
  bool converged = false;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const RateState r = rates_for(beta, sol.n_eff, mac.slot_time, t);
    const auto pi = stationary_distribution(sol.family, r.rho);
    const auto col = collision_probabilities(sol.family, pi, beta, sol.n_eff,
                                             opt.starved_mass);
    double delta = 0.0;
    for (int i = 0; i < N; ++i) {
      const double next = (1.0 - opt.damping) * beta[i] +
                          opt.damping * attempt_prob_G(col.gamma[i], b);
      delta = std::max(delta, std::abs(next - beta[i]));
      beta[i] = next;
    }
    tail.push_back(delta);
    if (tail.size() > 10) tail.pop_front();
    sol.iterations = it;
    if (delta < opt.tolerance) {
      converged = true;
      break;
    }
  }

  // Everything reported is evaluated at the final beta.
  RateState r = rates_for(beta, sol.n_eff, mac.slot_time, t);
  sol.pi = stationary_distribution(sol.family, r.rho);
  const auto col = collision_probabilities(sol.family, sol.pi, beta, sol.n_eff,
                                           opt.starved_mass);
  sol.residual = 0.0;
  for (int i = 0; i < N; ++i)
    sol.residual = std::max(sol.residual,
                            std::abs(beta[i] - attempt_prob_G(col.gamma[i], b)));
  if (!converged)
    throw ConvergenceError("multi-cell fixed point did not converge in " +
                               std::to_string(opt.max_iterations) + " iterations",
                           sol.residual, {tail.begin(), tail.end()});

  sol.beta = std::move(beta);
  sol.gamma = col.gamma;
  sol.starved = col.starved;
  sol.lambda = std::move(r.lambda);
  sol.mu_inv = std::move(r.mu_inv);
  sol.rho = std::move(r.rho);
  sol.x = unblocked_fractions_direct(sol.family, sol.pi);
  sol.x_theorem1 = unblocked_fractions_theorem1(g, sol.rho, problem.budget);

  const CellThroughputs th = cell_throughputs(sol.x, sol.n_eff, mac);
  sol.theta_cell = th.cell;
  sol.theta_node = th.node;
  sol.theta_single.resize(N);
  for (int i = 0; i < N; ++i)
    sol.theta_single[i] = single_cell_throughput(sol.n_eff[i], mac) / sol.n_eff[i];

  const LargeRhoLimits lim = large_rho_limits(sol.family);
  sol.x_inf = lim.x;
  sol.theta_bar_inf = lim.theta_bar;
  sol.theta_node_inf.resize(N);
  for (int i = 0; i < N; ++i) sol.theta_node_inf[i] = sol.x_inf[i] * sol.theta_single[i];

  sol.theta_bar = std::accumulate(sol.x.begin(), sol.x.end(), 0.0);
  sol.jain = jain_fairness(sol.x).value;
  return sol;
}

}  // namespace mcwlan
