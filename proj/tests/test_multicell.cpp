#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mcwlan/errors.hpp"
#include "mcwlan/fixtures.hpp"
#include "mcwlan/multicell.hpp"
#include "oracles.hpp"

using namespace mcwlan;

namespace {

ContentionGraph path(int n) {
  ContentionGraph g(n);
  for (int i = 1; i < n; ++i) g.add_edge(i, i + 1);
  return g;
}

MultiCellProblem fixture_problem(const std::string& name) {
  const Topology t = bundled_fixture(name);
  MultiCellProblem p;
  p.graph = physical_graph(t);
  p.cells = t.cells;
  p.mac = t.mac;
  return p;
}

std::vector<double> random_rho(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> e(-2.0, 3.0);
  std::vector<double> rho(n);
  for (double& r : rho) r = std::pow(10.0, e(rng));
  return rho;
}

// Stationary law from the generator matrix by a linear solve, independent of
// the product form.
std::vector<double> generator_stationary(const IndependentSetFamily& fam,
                                         const std::vector<double>& lambda,
                                         const std::vector<double>& mu) {
  const int S = static_cast<int>(fam.states.size());
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(S, S);
  auto index = [&](VertexMask m) {
    return static_cast<int>(std::find(fam.states.begin(), fam.states.end(), m) - fam.states.begin());
  };
  for (int s = 0; s < S; ++s) {
    for (int j : mask_to_ids(fam.backoff[s])) Q(s, index(fam.states[s] | cell_bit(j))) += lambda[j - 1];
    for (int j : mask_to_ids(fam.states[s])) Q(s, index(fam.states[s] & ~cell_bit(j))) += mu[j - 1];
    Q(s, s) = -Q.row(s).sum();
  }
  Eigen::MatrixXd A = Q.transpose();
  A.row(S - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(S);
  rhs(S - 1) = 1.0;
  Eigen::VectorXd pi = A.fullPivLu().solve(rhs);
  return {pi.data(), pi.data() + S};
}

}  // namespace

TEST_SUITE("multicell") {

TEST_CASE("activation rate and mean active duration") {
  CHECK(activation_rate(0.0, 7, 20e-6) == 0.0);
  CHECK(activation_rate(0.3, 1, 20e-6) == doctest::Approx(0.3 / 20e-6));
  CHECK(activation_rate(0.05, 5, 20e-6) == doctest::Approx((1 - std::pow(0.95, 5)) / 2e-5));
  CHECK(std::abs(activation_rate(0.05, 5, 20e-6) - 11310.95) < 0.01);

  CHECK(mean_active_duration(0.2, 1, 1e-3, 5e-4) == 1e-3);
  CHECK(mean_active_duration(0.0, 4, 1e-3, 5e-4) == 1e-3);
  CHECK(mean_active_duration(1.0 - 1e-12, 3, 1e-3, 5e-4) == doctest::Approx(5e-4).epsilon(1e-9));
  const double ps = 5 * 0.05 * std::pow(0.95, 4) / (1 - std::pow(0.95, 5));
  CHECK(ps == doctest::Approx(0.90013).epsilon(1e-4));
  CHECK(mean_active_duration(0.05, 5, 1e-3, 5e-4) == doctest::Approx(ps * 1e-3 + (1 - ps) * 5e-4));
}

TEST_CASE("stationary distribution examples") {
  const auto one = enumerate_state_space(ContentionGraph(1));
  const std::vector<double> r1{3.0};
  const auto pi1 = stationary_distribution(one, r1);
  CHECK(pi1[0] == doctest::Approx(0.25));
  CHECK(pi1[1] == doctest::Approx(0.75));

  const auto fam = enumerate_state_space(path(4));
  const std::vector<double> ones(4, 1.0);
  CHECK(stationary_distribution(fam, ones)[0] == doctest::Approx(1.0 / 8));

  const std::vector<double> big(4, 1e9);
  const auto pi = stationary_distribution(fam, big);
  for (std::size_t s = 0; s < fam.states.size(); ++s) {
    const bool is_mis = std::find(fam.mis_list.begin(), fam.mis_list.end(), fam.states[s]) !=
                        fam.mis_list.end();
    CHECK(pi[s] == doctest::Approx(is_mis ? 1.0 / 3 : 0.0).epsilon(1e-6));
  }
}

TEST_CASE("collision probability examples") {
  const auto iso = enumerate_state_space(ContentionGraph(1));
  const std::vector<double> pi_iso = stationary_distribution(iso, std::vector<double>{2.0});
  const std::vector<double> beta{0.07};
  CHECK(collision_probabilities(iso, pi_iso, beta, std::vector<int>{1}).gamma[0] == 0.0);
  CHECK(collision_probabilities(iso, pi_iso, beta, std::vector<int>{6}).gamma[0] ==
        doctest::Approx(1 - std::pow(0.93, 5)).epsilon(1e-14));

  // Two dependent cells: each is in backoff only in the empty state, where
  // the other cell's nodes also contend.
  ContentionGraph two(2);
  two.add_edge(1, 2);
  const auto fam = enumerate_state_space(two);
  const std::vector<double> b2{0.05, 0.08};
  const std::vector<int> n2{3, 4};
  const auto pi = stationary_distribution(fam, std::vector<double>{2.0, 5.0});
  const auto g = collision_probabilities(fam, pi, b2, n2).gamma;
  CHECK(g[0] == doctest::Approx(1 - std::pow(0.95, 2) * std::pow(0.92, 4)).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(1 - std::pow(0.92, 3) * std::pow(0.95, 3)).epsilon(1e-14));
}

TEST_CASE("starved cell convention") {
  ContentionGraph star(3);
  star.add_edge(1, 2);
  star.add_edge(1, 3);
  const auto fam = enumerate_state_space(star);
  std::vector<double> pi(fam.states.size(), 0.0);
  // All mass on {2}: 1 is blocked, 2 is active, only 3 is in backoff.
  pi[std::find(fam.states.begin(), fam.states.end(), VertexMask{0b10}) - fam.states.begin()] = 1.0;
  const auto c = collision_probabilities(fam, pi, std::vector<double>{0.1, 0.1, 0.1},
                                         std::vector<int>{2, 2, 2});
  CHECK(c.starved[0]);
  CHECK(c.gamma[0] == 1.0);
  CHECK(c.starved[1]);
  CHECK_FALSE(c.starved[2]);
  CHECK(c.gamma[2] == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("unblocked fractions: direct examples") {
  const auto iso = enumerate_state_space(ContentionGraph(1));
  CHECK(unblocked_fractions_direct(iso, stationary_distribution(iso, std::vector<double>{4.0}))[0] ==
        doctest::Approx(1.0));
  ContentionGraph two(2);
  two.add_edge(1, 2);
  const auto fam = enumerate_state_space(two);
  for (double r : {0.1, 1.0, 7.0}) {
    const auto x = unblocked_fractions_direct(fam, stationary_distribution(fam, std::vector<double>{r, r}));
    CHECK(x[0] == doctest::Approx((1 + r) / (1 + 2 * r)).epsilon(1e-14));
  }
  const auto f4 = enumerate_state_space(path(4));
  const auto x = unblocked_fractions_direct(f4, stationary_distribution(f4, std::vector<double>(4, 1e8)));
  CHECK(x[0] == doctest::Approx(2.0 / 3).epsilon(1e-6));
  CHECK(x[1] == doctest::Approx(1.0 / 3).epsilon(1e-6));
}

TEST_CASE("unblocked fractions: closed-form route") {
  CHECK(unblocked_fractions_theorem1(ContentionGraph(1), std::vector<double>{3.0})[0] ==
        doctest::Approx(1.0));
  const auto x = unblocked_fractions_theorem1(path(4), std::vector<double>(4, 1.0));
  CHECK(x[0] == doctest::Approx(0.75).epsilon(1e-15));  // 2 * 3 / 8
  CHECK(x[1] == doctest::Approx(0.5).epsilon(1e-15));   // 2 * 2 / 8
}

TEST_CASE("property: both routes to x agree and match brute force") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const auto og = oracle::random_graph(rng, n, 0.15 + 0.7 * (rng() % 100) / 100.0);
    const auto g = og.build();
    const auto rho = random_rho(rng, n);
    const auto fam = enumerate_state_space(g);
    const auto direct = unblocked_fractions_direct(fam, stationary_distribution(fam, rho));
    const auto thm = unblocked_fractions_theorem1(g, rho);
    const auto brute = oracle::unblocked(og, rho);
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(direct[i] - thm[i]) < 1e-12);
      CHECK(std::abs(direct[i] - brute[i]) < 1e-12);
    }
  }
}

TEST_CASE("property: product form satisfies detailed and global balance") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto g = oracle::random_graph(rng, n, 0.4).build();
    const auto rho = random_rho(rng, n);
    std::vector<double> mu(n), lambda(n);
    for (int i = 0; i < n; ++i) {
      mu[i] = 500.0 + (rng() % 1000);
      lambda[i] = rho[i] * mu[i];
    }
    const auto fam = enumerate_state_space(g);
    const auto pi = stationary_distribution(fam, rho);
    for (std::size_t s = 0; s < fam.states.size(); ++s) {
      for (int i : mask_to_ids(fam.backoff[s])) {
        const auto t = std::find(fam.states.begin(), fam.states.end(), fam.states[s] | cell_bit(i));
        REQUIRE(t != fam.states.end());
        const double lhs = pi[s] * lambda[i - 1];
        const double rhs = pi[t - fam.states.begin()] * mu[i - 1];
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(lhs, rhs));
      }
    }
    const auto ref = generator_stationary(fam, lambda, mu);
    for (std::size_t s = 0; s < pi.size(); ++s) CHECK(std::abs(pi[s] - ref[s]) < 1e-9);
  }
}

TEST_CASE("property: a new edge never unblocks its own endpoints") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 10);
    auto og = oracle::random_graph(rng, n, 0.3);
    if (static_cast<int>(og.edges.size()) == n * (n - 1) / 2) continue;
    const auto rho = random_rho(rng, n);
    const auto before = unblocked_fractions_theorem1(og.build(), rho);
    int a = 0, b = 0;
    do {
      a = 1 + static_cast<int>(rng() % n);
      b = 1 + static_cast<int>(rng() % n);
    } while (a == b || og.adjacent(a, b));
    og.edges.emplace_back(a, b);
    const auto after = unblocked_fractions_theorem1(og.build(), rho);
    CHECK(after[a - 1] <= before[a - 1] + 1e-12);
    CHECK(after[b - 1] <= before[b - 1] + 1e-12);
  }
}

TEST_CASE("a new edge can unblock a third cell") {
  // 2-3, then 1-2: cell 1 now competes with 2, so 3 is blocked less often.
  ContentionGraph g(3);
  g.add_edge(2, 3);
  const std::vector<double> rho(3, 1.0);
  CHECK(unblocked_fractions_theorem1(g, rho)[2] == doctest::Approx(2.0 / 3));
  g.add_edge(1, 2);
  CHECK(unblocked_fractions_theorem1(g, rho)[2] == doctest::Approx(0.8));
}

TEST_CASE("fixture solutions match an independent implementation") {
  // Frozen from a separate script (same model, written without this library).
  const auto p4 = solve_fixed_point(fixture_problem("path4"));
  const std::vector<double> g4{0.239800216, 0.314537868, 0.314537868, 0.239800216};
  const std::vector<double> x4{0.696235713, 0.333669681, 0.333669681, 0.696235713};
  for (int i = 0; i < 4; ++i) {
    CHECK(p4.gamma[i] == doctest::Approx(g4[i]).epsilon(1e-7));
    CHECK(p4.x[i] == doctest::Approx(x4[i]).epsilon(1e-7));
  }
  const auto a7 = solve_fixed_point(fixture_problem("arbitrary7"));
  const std::vector<double> g7{0.066408729, 0.116080547, 0.327996309, 0.331662793,
                               0.258528427, 0.378611750, 0.313792748};
  const std::vector<double> x7{0.935877475, 0.935877475, 0.072143418, 0.289470503,
                               0.737604508, 0.330153919, 0.696492331};
  for (int i = 0; i < 7; ++i) {
    CHECK(a7.gamma[i] == doctest::Approx(g7[i]).epsilon(1e-7));
    CHECK(a7.x[i] == doctest::Approx(x7[i]).epsilon(1e-7));
  }
  const auto h7 = solve_fixed_point(fixture_problem("hex7"));
  CHECK(h7.gamma[0] == doctest::Approx(0.889725762).epsilon(1e-7));
  CHECK(h7.x[0] == doctest::Approx(0.000262281).epsilon(1e-5));
  CHECK(h7.gamma[3] == doctest::Approx(0.315689188).epsilon(1e-7));
}

TEST_CASE("solution invariants") {
  for (const char* name : {"path4", "path5", "hex7", "arbitrary7"}) {
    const auto s = solve_fixed_point(fixture_problem(name));
    CHECK(std::accumulate(s.pi.begin(), s.pi.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.residual < 1e-9);
    double tb = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      CHECK(s.x[i] >= 0.0);
      CHECK(s.x[i] <= 1.0);
      CHECK(std::abs(s.x[i] - s.x_theorem1[i]) < 1e-12);
      CHECK(s.theta_node[i] == doctest::Approx(s.theta_cell[i] / s.n_eff[i]));
      tb += s.x[i];
      // Neighbours only add contention.
      CHECK(s.gamma[i] >= single_cell_fixed_point(s.n_eff[i], s.effective_mac).gamma - 1e-12);
    }
    CHECK(s.theta_bar == doctest::Approx(tb));
  }
}

TEST_CASE("solver is deterministic and equivariant under relabelling") {
  const auto base = fixture_problem("arbitrary7");
  const auto a = solve_fixed_point(base);
  const auto b = solve_fixed_point(base);
  CHECK(a.beta == b.beta);
  CHECK(a.x == b.x);

  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> perm(7);  // new id of old cell i+1
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    MultiCellProblem q = base;
    q.graph = ContentionGraph(7);
    for (auto [i, j] : base.graph.edges()) q.graph.add_edge(perm[i - 1], perm[j - 1]);
    for (auto& c : q.cells) c.id = perm[c.id - 1];
    std::sort(q.cells.begin(), q.cells.end(), [](auto& l, auto& r) { return l.id < r.id; });
    const auto s = solve_fixed_point(q);
    for (int i = 0; i < 7; ++i) {
      CHECK(std::abs(s.beta[perm[i] - 1] - a.beta[i]) < 1e-8);
      CHECK(std::abs(s.gamma[perm[i] - 1] - a.gamma[i]) < 1e-8);
      CHECK(std::abs(s.x[perm[i] - 1] - a.x[i]) < 1e-8);
    }
  }
}

TEST_CASE("large common rho drives x to the MIS limits") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 9);
    const auto g = oracle::random_graph(rng, n, 0.4).build();
    const auto fam = enumerate_state_space(g);
    const auto lim = large_rho_limits(fam);
    double prev = 1e9;
    for (double r = 1.0; r <= 1e6; r *= 10.0) {
      const auto x = unblocked_fractions_direct(fam, stationary_distribution(fam, std::vector<double>(n, r)));
      double dev = 0.0;
      for (int i = 0; i < n; ++i) dev = std::max(dev, std::abs(x[i] - lim.x[i]));
      if (r >= 100.0) CHECK(dev <= prev + 1e-12);
      prev = dev;
      if (r == 1e6) {
        CHECK(dev < 1e-4);
        CHECK(std::accumulate(x.begin(), x.end(), 0.0) == doctest::Approx(fam.alpha).epsilon(1e-4));
      }
    }
  }
}

TEST_CASE("large-rho limit examples") {
  const auto l4 = large_rho_limits(enumerate_state_space(path(4)));
  CHECK(l4.x == std::vector<double>{2.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3});
  CHECK(l4.theta_bar == 2);
  const Topology t = bundled_fixture("arbitrary7");
  const auto l7 = large_rho_limits(enumerate_state_space(physical_graph(t)));
  const std::vector<double> want{1, 1, 0, 1.0 / 3, 2.0 / 3, 1.0 / 3, 2.0 / 3};
  for (int i = 0; i < 7; ++i) CHECK(l7.x[i] == doctest::Approx(want[i]).epsilon(1e-15));
  const auto le = large_rho_limits(enumerate_state_space(ContentionGraph(5)));
  CHECK(le.x == std::vector<double>(5, 1.0));
  CHECK(le.theta_bar == 5);
}

TEST_CASE("Jain index") {
  CHECK(jain_fairness(std::vector<double>{0.3, 0.3, 0.3}).value == doctest::Approx(1.0));
  CHECK(jain_fairness(std::vector<double>{1.0, 0.0}).value == doctest::Approx(0.5));
  const auto z = jain_fairness(std::vector<double>{0.0, 0.0});
  CHECK(z.value == 1.0);
  CHECK(z.degenerate);
  CHECK_THROWS_AS(jain_fairness(std::vector<double>{}), ConfigError);
}

TEST_CASE("TCP mode rewrites every cell to two nodes") {
  auto p = fixture_problem("path4");
  p.traffic = TrafficMode::tcp_download;
  const auto s = solve_fixed_point(p);
  CHECK(s.n_eff == std::vector<int>(4, 2));
  CHECK(s.effective_mac.payload_bits == 4320.0);
}

TEST_CASE("solver errors") {
  auto p = fixture_problem("path4");
  p.cells.pop_back();
  CHECK_THROWS_AS(solve_fixed_point(p), ConfigError);
  p = fixture_problem("path4");
  p.options.max_iterations = 2;
  try {
    solve_fixed_point(p);
    FAIL("expected non-convergence");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 0.0);
    CHECK(e.history_tail().size() == 2);
  }
  p = fixture_problem("path4");
  p.budget.max_vertices = 3;
  CHECK_THROWS_AS(solve_fixed_point(p), BudgetError);
}

}  // TEST_SUITE
