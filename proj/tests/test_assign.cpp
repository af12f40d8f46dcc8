#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mcwlan/assign.hpp"
#include "mcwlan/errors.hpp"
#include "mcwlan/fixtures.hpp"
#include "oracles.hpp"

using namespace mcwlan;

namespace {

ContentionGraph path(int n) {
  ContentionGraph g(n);
  for (int i = 1; i < n; ++i) g.add_edge(i, i + 1);
  return g;
}

double sum_x(const ContentionGraph& g, const ChannelAssignment& c) {
  const auto x = ThetaBarUtility(g).x_inf(c);
  return std::accumulate(x.begin(), x.end(), 0.0);
}

ChannelAssignment named(const Topology& t, const std::string& name) {
  return {t.assignments.at(name), *t.channels};
}

}  // namespace

TEST_SUITE("assign") {

TEST_CASE("utility examples") {
  const auto p4 = path(4);
  CHECK(utility_theta_bar(p4, {{1, 1, 1, 1}, 1}) == doctest::Approx(0.5));
  CHECK(utility_theta_bar(p4, {{1, 2, 1, 2}, 2}) == doctest::Approx(1.0));
  CHECK(utility_theta_bar(p4, {{1, 1, 2, 2}, 2}) == doctest::Approx(0.5));
  const auto x = ThetaBarUtility(p4).x_inf({{1, 1, 1, 2}, 2});
  CHECK(x == std::vector<double>{1.0, 0.0, 1.0, 1.0});  // 1-2-3 has the single MIS {1,3}
  CHECK_THROWS_AS(utility_theta_bar(p4, {{1, 3, 1, 1}, 2}), ConfigError);
  CHECK_THROWS_AS(utility_theta_bar(p4, {{1, 1, 1}, 2}), ConfigError);
}

TEST_CASE("utility is invariant under channel relabelling") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 10);
    const auto g = oracle::random_graph(rng, n, 0.4).build();
    ChannelAssignment c{std::vector<int>(n), 3};
    for (int& ch : c.channels) ch = 1 + static_cast<int>(rng() % 3);
    std::vector<int> perm{1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    ChannelAssignment d = c;
    for (int& ch : d.channels) ch = perm[ch - 1];
    CHECK(utility_theta_bar(g, c) == doctest::Approx(utility_theta_bar(g, d)).epsilon(1e-14));
  }
}

TEST_CASE("one learning step moves the sampled channel by b*U") {
  LAState st = LAState::uniform(3, 2, 0.01);
  std::mt19937_64 rng(1);
  const Utility half = [](const ChannelAssignment&) { return 0.5; };
  const auto step = lri_step(st, half, rng);
  CHECK(step.utility == 0.5);
  CHECK(st.step == 1);
  for (int id = 1; id <= 3; ++id) {
    const int c = step.sampled.channels[id - 1];
    CHECK(st.p(id, c) == doctest::Approx(0.5025).epsilon(1e-15));
    CHECK(st.p(id, 3 - c) == doctest::Approx(0.4975).epsilon(1e-15));
  }
  const Utility zero = [](const ChannelAssignment&) { return 0.0; };
  const auto before = st.P;
  lri_step(st, zero, rng);
  CHECK(st.P == before);
  const Utility bad = [](const ChannelAssignment&) { return 1.5; };
  CHECK_THROWS_AS(lri_step(st, bad, rng), ConfigError);
}

TEST_CASE("property: automaton rows stay stochastic") {
  const Topology t = bundled_fixture("grid12");
  const ThetaBarUtility u(physical_graph(t));
  LAState st = LAState::uniform(12, 3, 0.05);
  std::mt19937_64 rng(47);
  for (int k = 0; k < 10000; ++k) {
    lri_step(st, std::cref(u), rng);
    if (k % 997 != 0) continue;
    for (int id = 1; id <= 12; ++id) {
      double s = 0.0;
      for (int ch = 1; ch <= 3; ++ch) {
        CHECK(st.p(id, ch) >= 0.0);
        CHECK(st.p(id, ch) <= 1.0);
        s += st.p(id, ch);
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("learning on arbitrary7 finds the global optimum from uniform start") {
  const Topology t = bundled_fixture("arbitrary7");
  const auto g = physical_graph(t);
  LriOptions o;
  o.M = 2;
  o.b = 0.001;
  o.seed = 1;
  o.record_trace = false;
  const auto r = run_lri(g, ThetaBarUtility(g), o);
  CHECK(r.converged);
  CHECK(sum_x(g, r.assignment) == doctest::Approx(7.0));
  CHECK(is_nash_equilibrium(g, r.assignment, ThetaBarUtility(g)).is_nash);
}

TEST_CASE("learning started next to the local optimum stays there") {
  const Topology t = bundled_fixture("arbitrary7");
  const auto g = physical_graph(t);
  const auto local = named(t, "local_optimum");
  CHECK(sum_x(g, local) == doctest::Approx(6.0));
  CHECK(is_nash_equilibrium(g, local, ThetaBarUtility(g)).is_nash);
  LriOptions o;
  o.M = 2;
  o.b = 0.01;
  o.init = LAState::biased(local, 0.95, 0.01);
  const auto r = run_lri(g, ThetaBarUtility(g), o);
  CHECK(r.converged);
  CHECK(sum_x(g, r.assignment) == doctest::Approx(6.0));
  CHECK(!r.trace.empty());
}

TEST_CASE("learning is reproducible for a seed") {
  const auto g = bundled_fixture("grid12");
  const auto phys = physical_graph(g);
  LriOptions o;
  o.M = 3;
  o.max_steps = 2000;
  o.seed = 11;
  const auto a = run_lri(phys, ThetaBarUtility(phys), o);
  const auto b = run_lri(phys, ThetaBarUtility(phys), o);
  CHECK(a.trace == b.trace);
  CHECK(a.final_state.P == b.final_state.P);
  CHECK(a.steps == 2000);
}

TEST_CASE("mISA examples") {
  const auto p4 = path(4);
  CHECK(misa(p4, 2).channels == std::vector<int>{1, 2, 1, 2});
  CHECK(misa(p4, 1).channels == std::vector<int>{1, 1, 1, 1});
  const auto a7 = physical_graph(bundled_fixture("arbitrary7"));
  const auto c = misa(a7, 2);
  CHECK(sum_x(a7, c) == doctest::Approx(7.0));
  CHECK_THROWS_AS(misa(p4, 0), ConfigError);
}

TEST_CASE("property: mISA layers are maximal independent sets") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const auto g = oracle::random_graph(rng, n, 0.5).build();
    const int M = 1 + static_cast<int>(rng() % 4);
    const auto c = misa(g, M, trial % 2 ? OrderPolicy::random : OrderPolicy::lexicographic, trial);
    VertexMask rest = g.vertices();
    for (int ch = 1; ch < M; ++ch) {
      VertexMask layer = 0;
      for (int i = 1; i <= n; ++i)
        if (c.channels[i - 1] == ch) layer |= cell_bit(i);
      for (int i : mask_to_ids(layer)) CHECK((g.neighbors(i) & layer) == 0);
      for (int v : mask_to_ids(rest & ~layer)) CHECK((g.neighbors(v) & layer) != 0);
      rest &= ~layer;
    }
  }
}

TEST_CASE("Nash check reports improving deviations") {
  const auto p4 = path(4);
  const ThetaBarUtility u(p4);
  const auto rep = is_nash_equilibrium(p4, {{1, 1, 2, 2}, 2}, u);
  CHECK_FALSE(rep.is_nash);
  CHECK(rep.utility == doctest::Approx(0.5));
  for (const auto& d : rep.improving) CHECK(d.utility > rep.utility);
  CHECK(is_nash_equilibrium(p4, {{1, 2, 1, 2}, 2}, u).is_nash);
}

TEST_CASE("exhaustive search examples and budget") {
  const auto p4 = path(4);
  const auto r = exhaustive_search(p4, 2, ThetaBarUtility(p4));
  CHECK(r.evaluated == 16);
  CHECK(r.utility == doctest::Approx(1.0));
  CHECK(r.best.channels == std::vector<int>{1, 2, 1, 2});  // first optimum in lexicographic order
  CHECK_THROWS_AS(exhaustive_search(ContentionGraph(30), 2, ThetaBarUtility(ContentionGraph(30))), BudgetError);
  CHECK_THROWS_AS(exhaustive_search(ContentionGraph(10), 2, ThetaBarUtility(ContentionGraph(10)), 1000), BudgetError);
}

TEST_CASE("property: exhaustive dominates every other assignment") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const auto g = oracle::random_graph(rng, n, 0.5).build();
    const ThetaBarUtility u(g);
    const auto best = exhaustive_search(g, 2, u);
    CHECK(is_nash_equilibrium(g, best.best, u).is_nash);
    CHECK(u(misa(g, 2)) <= best.utility + 1e-12);
    LriOptions o;
    o.M = 2;
    o.b = 0.05;
    o.seed = trial;
    o.record_trace = false;
    const auto l = run_lri(g, u, o);
    CHECK(l.utility <= best.utility + 1e-12);
    for (const auto& d : is_nash_equilibrium(g, l.assignment, u).improving)
      CHECK(d.utility <= best.utility + 1e-12);
  }
}

TEST_CASE("grid12 reference assignments") {
  const Topology t = bundled_fixture("grid12");
  const auto g = physical_graph(t);
  const ThetaBarUtility u(g);
  struct Row {
    const char* name;
    double theta_bar, jain;
  };
  for (const Row& r : {Row{"assignment1", 6.0, 0.9}, Row{"assignment2", 4.0, 1.0},
                       Row{"assignment3", 6.0, 1.0}, Row{"learned", 8.0, -1.0}}) {
    CAPTURE(r.name);
    const auto c = named(t, r.name);
    const auto x = u.x_inf(c);
    CHECK(std::accumulate(x.begin(), x.end(), 0.0) == doctest::Approx(r.theta_bar));
    if (r.jain > 0) CHECK(jain_fairness(x).value == doctest::Approx(r.jain));
  }
  CHECK(exhaustive_search(g, 3, u).utility * 12 == doctest::Approx(8.0));
}

TEST_CASE("finite-rho utility lies below the large-rho one on a path") {
  const Topology t = bundled_fixture("path4");
  const auto g = physical_graph(t);
  const FiniteRhoUtility fin(g, t.cells, t.mac, TrafficMode::saturated);
  const ChannelAssignment same{{1, 1, 1, 1}, 1};
  const double f = fin(same);
  CHECK(f > 0.4);
  CHECK(f < 0.6);
  CHECK(fin({{1, 2, 1, 2}, 2}) == doctest::Approx(1.0));
}

}  // TEST_SUITE
