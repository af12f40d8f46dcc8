#include "mcwlan/fixtures.hpp"

#include <cmath>
#include <numbers>

#include "mcwlan/errors.hpp"

namespace mcwlan {

namespace {

// Spacing between neighbouring APs, meters.
constexpr double kSpacing = 30.0;

Topology line(const std::string& name, int n) {
  Topology t;
  t.name = name;
  t.note = std::to_string(n) +
           " APs on a line; each is within carrier-sense range of its immediate "
           "neighbours only. 5 saturated nodes per cell.";
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= n; ++i) {
    t.cells.push_back({i, Point{(i - 1) * kSpacing, 0.0}, 5});
    if (i < n) edges.emplace_back(i, i + 1);
  }
  t.r_cs = 1.5 * kSpacing;
  t.edges = edges;
  return t;
}

Topology hex7() {
  Topology t;
  t.name = "hex7";
  t.note =
      "Centre AP (cell 1) with six APs on a hexagonal ring. The centre hears "
      "every ring cell; ring cells hear their two ring neighbours. 10 "
      "saturated nodes per cell.";
  t.cells.push_back({1, Point{0.0, 0.0}, 10});
  std::vector<std::pair<int, int>> edges;
  for (int k = 0; k < 6; ++k) {
    const double a = k * std::numbers::pi / 3.0;
    // Rounded to the millimetre so the file stays readable.
    const double x = std::round(kSpacing * std::cos(a) * 1000.0) / 1000.0;
    const double y = std::round(kSpacing * std::sin(a) * 1000.0) / 1000.0;
    t.cells.push_back({k + 2, Point{x, y}, 10});
    edges.emplace_back(1, k + 2);
  }
  for (int k = 0; k < 6; ++k) {
    const int a = k + 2, b = (k + 1) % 6 + 2;
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  t.r_cs = 1.3 * kSpacing;
  t.edges = edges;
  return t;
}

Topology arbitrary7() {
  Topology t;
  t.name = "arbitrary7";
  t.note =
      "Seven cells given only as a graph (a tree). Cell i has i+1 saturated "
      "nodes. Cells 1 and 2 hang off cell 3, which also hears cell 4; cell 4 "
      "hears 5 and 6; cell 6 hears 7. Two proper 2-colourings exist "
      "(global_a, global_b); local_optimum is a Nash point with one "
      "co-channel pair.";
  for (int i = 1; i <= 7; ++i) t.cells.push_back({i, std::nullopt, i + 1});
  t.edges = std::vector<std::pair<int, int>>{{1, 3}, {2, 3}, {3, 4},
                                             {4, 5}, {4, 6}, {6, 7}};
  t.channels = 2;
  t.assignments = {{"global_a", {1, 1, 2, 1, 2, 2, 1}},
                   {"global_b", {2, 2, 1, 2, 1, 1, 2}},
                   {"local_optimum", {1, 1, 2, 2, 1, 1, 2}}};
  return t;
}

Topology grid12() {
  Topology t;
  t.name = "grid12";
  t.note =
      "Twelve APs in two hexagonally packed rows of six (cells 1-6 bottom, "
      "7-12 top, offset by half a spacing). An AP hears every AP within two "
      "spacings. 5 saturated nodes per cell. Named assignments: assignment1 "
      "splits co-channel cells into three 4-paths, assignment2 into four "
      "triangles, assignment3 into four disjoint pairs; learned is an optimum "
      "(theta_bar 8 with 3 channels).";
  const double h = kSpacing * std::sqrt(3.0) / 2.0;
  for (int k = 0; k < 6; ++k) t.cells.push_back({k + 1, Point{k * kSpacing, 0.0}, 5});
  for (int k = 0; k < 6; ++k)
    t.cells.push_back({k + 7, Point{(k + 0.5) * kSpacing, std::round(h * 1000.0) / 1000.0}, 5});
  t.r_cs = 2.2 * kSpacing;
  t.edges = build_physical_graph(t.cells, *t.r_cs).edges();
  t.channels = 3;
  t.assignments = {{"assignment1", {1, 1, 2, 1, 1, 2, 2, 3, 3, 2, 3, 3}},
                   {"assignment2", {1, 1, 1, 2, 2, 1, 3, 3, 3, 2, 1, 1}},
                   {"assignment3", {1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3}},
                   {"learned", {1, 2, 2, 3, 2, 1, 3, 2, 1, 2, 2, 3}}};
  return t;
}

}  // namespace

std::vector<Topology> bundled_fixtures() {
  return {line("path4", 4), line("path5", 5), hex7(), arbitrary7(), grid12()};
}

Topology bundled_fixture(const std::string& name) {
  for (Topology& t : bundled_fixtures())
    if (t.name == name) return t;
  throw ConfigError("no bundled fixture named '" + name + "'");
}

}  // namespace mcwlan
