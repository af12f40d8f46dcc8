#include "mcwlan/topology.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "mcwlan/errors.hpp"

namespace mcwlan {

std::vector<int> mask_to_ids(VertexMask mask) {
  std::vector<int> ids;
  ids.reserve(std::popcount(mask));
  while (mask) {
    ids.push_back(std::countr_zero(mask) + 1);
    mask &= mask - 1;
  }
  return ids;
}

VertexMask ids_to_mask(std::span<const int> ids) {
  VertexMask m = 0;
  for (int id : ids) m |= cell_bit(id);
  return m;
}

ContentionGraph::ContentionGraph(int n_cells, GraphKind kind)
    : n_(n_cells), adj_(static_cast<std::size_t>(std::max(n_cells, 0)), 0),
      kind_(kind) {
  if (n_cells < 0 || n_cells > kMaxCells)
    throw ConfigError("number of cells must be in 0.." +
                      std::to_string(kMaxCells) + ", got " +
                      std::to_string(n_cells));
  present_ = n_cells == kMaxCells ? ~VertexMask{0}
                                  : (VertexMask{1} << n_cells) - 1;
}

ContentionGraph ContentionGraph::from_edges(
    int n_cells, std::span<const std::pair<int, int>> edges, GraphKind kind) {
  ContentionGraph g(n_cells, kind);
  for (auto [i, j] : edges) g.add_edge(i, j);
  return g;
}

void ContentionGraph::check_id(int id) const {
  if (id < 1 || id > n_)
    throw ConfigError("cell id " + std::to_string(id) + " outside 1.." +
                      std::to_string(n_));
}

int ContentionGraph::num_vertices() const { return std::popcount(present_); }

bool ContentionGraph::has_vertex(int id) const {
  return id >= 1 && id <= n_ && (present_ & cell_bit(id));
}

void ContentionGraph::add_edge(int i, int j) {
  check_id(i);
  check_id(j);
  if (i == j)
    throw ConfigError("self-loop on cell " + std::to_string(i));
  if (!has_vertex(i) || !has_vertex(j))
    throw ConfigError("edge touches a removed vertex");
  adj_[i - 1] |= cell_bit(j);
  adj_[j - 1] |= cell_bit(i);
}

bool ContentionGraph::adjacent(int i, int j) const {
  check_id(i);
  check_id(j);
  return adj_[i - 1] & cell_bit(j);
}

int ContentionGraph::degree(int id) const {
  check_id(id);
  return std::popcount(adj_[id - 1]);
}

int ContentionGraph::max_degree() const {
  int d = 0;
  for (VertexMask a : adj_) d = std::max(d, std::popcount(a));
  return d;
}

std::vector<std::pair<int, int>> ContentionGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= n_; ++i) {
    VertexMask higher = adj_[i - 1] & ~((cell_bit(i) << 1) - 1);
    for (int j : mask_to_ids(higher)) out.emplace_back(i, j);
  }
  return out;
}

ContentionGraph ContentionGraph::induced(VertexMask keep) const {
  ContentionGraph g = *this;
  g.present_ = present_ & keep;
  for (int i = 1; i <= n_; ++i) {
    if (g.present_ & cell_bit(i))
      g.adj_[i - 1] &= g.present_;
    else
      g.adj_[i - 1] = 0;
  }
  return g;
}

ContentionGraph build_physical_graph(std::span<const CellSpec> cells,
                                     double r_cs) {
  if (!(r_cs > 0.0)) throw ConfigError("r_cs must be positive");
  const int n = static_cast<int>(cells.size());
  ContentionGraph g(n, GraphKind::physical);
  for (const CellSpec& c : cells) {
    if (c.id < 1 || c.id > n)
      throw ConfigError("cell ids must be contiguous 1..N");
    if (!c.position)
      throw ConfigError("geometry unavailable: cell " + std::to_string(c.id) +
                        " has no position; supply an explicit edge list");
  }
  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      const Point& p = *cells[a].position;
      const Point& q = *cells[b].position;
      if (std::hypot(p.x - q.x, p.y - q.y) <= r_cs)
        g.add_edge(cells[a].id, cells[b].id);
    }
  }
  return g;
}

ContentionGraph logical_graph(const ContentionGraph& physical,
                              const ChannelAssignment& assignment) {
  const int n = physical.n_cells();
  if (static_cast<int>(assignment.channels.size()) != n)
    throw ConfigError("assignment has " +
                      std::to_string(assignment.channels.size()) +
                      " entries for " + std::to_string(n) + " cells");
  ContentionGraph g(n, GraphKind::logical);
  g = g.induced(physical.vertices());
  for (auto [i, j] : physical.edges())
    if (assignment.channels[i - 1] == assignment.channels[j - 1])
      g.add_edge(i, j);
  return g;
}

ContentionGraph closed_neighborhood_subgraph(const ContentionGraph& g,
                                             int id) {
  if (!g.has_vertex(id))
    throw ConfigError("cell id " + std::to_string(id) + " not in graph");
  return g.induced(~(g.neighbors(id) | cell_bit(id)));
}

std::vector<int> maximal_independent_set(const ContentionGraph& g,
                                         std::span<const int> order) {
  VertexMask taken = 0;
  VertexMask excluded = 0;
  for (int id : order) {
    if (!g.has_vertex(id)) continue;
    const VertexMask b = cell_bit(id);
    if ((taken | excluded) & b) continue;
    taken |= b;
    excluded |= g.neighbors(id);
  }
  return mask_to_ids(taken);
}

}  // namespace mcwlan
