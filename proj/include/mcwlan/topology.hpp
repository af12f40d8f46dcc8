#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mcwlan {

// Cells are numbered 1..N everywhere in the public API. Internally a set of
// cells is a 64-bit mask with cell i at bit i-1, which caps N at 64.
using VertexMask = std::uint64_t;
inline constexpr int kMaxCells = 64;

constexpr VertexMask cell_bit(int id) { return VertexMask{1} << (id - 1); }
std::vector<int> mask_to_ids(VertexMask mask);
VertexMask ids_to_mask(std::span<const int> ids);

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct CellSpec {
  int id = 0;
  std::optional<Point> position;
  int n_nodes = 1;
  bool operator==(const CellSpec&) const = default;
};

struct ChannelAssignment {
  std::vector<int> channels;  // channels[i-1] is the channel of cell i, 1..M
  int M = 1;
  bool operator==(const ChannelAssignment&) const = default;
};

enum class GraphKind { physical, logical };

class ContentionGraph {
 public:
  ContentionGraph() = default;
  explicit ContentionGraph(int n_cells, GraphKind kind = GraphKind::physical);

  static ContentionGraph from_edges(int n_cells,
                                    std::span<const std::pair<int, int>> edges,
                                    GraphKind kind = GraphKind::physical);

  int n_cells() const { return n_; }
  GraphKind kind() const { return kind_; }
  // Cells still present. Subgraphs keep the id space and clear bits here.
  VertexMask vertices() const { return present_; }
  int num_vertices() const;
  bool has_vertex(int id) const;

  void add_edge(int i, int j);
  bool adjacent(int i, int j) const;
  VertexMask neighbors(int id) const { return adj_[id - 1]; }
  const std::vector<VertexMask>& adjacency() const { return adj_; }
  int degree(int id) const;
  int max_degree() const;
  std::vector<std::pair<int, int>> edges() const;  // sorted, i < j

  ContentionGraph induced(VertexMask keep) const;

  bool operator==(const ContentionGraph&) const = default;

 private:
  void check_id(int id) const;

  int n_ = 0;
  VertexMask present_ = 0;
  std::vector<VertexMask> adj_;
  GraphKind kind_ = GraphKind::physical;
};

// Edge iff AP distance <= r_cs. Throws ConfigError if any cell lacks a
// position.
ContentionGraph build_physical_graph(std::span<const CellSpec> cells,
                                     double r_cs);

// Keeps an edge only when both ends share a channel.
ContentionGraph logical_graph(const ContentionGraph& physical,
                              const ChannelAssignment& assignment);

// G minus i and its neighbours; ids are preserved.
ContentionGraph closed_neighborhood_subgraph(const ContentionGraph& g, int id);

// Greedy by priority: take each vertex in order unless a taken one is
// adjacent. Vertices absent from g or from order are skipped.
std::vector<int> maximal_independent_set(const ContentionGraph& g,
                                         std::span<const int> order);

struct EnumerationBudget {
  int max_vertices = 25;
  std::size_t max_states = 10'000'000;
};

// The CTMC state space: every independent set, with the blocked and
// in-backoff parts of the partition, in canonical order (by size, then
// lexicographically by sorted ids).
struct IndependentSetFamily {
  int n_cells = 0;
  VertexMask universe = 0;
  std::vector<VertexMask> adjacency;  // copy of the graph's, indexed id-1
  std::vector<VertexMask> states;
  std::vector<VertexMask> blocked;
  std::vector<VertexMask> backoff;
  std::vector<VertexMask> mis_list;
  int alpha = 0;
  std::uint64_t eta = 0;
  std::vector<std::uint64_t> eta_i;  // indexed id-1
};

IndependentSetFamily enumerate_state_space(const ContentionGraph& g,
                                           const EnumerationBudget& budget = {});

// Counting-only variant: alpha, eta and eta_i without storing states.
struct MisCounts {
  int alpha = 0;
  std::uint64_t eta = 1;
  std::vector<std::uint64_t> eta_i;  // indexed id-1
};
MisCounts count_maximum_independent_sets(const ContentionGraph& g);

// Comparator used for the canonical state order.
bool canonical_less(VertexMask a, VertexMask b);

}  // namespace mcwlan
