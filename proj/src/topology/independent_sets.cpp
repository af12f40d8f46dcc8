#include <algorithm>
#include <bit>
#include <string>

#include "mcwlan/errors.hpp"
#include "mcwlan/topology.hpp"

namespace mcwlan {

bool canonical_less(VertexMask a, VertexMask b) {
  const int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  // Same size: the set holding the smallest id where they differ sorts first.
  const VertexMask d = a ^ b;
  return d != 0 && (a & (d & (~d + 1)));
}

namespace {

// Depth-first over independent sets. Each branch only considers vertices
// above the last one added and drops the neighbours of whatever it adds.
template <typename Visit>
void visit_independent_sets(const std::vector<VertexMask>& adj,
                            VertexMask candidates, Visit&& visit) {
  struct Frame {
    VertexMask set;
    VertexMask cand;
  };
  std::vector<Frame> stack;
  stack.push_back({0, candidates});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    visit(f.set, f.cand);
    // Push in reverse so the lowest vertex is explored first.
    for (VertexMask c = f.cand; c;) {
      const int v = 63 - std::countl_zero(c);
      const VertexMask b = VertexMask{1} << v;
      c &= ~b;
      const VertexMask above = v == 63 ? 0 : ~((b << 1) - 1);
      stack.push_back({f.set | b, f.cand & above & ~adj[v]});
    }
  }
}

}  // namespace

IndependentSetFamily enumerate_state_space(const ContentionGraph& g,
                                           const EnumerationBudget& budget) {
  const int nv = g.num_vertices();
  if (nv > budget.max_vertices)
    throw BudgetError("state-space enumeration over " + std::to_string(nv) +
                      " vertices exceeds the budget of " +
                      std::to_string(budget.max_vertices));

  IndependentSetFamily fam;
  fam.n_cells = g.n_cells();
  fam.universe = g.vertices();
  fam.adjacency = g.adjacency();
  fam.eta_i.assign(static_cast<std::size_t>(fam.n_cells), 0);

  visit_independent_sets(fam.adjacency, fam.universe,
                         [&](VertexMask s, VertexMask) {
                           if (fam.states.size() >= budget.max_states)
                             throw BudgetError(
                                 "state space exceeds " +
                                 std::to_string(budget.max_states) + " states");
                           fam.states.push_back(s);
                         });
  std::sort(fam.states.begin(), fam.states.end(), canonical_less);

  fam.blocked.reserve(fam.states.size());
  fam.backoff.reserve(fam.states.size());
  for (VertexMask s : fam.states) {
    VertexMask nb = 0;
    for (VertexMask m = s; m; m &= m - 1) nb |= fam.adjacency[std::countr_zero(m)];
    const VertexMask blocked = nb & ~s & fam.universe;
    fam.blocked.push_back(blocked);
    fam.backoff.push_back(fam.universe & ~s & ~blocked);
    fam.alpha = std::max(fam.alpha, std::popcount(s));
  }
  for (VertexMask s : fam.states) {
    if (std::popcount(s) != fam.alpha) continue;
    fam.mis_list.push_back(s);
    for (VertexMask m = s; m; m &= m - 1) ++fam.eta_i[std::countr_zero(m)];
  }
  fam.eta = fam.mis_list.size();
  return fam;
}

MisCounts count_maximum_independent_sets(const ContentionGraph& g) {
  MisCounts out;
  out.eta_i.assign(static_cast<std::size_t>(g.n_cells()), 0);
  out.eta = 0;
  const auto& adj = g.adjacency();
  // Only sets that cannot be extended can be maximum, so count at leaves.
  visit_independent_sets(adj, g.vertices(), [&](VertexMask s, VertexMask cand) {
    if (cand != 0) return;
    const int k = std::popcount(s);
    if (k < out.alpha) return;
    if (k > out.alpha) {
      out.alpha = k;
      out.eta = 0;
      std::fill(out.eta_i.begin(), out.eta_i.end(), 0);
    }
    ++out.eta;
    for (VertexMask m = s; m; m &= m - 1) ++out.eta_i[std::countr_zero(m)];
  });
  return out;
}

}  // namespace mcwlan
