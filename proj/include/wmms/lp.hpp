#pragma once

#include <cstddef>
#include <vector>

#include "wmms/instance.hpp"

namespace wmms {

// Fractional assignment f[i][j] in [0,1]: how much of item j agent i holds.
// Feasible means: column sums <= 1 and every row meets its proportional
// value floor sum_j V_i(b_j) f[i][j] >= V_i(M) * e_i. `basic` asserts the
// solution is a polytope vertex (at most n+m non-zeros, pseudoforest support).
struct FractionalAssignment {
  std::size_t agent_count = 0;
  std::size_t item_count = 0;
  std::vector<std::vector<Rat>> weights;
  bool basic = false;

  std::size_t nonzero_count() const;
};

enum class ComponentKind { tree, tree_plus_edge };

// Bipartite support graph of a fractional assignment: one edge per positive
// weight, grouped into connected components.
struct SupportGraph {
  struct Edge {
    std::size_t agent;
    std::size_t item;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> components;  // edge indices
  std::vector<ComponentKind> kinds;

  bool pseudoforest() const { return true; }  // construction rejects violations
};

// Finds a basic feasible solution of the proportional-floor relaxation:
//
//   sum_j V_i(b_j) f_{i,j} >= V_i(M) e_i   for every agent
//   sum_i f_{i,j}          <= 1            for every item
//   f >= 0
//
// starting from the always-feasible proportional point f_{i,j} = e_i and
// driving it to a vertex by exact-rational cycle and path cancellation on the
// support graph. Requires V_i(M) > 0 for all agents (ValidationError else).
FractionalAssignment build_and_solve_lp(const Instance& instance);

// Throws ValidationError when the assignment is not flagged basic or a
// component is denser than a pseudoforest allows.
SupportGraph build_support_graph(const FractionalAssignment& assignment);

// Rounds a basic feasible assignment to an integral allocation in which every
// agent loses at most one of their fractional items, so each agent i receives
// at least V_i(M) * e_i - max_j V_i({b_j}). Items with no fractional holder
// are left out (the result may be incomplete).
Allocation round_assignment(const Instance& instance,
                            const FractionalAssignment& assignment);

// Per-agent certificate emitted next to rounded allocations.
struct RoundingCertificate {
  Rat proportional_share;  // V_i(M) * e_i
  Rat max_item;            // max_j V_i({b_j})
  Rat received;
};

std::vector<RoundingCertificate> rounding_certificates(const Instance& instance,
                                                       const Allocation& allocation);

}  // namespace wmms
