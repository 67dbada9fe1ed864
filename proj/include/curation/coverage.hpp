#pragma once

#include "curation/types.hpp"

namespace curation {

// Node scores d_i with directed pairwise affinities e_ij in [0,1].
struct ComponentGraph {
  Vec d;
  Mat e;

  int n() const { return static_cast<int>(d.size()); }
  void validate() const;
};

// Soft-coverage objective sum_i d_i * theta(i, S); empty S scores 0.
double coverage_objective(const std::vector<int>& subset, const ComponentGraph& graph);

struct SelectionResult {
  std::vector<int> subset;  // sorted node indices
  double objective = 0.0;
};

// Greedy marginal-gain maximization under a cardinality budget.
SelectionResult greedy_select(const ComponentGraph& graph, int budget);

// Exhaustive argmax over subsets of size <= budget; test oracle, n <= 20.
SelectionResult exact_select(const ComponentGraph& graph, int budget);

}  // namespace curation
