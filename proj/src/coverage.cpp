#include "curation/coverage.hpp"

#include <algorithm>
#include <limits>

namespace curation {

void ComponentGraph::validate() const {
  const int size = n();
  if (e.rows() != size || e.cols() != size)
    throw InputError("component graph: affinity matrix shape mismatch");
  for (int i = 0; i < size; ++i) {
    if (d(i) < 0.0) throw InputError("component graph: negative node score at " + std::to_string(i));
    if (e(i, i) != 0.0) throw InputError("component graph: nonzero diagonal at " + std::to_string(i));
    for (int j = 0; j < size; ++j)
      if (e(i, j) < 0.0 || e(i, j) > 1.0)
        throw InputError("component graph: affinity outside [0,1] at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
  }
}

double coverage_objective(const std::vector<int>& subset, const ComponentGraph& graph) {
  const int n = graph.n();
  std::vector<char> in_set(n, 0);
  for (int v : subset) {
    if (v < 0 || v >= n) throw InputError("coverage_objective: node index out of range");
    in_set[v] = 1;
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double theta;
    if (in_set[i]) {
      theta = 1.0;
    } else {
      double miss = 1.0;
      for (int j : subset) miss *= 1.0 - graph.e(i, j);
      theta = 1.0 - miss;
    }
    total += graph.d(i) * theta;
  }
  return total;
}

SelectionResult greedy_select(const ComponentGraph& graph, int budget) {
  graph.validate();
  if (budget < 1 || budget > graph.n()) throw InputError("greedy_select: budget out of range");
  SelectionResult result;
  double current = 0.0;
  for (int step = 0; step < budget; ++step) {
    int best_node = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int v = 0; v < graph.n(); ++v) {
      if (std::find(result.subset.begin(), result.subset.end(), v) != result.subset.end())
        continue;
      std::vector<int> trial = result.subset;
      trial.push_back(v);
      double value = coverage_objective(trial, graph);
      if (value > best_value) {
        best_value = value;
        best_node = v;
      }
    }
    result.subset.push_back(best_node);
    current = best_value;
  }
  std::sort(result.subset.begin(), result.subset.end());
  result.objective = current;
  return result;
}

SelectionResult exact_select(const ComponentGraph& graph, int budget) {
  graph.validate();
  const int n = graph.n();
  if (n > 20) throw InputError("exact_select: size guard exceeded (n > 20)");
  if (budget < 1 || budget > n) throw InputError("exact_select: budget out of range");

  SelectionResult best;
  best.objective = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) > budget) continue;
    std::vector<int> subset;
    for (int v = 0; v < n; ++v)
      if (mask & (1u << v)) subset.push_back(v);
    double value = coverage_objective(subset, graph);
    if (value > best.objective ||
        (value == best.objective && subset < best.subset)) {
      best.objective = value;
      best.subset = subset;
    }
  }
  return best;
}

}  // namespace curation
