#include "curation/types.hpp"

#include <cmath>
#include <set>

namespace curation {

int min_positive_count(double delta, int bag_size) {
  return static_cast<int>(std::ceil(delta * bag_size - 1e-12));
}

void CurationConfig::validate() const {
  if (!(delta > 0.0 && delta <= 1.0)) throw InputError("config: delta must be in (0,1]");
  if (k < 1) throw InputError("config: k must be >= 1");
  if (!(xi_alpha > 0.0)) throw InputError("config: xi_alpha must be positive");
  if (!(d_clamp > 0.0)) throw InputError("config: d_clamp must be positive");
  if (!(C_instance > 0.0) || !(C_bag > 0.0)) throw InputError("config: C must be positive");
  if (!(tolerances.mkl_tol > 0.0) || !(tolerances.cccp_tol > 0.0) ||
      !(tolerances.dinkelbach_tol > 0.0))
    throw InputError("config: tolerances must be positive");
}

ValidationReport validate_problem(const MilProblem& problem) {
  ValidationReport report;
  auto add = [&report](std::string msg) { report.issues.push_back(std::move(msg)); };

  if (problem.bags.empty()) {
    add("no bags");
    return report;
  }
  if (!(problem.delta > 0.0 && problem.delta <= 1.0)) add("delta outside (0,1]");
  if (!(problem.C > 0.0)) add("non-positive regularization C");

  int dim = problem.dimension();
  bool has_positive = false, has_negative = false;
  std::set<std::string> global_ids;
  for (const auto& bag : problem.bags) {
    if (bag.label == BagLabel::positive) has_positive = true;
    if (bag.label == BagLabel::negative) has_negative = true;
    if (bag.instances.empty()) {
      add("empty bag " + bag.id);
      continue;
    }
    std::set<std::string> local_ids;
    for (const auto& inst : bag.instances) {
      if (inst.bag_id != bag.id)
        add("instance " + inst.id + " carries bag_id " + inst.bag_id + " inside bag " + bag.id);
      if (!local_ids.insert(inst.id).second)
        add("duplicate instance id " + inst.id + " in bag " + bag.id);
      if (!global_ids.insert(inst.id).second)
        add("instance id " + inst.id + " reused across bags");
      if (static_cast<int>(inst.features.size()) != dim)
        add("dimension mismatch for instance " + inst.id + " (" +
            std::to_string(inst.features.size()) + " vs " + std::to_string(dim) + ")");
      if (!inst.features.allFinite()) add("non-finite feature in instance " + inst.id);
      if (inst.rank < 0) add("negative rank for instance " + inst.id);
    }
  }
  if (!has_positive) add("no positive bag");
  if (!has_negative) add("no negative bag");
  return report;
}

}  // namespace curation
