#pragma once

#include "curation/kernel.hpp"
#include "curation/types.hpp"

namespace curation {

// Instance labeling in {-1,+1}^n, flattened in bag order.
using Labeling = std::vector<int>;

// Flattened view of a problem: instance order is bag order, instances in
// their stored order within each bag.
struct ProblemView {
  const MilProblem* problem = nullptr;
  std::vector<const Instance*> instances;
  struct BagRange {
    int begin = 0;
    int end = 0;  // exclusive
    bool positive = false;
    int min_positive = 0;  // m_I = ceil(delta |B_I|), positive bags only
  };
  std::vector<BagRange> bags;

  int n() const { return static_cast<int>(instances.size()); }
  int positive_instance_count() const;
};

ProblemView make_view(const MilProblem& problem);

// Hard cap on positive-bag instances for exhaustive labeling enumeration.
inline constexpr int kEnumerationGuard = 20;

Labeling initial_labeling(const ProblemView& view);
bool labeling_is_admissible(const ProblemView& view, const Labeling& y);

// All labelings satisfying the delta constraint, each exactly once, in
// lexicographic order with +1 before -1.
std::vector<Labeling> admissible_labelings(const ProblemView& view);

struct MklState {
  Vec u;      // convex weights over active labelings
  Vec alpha;  // simplex dual variables
  double objective = 0.0;
  double gap = 0.0;  // primal-dual gap at termination
  int iterations = 0;
};

// Solves min_u max_alpha -1/2 alpha'(sum_t u_t K~ o y^t y^t' + (1/C) I) alpha
// over the active labeling set, certified by the saddle gap <= tol.
MklState restricted_mkl(const GramMatrix& gram, const std::vector<Labeling>& active, double C,
                        double tol);
MklState restricted_mkl(const GramMatrix& gram, const std::vector<Labeling>& active, double C,
                        double tol, const Vec& u0, const Vec& alpha0);

// sum_ij alpha_i alpha_j y_i y_j G_ij for the given Gram entries.
double labeling_objective(const Vec& alpha, const GramMatrix& gram, const Labeling& y);

// Exhaustive argmax of the labeling objective over the admissible set;
// requires positive-bag instance count <= kEnumerationGuard.
Labeling most_violated_labeling(const Vec& alpha, const GramMatrix& gram, const ProblemView& view);

// Per-bag exact coordinate-ascent search for the same argmax, usable beyond
// the enumeration guard; returns a local maximizer reached from `start`.
Labeling most_violated_labeling_local(const Vec& alpha, const GramMatrix& gram,
                                      const ProblemView& view, const Labeling& start);

struct InstanceModel {
  struct SupportEntry {
    Vec features;
    double alpha = 0.0;
    double y_tilde = 0.0;
  };
  std::vector<SupportEntry> support;
  KernelSpec kernel;
};

struct InstanceTrainTrace {
  std::vector<double> objectives;       // restricted MKL objective per iteration
  std::vector<double> gaps;             // full-master gap per iteration
  std::vector<double> restricted_gaps;  // certificate of each restricted solve
  int iterations = 0;
  bool enumerated = true;  // false when the local violator search was used
};

InstanceModel train_instance_model(const MilProblem& problem, double tol, int max_iter,
                                   InstanceTrainTrace* trace = nullptr);

double score_instance(const InstanceModel& model, const Vec& x);

}  // namespace curation
