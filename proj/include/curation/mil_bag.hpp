#pragma once

#include <functional>

#include "curation/solvers.hpp"
#include "curation/types.hpp"

namespace curation {

struct WeightParams {
  double xi_alpha = 1.0;  // scaling, must be positive
  double xi_beta = 0.0;   // offset
  double d_clamp = 1e-6;  // lower clamp on center distances
};

struct BagModel {
  Vec omega;
  int k = 1;
  WeightParams weights;
};

// 0/1 indicator over a bag's instances with exactly k ones.
using LatentAssignment = std::vector<int>;

using InstanceScorer = std::function<double(const Vec&)>;

// Logistic down-weighting of instances by distance from the bag center.
Vec instance_weights(const Bag& bag, const WeightParams& params);

LatentAssignment topk_by_score(const InstanceScorer& f, const Bag& bag, int k);
Vec compound_topk_feature(const InstanceScorer& f, const Bag& bag, int k);

// argmax_h (omega'Xh)/(xi'h) subject to sum h = k.
LatentAssignment best_assignment(const Vec& omega, const Bag& bag, const Vec& xi, int k,
                                 double tol);

// phi(X, h) = Xh / (xi'h).
Vec weighted_feature(const Bag& bag, const Vec& xi, const LatentAssignment& h);

// f_omega(X) = max_h omega' phi(X, h); positive sign selects the bag.
double bag_score(const BagModel& model, const Bag& bag);

struct BagTrainTrace {
  std::vector<double> outer_objectives;  // latent SVM objective per CCCP iterate
  int iterations = 0;
  bool degenerate = false;
};

struct BagTrainOptions {
  double C = 1.0;
  int k = 1;
  WeightParams weights;
  double cccp_tol = 1e-6;
  double dinkelbach_tol = 1e-12;
  int max_outer = 50;
  int subgradient_iters = 300;
};

BagModel train_bag_model(const std::vector<Bag>& positive_bags,
                         const std::vector<Bag>& negative_bags, const BagTrainOptions& options,
                         BagTrainTrace* trace = nullptr);

// Mean held-out bag-classification accuracy over the labeled folds, maximized
// over the grid; ties resolve to the first grid point.
WeightParams calibrate_weight_params(
    const std::vector<std::pair<std::vector<Bag>, std::vector<Bag>>>& labeled_bag_sets,
    const std::vector<WeightParams>& grid, const BagTrainOptions& options,
    std::vector<std::string>* diagnostics = nullptr);

struct BagFilterResult {
  std::vector<std::string> retained_ids;
  std::vector<std::pair<std::string, double>> scores;  // every bag, input order
};

BagFilterResult filter_bags(const BagModel& model, const std::vector<Bag>& bags);

}  // namespace curation
