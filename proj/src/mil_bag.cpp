#include "curation/mil_bag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace curation {

namespace {

Vec bag_mean(const Bag& bag) {
  Vec mean = Vec::Zero(bag.instances.front().features.size());
  for (const auto& inst : bag.instances) mean += inst.features;
  return mean / static_cast<double>(bag.size());
}

}  // namespace

Vec instance_weights(const Bag& bag, const WeightParams& params) {
  if (bag.instances.empty()) throw InputError("instance_weights: empty bag " + bag.id);
  if (!(params.xi_alpha > 0.0)) throw InputError("instance_weights: xi_alpha must be positive");
  if (!(params.d_clamp > 0.0)) throw InputError("instance_weights: d_clamp must be positive");
  Vec center = bag_mean(bag);
  Vec xi(bag.size());
  for (int i = 0; i < bag.size(); ++i) {
    double d = std::max((bag.instances[i].features - center).norm(), params.d_clamp);
    xi(i) = 1.0 / (1.0 + std::exp(params.xi_alpha * std::log(d) + params.xi_beta));
  }
  return xi;
}

LatentAssignment topk_by_score(const InstanceScorer& f, const Bag& bag, int k) {
  if (k < 1 || k > bag.size())
    throw InputError("topk_by_score: cardinality k out of range for bag " + bag.id);
  Vec scores(bag.size());
  for (int i = 0; i < bag.size(); ++i) scores(i) = f(bag.instances[i].features);
  LatentAssignment h(bag.size(), 0);
  for (int i : topk_indices(scores, k)) h[i] = 1;
  return h;
}

Vec compound_topk_feature(const InstanceScorer& f, const Bag& bag, int k) {
  LatentAssignment h = topk_by_score(f, bag, k);
  Vec sum = Vec::Zero(bag.instances.front().features.size());
  for (int i = 0; i < bag.size(); ++i)
    if (h[i]) sum += bag.instances[i].features;
  return sum / static_cast<double>(k);
}

LatentAssignment best_assignment(const Vec& omega, const Bag& bag, const Vec& xi, int k,
                                 double tol) {
  if (k < 1 || k > bag.size())
    throw InputError("best_assignment: cardinality k out of range for bag " + bag.id);
  Vec c(bag.size());
  for (int i = 0; i < bag.size(); ++i) c(i) = omega.dot(bag.instances[i].features);
  return dinkelbach_topk(c, xi, k, tol).h;
}

Vec weighted_feature(const Bag& bag, const Vec& xi, const LatentAssignment& h) {
  if (static_cast<int>(h.size()) != bag.size() || xi.size() != bag.size())
    throw InputError("weighted_feature: dimension mismatch for bag " + bag.id);
  Vec sum = Vec::Zero(bag.instances.front().features.size());
  double denom = 0.0;
  for (int i = 0; i < bag.size(); ++i)
    if (h[i]) {
      sum += bag.instances[i].features;
      denom += xi(i);
    }
  return sum / denom;
}

double bag_score(const BagModel& model, const Bag& bag) {
  Vec xi = instance_weights(bag, model.weights);
  LatentAssignment h = best_assignment(model.omega, bag, xi, model.k, 1e-12);
  return model.omega.dot(weighted_feature(bag, xi, h));
}

namespace {

struct PreparedBag {
  const Bag* bag;
  Vec xi;
  bool positive;
};

double latent_score(const Vec& omega, const PreparedBag& pb, int k, double tol,
                    LatentAssignment* h_out = nullptr) {
  LatentAssignment h = best_assignment(omega, *pb.bag, pb.xi, k, tol);
  double score = omega.dot(weighted_feature(*pb.bag, pb.xi, h));
  if (h_out) *h_out = std::move(h);
  return score;
}

}  // namespace

BagModel train_bag_model(const std::vector<Bag>& positive_bags,
                         const std::vector<Bag>& negative_bags, const BagTrainOptions& options,
                         BagTrainTrace* trace) {
  if (positive_bags.empty() || negative_bags.empty())
    throw InputError("train_bag_model: both bag sets required");
  for (const auto* set : {&positive_bags, &negative_bags})
    for (const auto& bag : *set)
      if (options.k > bag.size())
        throw InputError("train_bag_model: k=" + std::to_string(options.k) +
                         " exceeds size of bag " + bag.id);

  std::vector<PreparedBag> bags;
  for (const auto& bag : positive_bags)
    bags.push_back({&bag, instance_weights(bag, options.weights), true});
  for (const auto& bag : negative_bags)
    bags.push_back({&bag, instance_weights(bag, options.weights), false});

  const double C = options.C;
  const int k = options.k;
  const double dtol = options.dinkelbach_tol;

  // Initialization: linear SVM on the h = 1 compound features (bag means).
  std::vector<Vec> pos_means, neg_means;
  for (const auto& bag : positive_bags) pos_means.push_back(bag_mean(bag));
  for (const auto& bag : negative_bags) neg_means.push_back(bag_mean(bag));
  LinearSvmModel init = train_linear_svm(pos_means, neg_means, C, 1e-8);
  Vec omega = init.w;

  auto latent_objective = [&](const Vec& w) {
    double obj = 0.5 * w.squaredNorm();
    for (const auto& pb : bags) {
      double f = latent_score(w, pb, k, dtol);
      obj += C * std::max(0.0, pb.positive ? 1.0 - f : 1.0 + f);
    }
    return obj;
  };

  BagTrainTrace local;
  BagTrainTrace& tr = trace ? *trace : local;
  tr.degenerate = init.degenerate;

  double F = latent_objective(omega);
  tr.outer_objectives.push_back(F);

  for (int outer = 0; outer < options.max_outer; ++outer) {
    tr.iterations = outer + 1;

    // Linearize the concave term: freeze h* for each positive bag.
    std::vector<Vec> phi_star(bags.size());
    for (std::size_t i = 0; i < bags.size(); ++i) {
      if (!bags[i].positive) continue;
      LatentAssignment h;
      latent_score(omega, bags[i], k, dtol, &h);
      phi_star[i] = weighted_feature(*bags[i].bag, bags[i].xi, h);
    }

    auto upper_bound = [&](const Vec& w) {
      double g = 0.5 * w.squaredNorm();
      for (std::size_t i = 0; i < bags.size(); ++i) {
        double f = latent_score(w, bags[i], k, dtol);
        if (bags[i].positive)
          g += C * (std::max(f, 1.0) - w.dot(phi_star[i]));
        else
          g += C * std::max(0.0, 1.0 + f);
      }
      return g;
    };
    auto upper_subgradient = [&](const Vec& w) {
      Vec g = w;
      for (std::size_t i = 0; i < bags.size(); ++i) {
        LatentAssignment h;
        double f = latent_score(w, bags[i], k, dtol, &h);
        Vec phi = weighted_feature(*bags[i].bag, bags[i].xi, h);
        if (bags[i].positive) {
          if (f >= 1.0) g += C * phi;
          g -= C * phi_star[i];
        } else if (1.0 + f > 0.0) {
          g += C * phi;
        }
      }
      return g;
    };

    // Subgradient descent with 1/sqrt(t) steps and best-iterate tracking,
    // started at the current model so the CCCP bound can only improve.
    Vec w = omega;
    Vec best_w = omega;
    double best_g = upper_bound(omega);
    Vec g0 = upper_subgradient(omega);
    double step0 = (1.0 + omega.norm()) / (1.0 + g0.norm());
    for (int t = 1; t <= options.subgradient_iters; ++t) {
      Vec sg = upper_subgradient(w);
      double sg_norm = sg.norm();
      if (sg_norm < 1e-14) break;
      w -= (step0 / std::sqrt(static_cast<double>(t))) * sg;
      double gw = upper_bound(w);
      if (gw < best_g) {
        best_g = gw;
        best_w = w;
      }
    }

    omega = best_w;
    double F_next = latent_objective(omega);
    tr.outer_objectives.push_back(F_next);
    double decrease = F - F_next;
    F = F_next;
    if (decrease <= options.cccp_tol) break;
  }

  BagModel model;
  model.omega = omega;
  model.k = k;
  model.weights = options.weights;
  return model;
}

WeightParams calibrate_weight_params(
    const std::vector<std::pair<std::vector<Bag>, std::vector<Bag>>>& labeled_bag_sets,
    const std::vector<WeightParams>& grid, const BagTrainOptions& options,
    std::vector<std::string>* diagnostics) {
  if (grid.empty()) throw InputError("calibrate_weight_params: empty grid");
  if (labeled_bag_sets.empty()) throw InputError("calibrate_weight_params: no labeled bag sets");

  auto note = [diagnostics](const std::string& msg) {
    if (diagnostics) diagnostics->push_back(msg);
  };

  double best_accuracy = -1.0;
  const WeightParams* best = nullptr;
  for (const auto& params : grid) {
    BagTrainOptions opts = options;
    opts.weights = params;

    double accuracy_sum = 0.0;
    int folds_used = 0;
    for (std::size_t fold = 0; fold < labeled_bag_sets.size(); ++fold) {
      // Leave-one-fold-out; a single fold trains and evaluates on itself.
      std::vector<Bag> train_pos, train_neg;
      if (labeled_bag_sets.size() == 1) {
        train_pos = labeled_bag_sets[0].first;
        train_neg = labeled_bag_sets[0].second;
      } else {
        for (std::size_t other = 0; other < labeled_bag_sets.size(); ++other) {
          if (other == fold) continue;
          const auto& [p, n] = labeled_bag_sets[other];
          train_pos.insert(train_pos.end(), p.begin(), p.end());
          train_neg.insert(train_neg.end(), n.begin(), n.end());
        }
      }
      const auto& [test_pos, test_neg] = labeled_bag_sets[fold];
      if (train_pos.empty() || train_neg.empty() || (test_pos.empty() && test_neg.empty())) {
        note("fold " + std::to_string(fold) + " skipped: single-class data");
        continue;
      }
      BagModel model = train_bag_model(train_pos, train_neg, opts);
      int correct = 0;
      for (const auto& bag : test_pos)
        if (bag_score(model, bag) > 0.0) ++correct;
      for (const auto& bag : test_neg)
        if (bag_score(model, bag) <= 0.0) ++correct;
      accuracy_sum +=
          static_cast<double>(correct) / static_cast<double>(test_pos.size() + test_neg.size());
      ++folds_used;
    }
    if (folds_used == 0) continue;
    double mean_accuracy = accuracy_sum / folds_used;
    if (mean_accuracy > best_accuracy) {
      best_accuracy = mean_accuracy;
      best = &params;
    }
  }
  if (!best) throw Error("calibrate_weight_params: all folds skipped, calibration failed");
  return *best;
}

BagFilterResult filter_bags(const BagModel& model, const std::vector<Bag>& bags) {
  BagFilterResult result;
  for (const auto& bag : bags) {
    double score = bag_score(model, bag);
    result.scores.emplace_back(bag.id, score);
    if (score > 0.0) result.retained_ids.push_back(bag.id);
  }
  return result;
}

}  // namespace curation
