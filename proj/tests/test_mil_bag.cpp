#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "curation/mil_bag.hpp"

using namespace curation;

namespace {

Bag make_bag(const std::string& id, BagLabel label, const std::vector<Vec>& feats) {
  Bag b;
  b.id = id;
  b.label = label;
  for (std::size_t i = 0; i < feats.size(); ++i) {
    Instance inst;
    inst.id = id + "_" + std::to_string(i);
    inst.bag_id = id;
    inst.features = feats[i];
    inst.rank = static_cast<int>(i);
    b.instances.push_back(inst);
  }
  return b;
}

Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

Bag random_bag(std::mt19937_64& rng, const std::string& id, BagLabel label, int size, int dim,
               double shift) {
  std::normal_distribution<double> dist;
  std::vector<Vec> feats;
  for (int i = 0; i < size; ++i) {
    Vec x(dim);
    for (int d = 0; d < dim; ++d) x(d) = dist(rng);
    x(0) += shift;
    feats.push_back(x);
  }
  return make_bag(id, label, feats);
}

// Exhaustive max over all cardinality-k assignments of (omega'Xh)/(xi'h).
double brute_force_bag_score(const Vec& omega, const Bag& bag, const Vec& xi, int k) {
  const int n = bag.size();
  double best = -std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        num += omega.dot(bag.instances[i].features);
        den += xi(i);
      }
    best = std::max(best, num / den);
  }
  return best;
}

}  // namespace

TEST_CASE("instance weights follow the logistic distance profile") {
  WeightParams params;  // xi_alpha = 1, xi_beta = 0

  SUBCASE("unit distance from the center gives weight one half") {
    Bag bag = make_bag("b", BagLabel::positive, {v2(0, 0), v2(2, 0)});
    Vec xi = instance_weights(bag, params);
    CHECK(xi(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(xi(1) == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("the offset shifts the logistic") {
    Bag bag = make_bag("b", BagLabel::positive, {v2(0, 0), v2(2, 0)});
    params.xi_beta = std::log(3.0);
    Vec xi = instance_weights(bag, params);
    CHECK(xi(0) == doctest::Approx(0.25).epsilon(1e-12));
  }

  SUBCASE("coincident instances are clamped, not singular") {
    Bag bag = make_bag("b", BagLabel::positive, {v2(1, 1), v2(1, 1)});
    Vec xi = instance_weights(bag, params);
    CHECK(xi(0) == doctest::Approx(1.0 / (1.0 + params.d_clamp)).epsilon(1e-12));
  }

  SUBCASE("weights decrease with distance from the bag center") {
    Bag bag = make_bag("b", BagLabel::positive, {v2(0, 0), v2(1, 0), v2(5, 0)});
    Vec xi = instance_weights(bag, params);  // center (2,0): distances 2, 1, 3
    CHECK(xi(1) > xi(0));
    CHECK(xi(0) > xi(2));
  }

  SUBCASE("input validation") {
    Bag empty;
    empty.id = "empty";
    CHECK_THROWS_AS(instance_weights(empty, params), InputError);
    Bag bag = make_bag("b", BagLabel::positive, {v2(0, 0)});
    WeightParams bad = params;
    bad.xi_alpha = 0.0;
    CHECK_THROWS_AS(instance_weights(bag, bad), InputError);
    bad = params;
    bad.d_clamp = 0.0;
    CHECK_THROWS_AS(instance_weights(bag, bad), InputError);
  }
}

TEST_CASE("top-k selection by score and the compound feature") {
  Bag bag = make_bag("b", BagLabel::positive, {v2(3, 0), v2(1, 0), v2(2, 0)});
  InstanceScorer first = [](const Vec& x) { return x(0); };

  SUBCASE("picks the k best-scoring instances") {
    LatentAssignment h = topk_by_score(first, bag, 2);
    CHECK(h == LatentAssignment{1, 0, 1});
    Vec phi = compound_topk_feature(first, bag, 2);
    CHECK(phi(0) == doctest::Approx(2.5));
    CHECK(phi(1) == doctest::Approx(0.0));
  }

  SUBCASE("k equal to the bag size averages every instance") {
    Vec phi = compound_topk_feature(first, bag, 3);
    CHECK(phi(0) == doctest::Approx(2.0));
  }

  SUBCASE("ties resolve to the lowest index") {
    Bag tied = make_bag("t", BagLabel::positive, {v2(1, 0), v2(1, 1), v2(1, 2)});
    LatentAssignment h = topk_by_score(first, tied, 2);
    CHECK(h == LatentAssignment{1, 1, 0});
  }

  SUBCASE("cardinality out of range names the bag") {
    CHECK_THROWS_WITH_AS(topk_by_score(first, bag, 4),
                         "topk_by_score: cardinality k out of range for bag b", InputError);
    CHECK_THROWS_AS(topk_by_score(first, bag, 0), InputError);
  }
}

TEST_CASE("best assignment matches exhaustive enumeration") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist;
  std::uniform_real_distribution<double> unif(0.2, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Bag bag = random_bag(rng, "r", BagLabel::positive, 6, 3, 0.0);
    Vec omega(3);
    omega << dist(rng), dist(rng), dist(rng);
    Vec xi(6);
    for (int i = 0; i < 6; ++i) xi(i) = unif(rng);
    for (int k : {1, 2, 3}) {
      LatentAssignment h = best_assignment(omega, bag, xi, k, 1e-12);
      double num = 0.0, den = 0.0;
      for (int i = 0; i < 6; ++i)
        if (h[i]) {
          num += omega.dot(bag.instances[i].features);
          den += xi(i);
        }
      CHECK(num / den == doctest::Approx(brute_force_bag_score(omega, bag, xi, k)).epsilon(1e-10));
    }
  }
}

TEST_CASE("best assignment is invariant to positive scaling of omega") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> dist;
  Bag bag = random_bag(rng, "r", BagLabel::positive, 5, 2, 0.0);
  Vec omega(2);
  omega << dist(rng), dist(rng);
  Vec xi = Vec::Constant(5, 0.5);
  CHECK(best_assignment(omega, bag, xi, 2, 1e-12) ==
        best_assignment(Vec(3.0 * omega), bag, xi, 2, 1e-12));
}

TEST_CASE("weighted feature divides the selected sum by the selected weights") {
  Bag bag = make_bag("b", BagLabel::positive, {v2(2, 0), v2(0, 2), v2(9, 9)});
  Vec xi(3);
  xi << 0.5, 0.25, 0.125;

  SUBCASE("single selected instance") {
    Vec phi = weighted_feature(bag, xi, {0, 1, 0});
    CHECK(phi(0) == doctest::Approx(0.0));
    CHECK(phi(1) == doctest::Approx(8.0));
  }

  SUBCASE("pair of selected instances") {
    Vec phi = weighted_feature(bag, xi, {1, 1, 0});
    CHECK(phi(0) == doctest::Approx(2.0 / 0.75));
    CHECK(phi(1) == doctest::Approx(2.0 / 0.75));
  }

  SUBCASE("halving the weights doubles the feature") {
    Vec phi = weighted_feature(bag, xi, {1, 1, 0});
    Vec half = weighted_feature(bag, Vec(0.5 * xi), {1, 1, 0});
    CHECK((half - 2.0 * phi).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("dimension mismatch names the bag") {
    CHECK_THROWS_WITH_AS(weighted_feature(bag, xi, {1, 0}),
                         "weighted_feature: dimension mismatch for bag b", InputError);
  }
}

TEST_CASE("bag score equals the exhaustive maximum over assignments") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 30; ++trial) {
    BagModel model;
    model.k = 1 + static_cast<int>(trial % 3);
    Vec omega(3);
    omega << dist(rng), dist(rng), dist(rng);
    model.omega = omega;
    Bag bag = random_bag(rng, "r", BagLabel::positive, 6, 3, 0.5);
    Vec xi = instance_weights(bag, model.weights);
    CHECK(bag_score(model, bag) ==
          doctest::Approx(brute_force_bag_score(omega, bag, xi, model.k)).epsilon(1e-10));
  }
}

TEST_CASE("zero omega scores every bag at zero") {
  BagModel model;
  model.omega = Vec::Zero(2);
  model.k = 2;
  Bag bag = make_bag("b", BagLabel::positive, {v2(1, 2), v2(3, 4), v2(5, 6)});
  CHECK(bag_score(model, bag) == doctest::Approx(0.0));
}

TEST_CASE("near-uniform weights reduce bag scoring to the compound top-k feature") {
  // With the logistic offset pushed far negative every weight is 1 up to
  // rounding, so max_h omega'Xh/(xi'h) coincides with omega averaged over the
  // k highest-scoring instances.
  std::mt19937_64 rng(17);
  std::normal_distribution<double> dist;
  BagModel model;
  model.k = 3;
  model.weights.xi_beta = -40.0;
  for (int trial = 0; trial < 100; ++trial) {
    Vec omega(4);
    for (int d = 0; d < 4; ++d) omega(d) = dist(rng);
    model.omega = omega;
    Bag bag = random_bag(rng, "r", BagLabel::positive, 8, 4, 0.0);
    InstanceScorer scorer = [&](const Vec& x) { return omega.dot(x); };
    double compound = omega.dot(compound_topk_feature(scorer, bag, model.k));
    CHECK(bag_score(model, bag) == doctest::Approx(compound).epsilon(1e-9));
  }
}

namespace {

// Positive bags carry a two-instance signal cluster plus background; negative
// bags sit on the opposite side of the origin.
void separable_bags(std::mt19937_64& rng, std::vector<Bag>& pos, std::vector<Bag>& neg) {
  std::normal_distribution<double> jitter(0.0, 0.1);
  for (int i = 0; i < 4; ++i) {
    pos.push_back(make_bag(
        "pos" + std::to_string(i), BagLabel::positive,
        {v2(4 + jitter(rng), jitter(rng)), v2(4 + jitter(rng), jitter(rng)),
         v2(jitter(rng), 1 + jitter(rng)), v2(jitter(rng), -1 + jitter(rng))}));
    neg.push_back(make_bag(
        "neg" + std::to_string(i), BagLabel::negative,
        {v2(-4 + jitter(rng), jitter(rng)), v2(-4 + jitter(rng), jitter(rng)),
         v2(-1 + jitter(rng), jitter(rng)), v2(-1 + jitter(rng), jitter(rng))}));
  }
}

}  // namespace

TEST_CASE("training separates signal bags from negatives") {
  std::mt19937_64 rng(19);
  std::vector<Bag> pos, neg;
  separable_bags(rng, pos, neg);
  BagTrainOptions options;
  options.k = 2;
  BagTrainTrace trace;
  BagModel model = train_bag_model(pos, neg, options, &trace);
  CHECK_FALSE(trace.degenerate);
  for (const auto& bag : pos) CHECK(bag_score(model, bag) > 0.0);
  for (const auto& bag : neg) CHECK(bag_score(model, bag) < 0.0);

  BagFilterResult result = filter_bags(model, neg);
  CHECK(result.retained_ids.empty());
  result = filter_bags(model, pos);
  CHECK(result.retained_ids.size() == pos.size());
}

TEST_CASE("outer objective is non-increasing across iterations") {
  std::mt19937_64 rng(23);
  for (int seed = 0; seed < 20; ++seed) {
    std::vector<Bag> pos, neg;
    for (int i = 0; i < 3; ++i) {
      pos.push_back(random_bag(rng, "p" + std::to_string(i), BagLabel::positive, 4, 2, 2.0));
      neg.push_back(random_bag(rng, "n" + std::to_string(i), BagLabel::negative, 4, 2, -2.0));
    }
    BagTrainOptions options;
    options.k = 2;
    BagTrainTrace trace;
    train_bag_model(pos, neg, options, &trace);
    REQUIRE(trace.outer_objectives.size() >= 2);
    for (std::size_t i = 1; i < trace.outer_objectives.size(); ++i)
      CHECK(trace.outer_objectives[i] <= trace.outer_objectives[i - 1] + 1e-9);
  }
}

TEST_CASE("coincident classes mark the model degenerate") {
  std::vector<Bag> pos = {make_bag("p", BagLabel::positive, {v2(1, 1), v2(-1, -1)})};
  std::vector<Bag> neg = {make_bag("n", BagLabel::negative, {v2(1, 1), v2(-1, -1)})};
  BagTrainOptions options;
  BagTrainTrace trace;
  train_bag_model(pos, neg, options, &trace);
  CHECK(trace.degenerate);
}

TEST_CASE("training input validation") {
  std::vector<Bag> pos = {make_bag("p", BagLabel::positive, {v2(1, 0)})};
  std::vector<Bag> neg = {make_bag("tiny", BagLabel::negative, {v2(-1, 0)})};
  BagTrainOptions options;
  CHECK_THROWS_AS(train_bag_model({}, neg, options), InputError);
  CHECK_THROWS_AS(train_bag_model(pos, {}, options), InputError);
  options.k = 2;
  CHECK_THROWS_WITH_AS(train_bag_model(pos, neg, options),
                       "train_bag_model: k=2 exceeds size of bag p", InputError);
}

TEST_CASE("weight calibration") {
  std::mt19937_64 rng(29);
  std::vector<Bag> pos_a, neg_a, pos_b, neg_b;
  separable_bags(rng, pos_a, neg_a);
  separable_bags(rng, pos_b, neg_b);
  std::vector<std::pair<std::vector<Bag>, std::vector<Bag>>> folds = {{pos_a, neg_a},
                                                                      {pos_b, neg_b}};
  BagTrainOptions options;
  options.k = 2;

  SUBCASE("a single grid point is returned as-is") {
    WeightParams only;
    only.xi_alpha = 2.5;
    WeightParams chosen = calibrate_weight_params(folds, {only}, options);
    CHECK(chosen.xi_alpha == 2.5);
  }

  SUBCASE("ties resolve to the first grid point") {
    WeightParams first, second;
    first.xi_beta = -40.0;  // both classify the separable folds perfectly
    second.xi_beta = 0.0;
    WeightParams chosen = calibrate_weight_params(folds, {first, second}, options);
    CHECK(chosen.xi_beta == -40.0);
  }

  SUBCASE("single-class folds are skipped with a diagnostic") {
    // Leaving out the complete fold leaves only positives to train on.
    std::vector<std::pair<std::vector<Bag>, std::vector<Bag>>> mixed = {{pos_a, neg_a},
                                                                        {pos_b, {}}};
    std::vector<std::string> diagnostics;
    calibrate_weight_params(mixed, {WeightParams{}}, options, &diagnostics);
    CHECK_FALSE(diagnostics.empty());
  }

  SUBCASE("an empty grid is rejected") {
    CHECK_THROWS_AS(calibrate_weight_params(folds, {}, options), InputError);
  }
}

TEST_CASE("filter scores preserve input order and strict positivity decides retention") {
  BagModel model;
  model.omega = v2(1, 0);
  model.k = 1;
  std::vector<Bag> bags = {make_bag("keep", BagLabel::positive, {v2(2, 0)}),
                           make_bag("drop", BagLabel::positive, {v2(-2, 0)}),
                           make_bag("boundary", BagLabel::positive, {v2(0, 5)})};
  BagFilterResult result = filter_bags(model, bags);
  REQUIRE(result.scores.size() == 3);
  CHECK(result.scores[0].first == "keep");
  CHECK(result.scores[1].first == "drop");
  CHECK(result.scores[2].first == "boundary");
  CHECK(result.scores[0].second > 0.0);
  CHECK(result.scores[1].second < 0.0);
  CHECK(result.scores[2].second == doctest::Approx(0.0));
  CHECK(result.retained_ids == std::vector<std::string>{"keep"});
}
