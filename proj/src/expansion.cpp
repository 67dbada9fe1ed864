#include "curation/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace curation {

std::string PageCounts::pair_key(const std::string& a, const std::string& b) {
  return a <= b ? a + "|" + b : b + "|" + a;
}

std::int64_t PageCounts::single_count(const std::string& term) const {
  auto it = single.find(term);
  return it == single.end() ? 0 : it->second;
}

std::int64_t PageCounts::pair_count(const std::string& a, const std::string& b) const {
  auto it = pair.find(pair_key(a, b));
  return it == pair.end() ? 0 : it->second;
}

double ngd(const std::string& x, const std::string& y, const PageCounts& counts) {
  const double fx = static_cast<double>(counts.single_count(x));
  const double fy = static_cast<double>(counts.single_count(y));
  const double fxy = static_cast<double>(counts.pair_count(x, y));
  if (fx <= 0.0) throw InputError("ngd: undefined distance, zero count for term \"" + x + "\"");
  if (fy <= 0.0) throw InputError("ngd: undefined distance, zero count for term \"" + y + "\"");
  if (fxy <= 0.0)
    throw InputError("ngd: undefined distance, zero count for pair \"" + x + "\",\"" + y + "\"");
  const double log_n = std::log(static_cast<double>(counts.total));
  const double lo = std::min(std::log(fx), std::log(fy));
  const double hi = std::max(std::log(fx), std::log(fy));
  if (log_n <= lo) throw InputError("ngd: degenerate denominator, total N <= min single count");
  return (hi - std::log(fxy)) / (log_n - lo);
}

std::string to_string(ExpansionStatus status) {
  switch (status) {
    case ExpansionStatus::pending: return "pending";
    case ExpansionStatus::salient: return "salient";
    case ExpansionStatus::non_salient: return "non_salient";
    case ExpansionStatus::relevant: return "relevant";
    case ExpansionStatus::irrelevant: return "irrelevant";
    case ExpansionStatus::undefined_distance: return "undefined_distance";
  }
  return "unknown";
}

Vec compound_visual_feature(const std::vector<Vec>& vectors, int k) {
  if (k < 1) throw InputError("compound_visual_feature: k must be >= 1");
  if (k > static_cast<int>(vectors.size()))
    throw InputError("compound_visual_feature: insufficient images (" +
                     std::to_string(vectors.size()) + " < k=" + std::to_string(k) + ")");
  Vec mean = vectors[0];
  for (int i = 1; i < k; ++i) mean += vectors[i];
  return mean / static_cast<double>(k);
}

double visual_distance(const ExpansionCandidate& candidate, const ExpansionCandidate& target,
                       int k) {
  Vec a = compound_visual_feature(candidate.images, k);
  Vec b = compound_visual_feature(target.images, k);
  return (a - b).norm();
}

double salience_score(const ExpansionCandidate& candidate, const std::vector<Vec>& negatives,
                      const SalienceSplit& split, double C, std::uint64_t seed) {
  if (split.train_pos <= 0 || split.val_pos <= 0 || split.train_neg <= 0 || split.val_neg <= 0)
    throw InputError("salience_score: empty split partition");
  if (split.train_pos + split.val_pos > static_cast<int>(candidate.images.size()))
    throw InputError("salience_score: split exceeds available positive images for \"" +
                     candidate.text + "\"");
  if (split.train_neg + split.val_neg > static_cast<int>(negatives.size()))
    throw InputError("salience_score: split exceeds available negative images");

  std::mt19937_64 rng(seed);
  auto pick = [&rng](std::size_t n) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    return idx;
  };
  std::vector<int> pos_idx = pick(candidate.images.size());
  std::vector<int> neg_idx = pick(negatives.size());

  std::vector<Vec> train_pos, val_pos, train_neg, val_neg;
  for (int i = 0; i < split.train_pos; ++i) train_pos.push_back(candidate.images[pos_idx[i]]);
  for (int i = 0; i < split.val_pos; ++i)
    val_pos.push_back(candidate.images[pos_idx[split.train_pos + i]]);
  for (int i = 0; i < split.train_neg; ++i) train_neg.push_back(negatives[neg_idx[i]]);
  for (int i = 0; i < split.val_neg; ++i)
    val_neg.push_back(negatives[neg_idx[split.train_neg + i]]);

  LinearSvmModel model = train_linear_svm(train_pos, train_neg, C, 1e-8);
  int correct = 0;
  for (const auto& x : val_pos)
    if (model.decision(x) > 0.0) ++correct;
  for (const auto& x : val_neg)
    if (model.decision(x) <= 0.0) ++correct;
  return static_cast<double>(correct) / static_cast<double>(val_pos.size() + val_neg.size());
}

RelevanceModel train_relevance_model(const std::vector<std::pair<double, double>>& positive,
                                     const std::vector<std::pair<double, double>>& negative,
                                     double C) {
  if (positive.empty() || negative.empty())
    throw InputError("train_relevance_model: both classes required");
  auto to_vec = [](const std::vector<std::pair<double, double>>& pts) {
    std::vector<Vec> out;
    out.reserve(pts.size());
    for (const auto& [d, e] : pts) {
      Vec v(2);
      v << d, e;
      out.push_back(v);
    }
    return out;
  };
  std::vector<Vec> pos = to_vec(positive), neg = to_vec(negative);
  bool all_same = true;
  const Vec& first = pos.front();
  for (const auto& v : pos)
    if ((v - first).lpNorm<Eigen::Infinity>() != 0.0) all_same = false;
  for (const auto& v : neg)
    if ((v - first).lpNorm<Eigen::Infinity>() != 0.0) all_same = false;
  if (all_same) throw InputError("train_relevance_model: degenerate data, all points identical");

  LinearSvmModel svm = train_linear_svm(pos, neg, C, 1e-10);
  RelevanceModel model;
  model.w = svm.w;
  model.b = svm.b;
  return model;
}

FilterResult filter_expansions(std::vector<ExpansionCandidate> candidates,
                               const ExpansionCandidate& target, const PageCounts& counts,
                               const RelevanceModel& model, const std::vector<Vec>& negatives,
                               const CurationConfig& config) {
  FilterResult result;
  std::uint64_t candidate_seed = config.seed;
  for (auto& cand : candidates) {
    ++candidate_seed;
    try {
      if (!cand.salience.has_value()) {
        // 75/25 of the candidate's images, up to 25/25 of the negative pool.
        SalienceSplit split;
        int n_img = static_cast<int>(cand.images.size());
        split.train_pos = std::max(1, (3 * std::min(n_img, config.top_n)) / 4);
        split.val_pos = std::min(n_img, config.top_n) - split.train_pos;
        int n_neg = static_cast<int>(negatives.size());
        split.train_neg = std::min(25, n_neg / 2);
        split.val_neg = std::min(25, n_neg - split.train_neg);
        cand.salience = salience_score(cand, negatives, split, config.C_instance, candidate_seed);
      }
      if (*cand.salience < config.salience_threshold) {
        cand.status = ExpansionStatus::non_salient;
        continue;
      }
      cand.status = ExpansionStatus::salient;

      cand.semantic_distance = ngd(cand.text, target.text, counts);
      int k = std::min<int>({10, static_cast<int>(cand.images.size()),
                             static_cast<int>(target.images.size())});
      cand.visual_distance = visual_distance(cand, target, k);
      // Ties at exactly zero resolve toward relevance.
      double decision = model.decision(*cand.semantic_distance, *cand.visual_distance);
      cand.status = decision >= 0.0 ? ExpansionStatus::relevant : ExpansionStatus::irrelevant;
    } catch (const InputError& err) {
      cand.status = ExpansionStatus::undefined_distance;
      result.diagnostics.push_back("expansion \"" + cand.text + "\": " + err.what());
    }
  }
  for (const auto& cand : candidates)
    if (cand.status == ExpansionStatus::relevant) result.relevant.push_back(cand);
  result.all = std::move(candidates);
  return result;
}

}  // namespace curation
