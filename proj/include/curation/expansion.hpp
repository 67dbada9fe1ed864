#pragma once

#include <cstdint>
#include <map>

#include "curation/solvers.hpp"
#include "curation/types.hpp"

namespace curation {

// Offline page-count fixture backing the semantic distance. Pair keys are
// stored with lexicographically ordered terms.
struct PageCounts {
  std::map<std::string, std::int64_t> single;
  std::map<std::string, std::int64_t> pair;
  std::int64_t total = 0;

  static std::string pair_key(const std::string& a, const std::string& b);
  std::int64_t single_count(const std::string& term) const;
  std::int64_t pair_count(const std::string& a, const std::string& b) const;
};

// Normalized distance from co-occurrence counts; base-free by construction.
double ngd(const std::string& x, const std::string& y, const PageCounts& counts);

enum class ExpansionStatus { pending, salient, non_salient, relevant, irrelevant, undefined_distance };

std::string to_string(ExpansionStatus status);

struct ExpansionCandidate {
  std::string text;
  std::vector<Vec> images;  // ordered by source rank
  std::optional<double> salience;
  std::optional<double> semantic_distance;
  std::optional<double> visual_distance;
  ExpansionStatus status = ExpansionStatus::pending;
};

struct RelevanceModel {
  Eigen::Vector2d w;
  double b = 0.0;

  double decision(double semantic, double visual) const {
    return w(0) * semantic + w(1) * visual + b;
  }
};

// Mean of the first k vectors (rank order).
Vec compound_visual_feature(const std::vector<Vec>& vectors, int k);

// Euclidean distance between the two k-compound features.
double visual_distance(const ExpansionCandidate& candidate, const ExpansionCandidate& target,
                       int k);

struct SalienceSplit {
  int train_pos = 75;
  int val_pos = 25;
  int train_neg = 25;
  int val_neg = 25;
};

// Trains a linear SVM on the training split and returns validation accuracy.
double salience_score(const ExpansionCandidate& candidate, const std::vector<Vec>& negatives,
                      const SalienceSplit& split, double C, std::uint64_t seed);

RelevanceModel train_relevance_model(const std::vector<std::pair<double, double>>& positive,
                                     const std::vector<std::pair<double, double>>& negative,
                                     double C);

struct FilterResult {
  std::vector<ExpansionCandidate> all;  // input order, statuses assigned
  std::vector<ExpansionCandidate> relevant;
  std::vector<std::string> diagnostics;
};

// Stage order follows the filtering pipeline: salience first, then the joint
// semantic/visual relevance decision against the target query.
FilterResult filter_expansions(std::vector<ExpansionCandidate> candidates,
                               const ExpansionCandidate& target, const PageCounts& counts,
                               const RelevanceModel& model, const std::vector<Vec>& negatives,
                               const CurationConfig& config);

}  // namespace curation
