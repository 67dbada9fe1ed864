#pragma once

#include <map>

#include "curation/io.hpp"
#include "curation/mil_bag.hpp"
#include "curation/mil_instance.hpp"

namespace curation {

struct RetainedInstance {
  std::string id;
  double score = 0.0;
};

struct RetainedBag {
  std::string id;
  double score = 0.0;
  std::vector<RetainedInstance> instances;  // descending instance score
};

struct CurationManifest {
  CurationConfig config;
  std::vector<std::pair<std::string, double>> bag_scores;  // every positive bag
  std::vector<RetainedBag> retained;
  std::vector<std::string> selection;  // final evenly-selected instance ids
  InstanceTrainTrace instance_trace;
  BagTrainTrace bag_trace;
};

Json manifest_to_json(const CurationManifest& manifest);

// Round-robin over retained bags by descending bag score, always taking the
// bag's next-highest-scoring instance, until the quota is met.
std::vector<std::string> even_select(const std::vector<RetainedBag>& retained, int quota,
                                     std::uint64_t seed);

struct CurationResult {
  CurationManifest manifest;
  InstanceModel instance_model;
  BagModel bag_model;
};

CurationResult run_curation(const MilProblem& problem, const CurationConfig& config);

// Desk-scale stand-in for a crawled image corpus: clustered "visual
// distributions" plus a background noise cluster.
struct SyntheticSpec {
  int dim = 16;
  int clusters = 4;            // visual distributions
  double cluster_scale = 1.0;  // per-coordinate noise scale
  double separation = 8.0;     // center distance from the origin
  int positive_bags = 8;
  int noise_bags = 2;  // positive-labeled bags drawn entirely from noise
  int negative_bags = 4;
  int bag_size = 10;
  double noise_fraction = 0.3;
  std::uint64_t seed = 0;
};

struct GroundTruth {
  std::map<std::string, bool> bag_clean;       // positive-labeled bags only
  std::map<std::string, bool> instance_clean;  // instances of positive bags
};

struct SyntheticProblem {
  MilProblem problem;
  GroundTruth truth;
};

SyntheticProblem generate_synthetic(const SyntheticSpec& spec, const CurationConfig& config);

Json truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const Json& j);

}  // namespace curation
