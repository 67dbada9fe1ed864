#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace curation {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error taxonomy. Validation problems are reported, not thrown, wherever the
// contract says so; these are for genuine precondition/state violations.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : Error {
  using Error::Error;
};
struct StateError : Error {
  using Error::Error;
};
struct ConvergenceError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

// One feature vector with identity, bag membership and source rank (0 = top).
struct Instance {
  std::string id;
  std::string bag_id;
  Vec features;
  int rank = 0;
};

enum class BagLabel { positive, negative };

// A labeled group of instances corresponding to one query expansion.
struct Bag {
  std::string id;
  BagLabel label = BagLabel::negative;
  std::optional<std::string> expansion_text;
  std::vector<Instance> instances;

  int size() const { return static_cast<int>(instances.size()); }
};

struct KernelSpec {
  enum class Kind { linear, rbf };
  Kind kind = Kind::rbf;
  double gamma = 0.0;  // rbf only; <= 0 means "resolve to 1/D at load time"
};

struct MilProblem {
  std::vector<Bag> bags;
  double delta = 0.7;
  double C = 1.0;
  KernelSpec kernel;

  int dimension() const {
    for (const auto& b : bags)
      if (!b.instances.empty()) return static_cast<int>(b.instances.front().features.size());
    return 0;
  }
  int total_instances() const {
    int n = 0;
    for (const auto& b : bags) n += b.size();
    return n;
  }
};

// Minimum number of positive labels a positive bag must carry (Eq. 4, with a
// ceiling so the guarantee survives non-integral delta * |B|).
int min_positive_count(double delta, int bag_size);

struct Tolerances {
  double mkl_tol = 1e-7;
  double cccp_tol = 1e-6;
  double dinkelbach_tol = 1e-12;
};

struct CurationConfig {
  double delta = 0.7;
  double C_instance = 1.0;
  double C_bag = 1.0;
  KernelSpec kernel;
  int k = 2;
  double xi_alpha = 1.0;
  double xi_beta = 0.0;
  double d_clamp = 1e-6;
  double salience_threshold = 0.7;
  int top_n = 100;
  int coverage_budget = 1;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  int quota = 0;  // 0 = keep everything that survives filtering
  int instance_max_iter = 50;
  int cccp_max_iter = 50;

  void validate() const;
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

// Lists every violated invariant of the problem; empty report iff well-formed.
ValidationReport validate_problem(const MilProblem& problem);

}  // namespace curation
