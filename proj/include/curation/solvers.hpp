#pragma once

#include "curation/types.hpp"

namespace curation {

struct LinearSvmModel {
  Vec w;
  double b = 0.0;
  double C = 1.0;
  bool degenerate = false;  // zero-margin warning (e.g. identical class sets)

  double decision(const Vec& x) const { return w.dot(x) + b; }
};

// L2-regularized squared-hinge SVM with squared bias penalty, solved in the
// dual by coordinate descent with the bias folded into a constant feature.
LinearSvmModel train_linear_svm(const std::vector<Vec>& pos, const std::vector<Vec>& neg,
                                double C, double tol);

struct SimplexQpSolution {
  Vec alpha;     // on the probability simplex
  double value;  // -1/2 alpha' M alpha at alpha
};

// Maximizes -1/2 alpha' M alpha over {alpha >= 0, sum alpha = 1}. The result
// is certified by the linearization gap alpha'M alpha - min_i (M alpha)_i <= tol.
SimplexQpSolution simplex_qp_max(const Mat& M, double tol);

// Warm-started variant; alpha0 must lie on the simplex.
SimplexQpSolution simplex_qp_max(const Mat& M, double tol, const Vec& alpha0);

struct TopkRatioSolution {
  std::vector<int> h;  // 0/1 indicator, sum = k
  double ratio;        // (c'h)/(xi'h)
  std::vector<double> lambda_trace;
};

// Maximizes (c'h)/(xi'h) over h in {0,1}^n with sum h = k, xi > 0, by the
// parametric iteration whose inner step is a closed-form top-k selection.
// Ties always break toward the lowest index.
TopkRatioSolution dinkelbach_topk(const Vec& c, const Vec& xi, int k, double tol);

// Indices of the k largest values, ties to the lowest index.
std::vector<int> topk_indices(const Vec& values, int k);

}  // namespace curation
