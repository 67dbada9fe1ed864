#include "curation/solvers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace curation {

namespace {

bool same_vector_multiset(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && b[j].size() == x.size() && (b[j] - x).lpNorm<Eigen::Infinity>() == 0.0) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

LinearSvmModel train_linear_svm(const std::vector<Vec>& pos, const std::vector<Vec>& neg,
                                double C, double tol) {
  if (pos.empty() || neg.empty()) throw InputError("train_linear_svm: both classes required");
  if (!(C > 0.0)) throw InputError("train_linear_svm: C must be positive");

  const int dim = static_cast<int>(pos.front().size());
  const int n = static_cast<int>(pos.size() + neg.size());

  // Bias handled as a constant feature: x~ = [x; 1].
  std::vector<Vec> xs;
  std::vector<double> ys;
  xs.reserve(n);
  auto push = [&](const Vec& x, double y) {
    if (static_cast<int>(x.size()) != dim)
      throw InputError("train_linear_svm: dimension mismatch");
    if (!x.allFinite()) throw Error("train_linear_svm: non-finite training data");
    Vec aug(dim + 1);
    aug.head(dim) = x;
    aug(dim) = 1.0;
    xs.push_back(std::move(aug));
    ys.push_back(y);
  };
  for (const auto& x : pos) push(x, +1.0);
  for (const auto& x : neg) push(x, -1.0);

  const double diag = 1.0 / (2.0 * C);
  std::vector<double> sqn(n);
  for (int i = 0; i < n; ++i) sqn[i] = xs[i].squaredNorm() + diag;

  Vec w = Vec::Zero(dim + 1);
  Vec alpha = Vec::Zero(n);

  const int max_sweeps = 200000;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      double grad = ys[i] * w.dot(xs[i]) - 1.0 + diag * alpha(i);
      double next = std::max(0.0, alpha(i) - grad / sqn[i]);
      double delta = next - alpha(i);
      if (delta != 0.0) {
        alpha(i) = next;
        w += delta * ys[i] * xs[i];
      }
    }
    // Duality gap of the squared-hinge formulation.
    double primal = 0.5 * w.squaredNorm();
    for (int i = 0; i < n; ++i) {
      double slack = std::max(0.0, 1.0 - ys[i] * w.dot(xs[i]));
      primal += C * slack * slack;
    }
    double dual = alpha.sum() - 0.5 * w.squaredNorm() - 0.25 / C * alpha.squaredNorm();
    if (primal - dual <= tol * std::max(1.0, std::abs(primal))) break;
  }

  LinearSvmModel model;
  model.w = w.head(dim);
  model.b = w(dim);
  model.C = C;
  model.degenerate = same_vector_multiset(pos, neg);
  return model;
}

namespace {

double fw_gap(const Mat& M, const Vec& alpha) {
  Vec g = M * alpha;
  return alpha.dot(g) - g.minCoeff();
}

// Pairwise Frank-Wolfe refinement: shifts mass from the worst support
// coordinate to the best one. Each step costs O(n) thanks to the cached
// gradient, and convergence is linear on positive-definite systems.
void fw_refine(const Mat& M, Vec& alpha, double tol, int max_iters) {
  const int n = static_cast<int>(alpha.size());
  Vec g = M * alpha;
  for (int it = 0; it < max_iters; ++it) {
    int s;
    g.minCoeff(&s);
    int v = -1;
    double gv = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      if (alpha(i) > 0.0 && g(i) > gv) {
        gv = g(i);
        v = i;
      }
    double gap = alpha.dot(g) - g(s);
    if (gap <= tol || v < 0) return;
    double descent = gv - g(s);
    if (descent <= 0.0) return;
    double dMd = M(s, s) - 2.0 * M(s, v) + M(v, v);
    double gamma = dMd > 0.0 ? std::min(alpha(v), descent / dMd) : alpha(v);
    alpha(s) += gamma;
    alpha(v) -= gamma;
    if (alpha(v) < 0.0) alpha(v) = 0.0;
    g += gamma * (M.col(s) - M.col(v));
  }
}

}  // namespace

SimplexQpSolution simplex_qp_max(const Mat& M, double tol) {
  const int n = static_cast<int>(M.rows());
  return simplex_qp_max(M, tol, Vec::Constant(n, 1.0 / n));
}

SimplexQpSolution simplex_qp_max(const Mat& M, double tol, const Vec& alpha0) {
  const int n = static_cast<int>(M.rows());
  if (M.cols() != n) throw InputError("simplex_qp_max: matrix must be square");
  if ((M - M.transpose()).lpNorm<Eigen::Infinity>() > 1e-9 * std::max(1.0, M.lpNorm<Eigen::Infinity>()))
    throw InputError("simplex_qp_max: matrix must be symmetric");
  if (alpha0.size() != n) throw InputError("simplex_qp_max: warm start has wrong size");
  if (n == 1) {
    SimplexQpSolution s;
    s.alpha = Vec::Ones(1);
    s.value = -0.5 * M(0, 0);
    return s;
  }

  // Primal active-set method for min 1/2 a'Ma over the simplex. Free set F
  // holds the coordinates allowed to move; equality-constrained KKT systems
  // are solved exactly, so termination leaves machine-precision KKT residuals.
  Vec alpha = alpha0;
  std::vector<char> free_set(n, 0);
  for (int i = 0; i < n; ++i) free_set[i] = alpha(i) > 0.0 ? 1 : 0;

  const double eps = 1e-13;
  const int max_iters = 30 * n + 100;
  for (int iter = 0; iter < max_iters; ++iter) {
    std::vector<int> F;
    for (int i = 0; i < n; ++i)
      if (free_set[i]) F.push_back(i);
    const int m = static_cast<int>(F.size());

    // Solve [M_FF 1; 1' 0] [a; lam] = [0; 1]. When M_FF is positive definite
    // the Cholesky route (a = z / 1'z with M_FF z = 1) is much cheaper than a
    // pivoted factorization of the bordered system.
    Mat mff(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) mff(r, c) = M(F[r], F[c]);
    Vec af(m);
    double lam;
    Eigen::LLT<Mat> llt(mff);
    bool solved = false;
    if (llt.info() == Eigen::Success) {
      Vec z = llt.solve(Vec::Ones(m));
      double zsum = z.sum();
      if (std::abs(zsum) > 1e-300 && z.allFinite()) {
        af = z / zsum;
        lam = -1.0 / zsum;
        solved = true;
      }
    }
    if (!solved) {
      Mat kkt = Mat::Zero(m + 1, m + 1);
      kkt.topLeftCorner(m, m) = mff;
      for (int r = 0; r < m; ++r) {
        kkt(r, m) = 1.0;
        kkt(m, r) = 1.0;
      }
      Vec rhs = Vec::Zero(m + 1);
      rhs(m) = 1.0;
      Eigen::FullPivLU<Mat> lu(kkt);
      if (!lu.isInvertible()) {
        // Singular face (e.g. identically-zero block): fall back to FW.
        fw_refine(M, alpha, tol, 2000000);
        break;
      }
      Vec sol = lu.solve(rhs);
      af = sol.head(m);
      lam = sol(m);
    }
    Vec target = Vec::Zero(n);
    for (int r = 0; r < m; ++r) target(F[r]) = af(r);

    if (target.minCoeff() >= -eps) {
      alpha = target.cwiseMax(0.0);
      alpha /= alpha.sum();
      // KKT check on clamped coordinates: multiplier (M a)_i + lam >= 0.
      Vec g = M * alpha;
      int worst = -1;
      double worst_val = -eps * std::max(1.0, g.lpNorm<Eigen::Infinity>());
      for (int i = 0; i < n; ++i) {
        if (free_set[i]) continue;
        double mu = g(i) + lam;
        if (mu < worst_val) {
          worst_val = mu;
          worst = i;
        }
      }
      if (worst < 0) break;
      free_set[worst] = 1;
    } else {
      // Step toward the equality solution until the first coordinate hits 0.
      double step = 1.0;
      int blocking = -1;
      for (int r = 0; r < m; ++r) {
        int i = F[r];
        double di = target(i) - alpha(i);
        if (di < 0.0) {
          double t = -alpha(i) / di;
          if (t < step) {
            step = t;
            blocking = i;
          }
        }
      }
      for (int r = 0; r < m; ++r) {
        int i = F[r];
        alpha(i) += step * (target(i) - alpha(i));
      }
      alpha = alpha.cwiseMax(0.0);
      alpha /= alpha.sum();
      if (blocking >= 0) {
        alpha(blocking) = 0.0;
        alpha /= alpha.sum();
        free_set[blocking] = 0;
      }
    }
  }

  if (fw_gap(M, alpha) > tol) fw_refine(M, alpha, tol, 500000);

  SimplexQpSolution out;
  out.alpha = alpha;
  out.value = -0.5 * alpha.dot(M * alpha);
  return out;
}

std::vector<int> topk_indices(const Vec& values, int k) {
  const int n = static_cast<int>(values.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&values](int a, int b) { return values(a) > values(b); });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

TopkRatioSolution dinkelbach_topk(const Vec& c, const Vec& xi, int k, double tol) {
  const int n = static_cast<int>(c.size());
  if (xi.size() != n) throw InputError("dinkelbach_topk: size mismatch");
  if (k < 1 || k > n) throw InputError("dinkelbach_topk: cardinality k out of range");
  if (xi.minCoeff() <= 0.0) throw InputError("dinkelbach_topk: xi must be positive");

  auto ratio_of = [&](const std::vector<int>& sel) {
    double num = 0.0, den = 0.0;
    for (int i : sel) {
      num += c(i);
      den += xi(i);
    }
    return num / den;
  };

  TopkRatioSolution out;
  std::vector<int> sel = topk_indices(c, k);
  double lambda = ratio_of(sel);
  out.lambda_trace.push_back(lambda);

  const int max_iters = n + 10;
  for (int it = 0; it < max_iters; ++it) {
    Vec reduced = c - lambda * xi;
    std::vector<int> next = topk_indices(reduced, k);
    double excess = 0.0;
    for (int i : next) excess += reduced(i);
    // excess = max_h c'h - lambda xi'h >= 0; zero certifies lambda optimal.
    if (excess <= std::max(tol, 1e-12 * std::abs(lambda) * xi.sum())) break;
    sel = next;
    double next_lambda = ratio_of(sel);
    if (next_lambda - lambda <= tol) {
      lambda = std::max(lambda, next_lambda);
      out.lambda_trace.push_back(next_lambda);
      break;
    }
    lambda = next_lambda;
    out.lambda_trace.push_back(lambda);
  }

  out.h.assign(n, 0);
  for (int i : sel) out.h[i] = 1;
  out.ratio = ratio_of(sel);
  return out;
}

}  // namespace curation
