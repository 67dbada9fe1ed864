#include "curation/mil_instance.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "curation/solvers.hpp"

namespace curation {

int ProblemView::positive_instance_count() const {
  int count = 0;
  for (const auto& range : bags)
    if (range.positive) count += range.end - range.begin;
  return count;
}

ProblemView make_view(const MilProblem& problem) {
  ProblemView view;
  view.problem = &problem;
  for (const auto& bag : problem.bags) {
    ProblemView::BagRange range;
    range.begin = view.n();
    for (const auto& inst : bag.instances) view.instances.push_back(&inst);
    range.end = view.n();
    range.positive = bag.label == BagLabel::positive;
    range.min_positive = range.positive ? min_positive_count(problem.delta, bag.size()) : 0;
    view.bags.push_back(range);
  }
  return view;
}

Labeling initial_labeling(const ProblemView& view) {
  Labeling y(view.n(), -1);
  for (const auto& range : view.bags)
    if (range.positive)
      for (int i = range.begin; i < range.end; ++i) y[i] = +1;
  return y;
}

bool labeling_is_admissible(const ProblemView& view, const Labeling& y) {
  if (static_cast<int>(y.size()) != view.n()) return false;
  for (int v : y)
    if (v != 1 && v != -1) return false;
  for (const auto& range : view.bags) {
    if (!range.positive) {
      for (int i = range.begin; i < range.end; ++i)
        if (y[i] != -1) return false;
    } else {
      int positives = 0;
      for (int i = range.begin; i < range.end; ++i)
        if (y[i] == +1) ++positives;
      if (positives < range.min_positive) return false;
    }
  }
  return true;
}

namespace {

// Per-bag label patterns with at least m positives, in lexicographic order
// with +1 before -1 (+1 encoded as bit 0, first position most significant).
std::vector<std::vector<int>> bag_patterns(int size, int min_positive) {
  std::vector<std::vector<int>> patterns;
  const std::uint32_t limit = 1u << size;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    int negatives = __builtin_popcount(mask);
    if (size - negatives < min_positive) continue;
    std::vector<int> pattern(size);
    for (int i = 0; i < size; ++i)
      pattern[i] = (mask >> (size - 1 - i)) & 1u ? -1 : +1;
    patterns.push_back(std::move(pattern));
  }
  return patterns;
}

void check_enumeration_guard(const ProblemView& view) {
  if (view.positive_instance_count() > kEnumerationGuard)
    throw InputError("labeling enumeration too large: " +
                     std::to_string(view.positive_instance_count()) +
                     " positive-bag instances exceeds the guard of " +
                     std::to_string(kEnumerationGuard));
}

// Calls fn(y) for every admissible labeling, in lexicographic order.
template <typename Fn>
void for_each_admissible(const ProblemView& view, Fn&& fn) {
  std::vector<int> positive_bags;
  for (int b = 0; b < static_cast<int>(view.bags.size()); ++b)
    if (view.bags[b].positive) positive_bags.push_back(b);

  std::vector<std::vector<std::vector<int>>> options;
  for (int b : positive_bags) {
    const auto& range = view.bags[b];
    options.push_back(bag_patterns(range.end - range.begin, range.min_positive));
  }

  Labeling y(view.n(), -1);
  std::vector<std::size_t> cursor(options.size(), 0);
  auto apply = [&](std::size_t slot) {
    const auto& range = view.bags[positive_bags[slot]];
    const auto& pattern = options[slot][cursor[slot]];
    for (int i = range.begin; i < range.end; ++i) y[i] = pattern[i - range.begin];
  };
  for (std::size_t s = 0; s < options.size(); ++s) apply(s);

  while (true) {
    fn(const_cast<const Labeling&>(y));
    std::size_t slot = options.size();
    while (slot > 0) {
      --slot;
      if (++cursor[slot] < options[slot].size()) {
        apply(slot);
        for (std::size_t s = slot + 1; s < options.size(); ++s) {
          cursor[s] = 0;
          apply(s);
        }
        break;
      }
      if (slot == 0) return;
    }
    if (options.empty()) return;
  }
}

}  // namespace

std::vector<Labeling> admissible_labelings(const ProblemView& view) {
  check_enumeration_guard(view);
  std::vector<Labeling> out;
  for_each_admissible(view, [&out](const Labeling& y) { out.push_back(y); });
  return out;
}

double labeling_objective(const Vec& alpha, const GramMatrix& gram, const Labeling& y) {
  const int n = gram.n();
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = alpha(i) * y[i];
  return v.dot(gram.entries * v);
}

Labeling most_violated_labeling(const Vec& alpha, const GramMatrix& gram,
                                const ProblemView& view) {
  check_enumeration_guard(view);
  const int n = view.n();
  if (alpha.size() != n || gram.n() != n)
    throw InputError("most_violated_labeling: size mismatch");

  // Split the quadratic form into a fixed negative-bag part and the varying
  // positive-bag coordinates so each candidate costs O(p^2).
  std::vector<int> pos_idx;
  for (const auto& range : view.bags)
    if (range.positive)
      for (int i = range.begin; i < range.end; ++i) pos_idx.push_back(i);
  const int p = static_cast<int>(pos_idx.size());

  Vec v_fixed = Vec::Zero(n);
  for (const auto& range : view.bags)
    if (!range.positive)
      for (int i = range.begin; i < range.end; ++i) v_fixed(i) = -alpha(i);
  const double fixed_term = v_fixed.dot(gram.entries * v_fixed);
  Vec cross = gram.entries * v_fixed;  // K v_fixed

  Mat Kpp(p, p);
  Vec cross_p(p), a_p(p);
  for (int r = 0; r < p; ++r) {
    for (int c = 0; c < p; ++c) Kpp(r, c) = gram.entries(pos_idx[r], pos_idx[c]);
    cross_p(r) = cross(pos_idx[r]);
    a_p(r) = alpha(pos_idx[r]);
  }

  double best = -std::numeric_limits<double>::infinity();
  Labeling best_y;
  Vec z(p);
  for_each_admissible(view, [&](const Labeling& y) {
    for (int r = 0; r < p; ++r) z(r) = a_p(r) * y[pos_idx[r]];
    double value = fixed_term + 2.0 * z.dot(cross_p) + z.dot(Kpp * z);
    if (value > best) {
      best = value;
      best_y = y;
    }
  });
  return best_y;
}

Labeling most_violated_labeling_local(const Vec& alpha, const GramMatrix& gram,
                                      const ProblemView& view, const Labeling& start) {
  const int n = view.n();
  if (!labeling_is_admissible(view, start))
    throw InputError("most_violated_labeling_local: inadmissible start labeling");

  Labeling y = start;
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = alpha(i) * y[i];
  Vec s = gram.entries * v;  // K v, maintained incrementally

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (const auto& range : view.bags) {
      if (!range.positive) continue;
      const int m = range.end - range.begin;
      auto patterns = bag_patterns(m, range.min_positive);

      // t = K v with this bag's contribution removed, restricted to the bag.
      Vec vb(m);
      for (int i = 0; i < m; ++i) vb(i) = v(range.begin + i);
      Mat Kb = gram.entries.block(range.begin, range.begin, m, m);
      Vec t(m);
      for (int i = 0; i < m; ++i) {
        double removed = 0.0;
        for (int j = 0; j < m; ++j) removed += Kb(i, j) * vb(j);
        t(i) = s(range.begin + i) - removed;
      }

      double best_term = -std::numeric_limits<double>::infinity();
      const std::vector<int>* best_pattern = nullptr;
      Vec zb(m);
      for (const auto& pattern : patterns) {
        for (int i = 0; i < m; ++i) zb(i) = alpha(range.begin + i) * pattern[i];
        double term = 2.0 * zb.dot(t) + zb.dot(Kb * zb);
        if (term > best_term) {
          best_term = term;
          best_pattern = &pattern;
        }
      }

      bool differs = false;
      for (int i = 0; i < m; ++i)
        if ((*best_pattern)[i] != y[range.begin + i]) differs = true;
      if (differs) {
        Vec delta(m);
        for (int i = 0; i < m; ++i) {
          double nv = alpha(range.begin + i) * (*best_pattern)[i];
          delta(i) = nv - v(range.begin + i);
          v(range.begin + i) = nv;
          y[range.begin + i] = (*best_pattern)[i];
        }
        s += gram.entries.middleCols(range.begin, m) * delta;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return y;
}

namespace {

// Mixed kernel M(u) = sum_t u_t (K~ o y^t y^t') + (1/C) I.
Mat mixed_kernel(const GramMatrix& gram, const std::vector<Labeling>& active, const Vec& u,
                 double C) {
  const int n = gram.n();
  Mat M = Mat::Zero(n, n);
  for (std::size_t t = 0; t < active.size(); ++t) {
    if (u(t) == 0.0) continue;
    const Labeling& y = active[t];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) += u(t) * y[i] * y[j] * gram.entries(i, j);
  }
  M.diagonal().array() += 1.0 / C;
  return M;
}

Vec labeling_quadratics(const GramMatrix& gram, const std::vector<Labeling>& active,
                        const Vec& alpha) {
  Vec q(active.size());
  for (std::size_t t = 0; t < active.size(); ++t)
    q(t) = labeling_objective(alpha, gram, active[t]);
  return q;
}

}  // namespace

MklState restricted_mkl(const GramMatrix& gram, const std::vector<Labeling>& active, double C,
                        double tol) {
  const int t = static_cast<int>(active.size());
  return restricted_mkl(gram, active, C, tol, Vec::Constant(t, 1.0 / t),
                        Vec::Constant(gram.n(), 1.0 / gram.n()));
}

MklState restricted_mkl(const GramMatrix& gram, const std::vector<Labeling>& active, double C,
                        double tol, const Vec& u0, const Vec& alpha0) {
  if (!gram.augmented) throw StateError("restricted_mkl: gram matrix must be augmented");
  if (active.empty()) throw InputError("restricted_mkl: active set is empty");
  const int T = static_cast<int>(active.size());
  const int n = gram.n();
  for (const auto& y : active)
    if (static_cast<int>(y.size()) != n) throw InputError("restricted_mkl: labeling size mismatch");
  if (u0.size() != T) throw InputError("restricted_mkl: weight warm start size mismatch");

  // Equivalent convex program: minimize f0(a, s) = |a|^2/(2C) + s/2 subject to
  // a >= 0, 1'a = 1, and q_t(a) = (a o y^t)' K~ (a o y^t) <= s for every active
  // labeling t.  Its optimal value is -J*, and the multipliers of the quadratic
  // constraints (normalised) are the optimal kernel weights u.  A log-barrier
  // Newton method solves it smoothly, which avoids the kinks of J(u) that defeat
  // first-order descent on the weight simplex.
  const Mat& K = gram.entries;
  Mat Y(n, T);
  for (int col = 0; col < T; ++col)
    for (int i = 0; i < n; ++i) Y(i, col) = static_cast<double>(active[col][i]);

  auto quad_values = [&](const Vec& a) {
    Vec q(T);
    for (int col = 0; col < T; ++col) {
      Vec z = Y.col(col).cwiseProduct(a);
      q(col) = z.dot(K * z);
    }
    return q;
  };

  // Strictly feasible start: mix the warm-start alpha with the uniform point.
  Vec a = alpha0.cwiseMax(0.0);
  double asum = a.sum();
  if (asum <= 0.0 || !a.allFinite())
    a = Vec::Constant(n, 1.0 / n);
  else
    a = 0.9 * (a / asum) + Vec::Constant(n, 0.1 / n);
  Vec q = quad_values(a);
  double s = q.maxCoeff() + std::max(1.0, std::abs(q.maxCoeff()));

  const int m_ineq = n + T;
  double barrier_t = 1.0;
  const double mu = 20.0;
  int newton_steps = 0;

  auto barrier_value = [&](const Vec& aa, double ss, const Vec& qq) {
    for (int i = 0; i < n; ++i)
      if (aa(i) <= 0.0) return std::numeric_limits<double>::infinity();
    double val = barrier_t * (aa.squaredNorm() / (2.0 * C) + 0.5 * ss);
    for (int i = 0; i < n; ++i) val -= std::log(aa(i));
    for (int col = 0; col < T; ++col) {
      double slack = ss - qq(col);
      if (slack <= 0.0) return std::numeric_limits<double>::infinity();
      val -= std::log(slack);
    }
    return val;
  };

  Vec phi(T);
  while (true) {
    for (int inner = 0; inner < 80; ++inner) {
      ++newton_steps;
      q = quad_values(a);
      phi = (Vec::Constant(T, s) - q).cwiseMax(1e-300);
      Vec inv_phi = phi.cwiseInverse();
      Vec inv_phi2 = inv_phi.cwiseProduct(inv_phi);

      // Constraint gradients g_t = 2 y^t o (K (y^t o a)), assembled columnwise.
      Mat G(n, T);
      for (int col = 0; col < T; ++col) {
        Vec z = Y.col(col).cwiseProduct(a);
        G.col(col) = 2.0 * Y.col(col).cwiseProduct(K * z);
      }

      Vec grad_a = (barrier_t / C) * a - a.cwiseInverse() + G * inv_phi;
      double grad_s = 0.5 * barrier_t - inv_phi.sum();

      // H_aa = (t/C) I + diag(1/a^2) + 2 K o (Y diag(1/phi) Y') + G diag(1/phi^2) G'.
      Mat W = Y * inv_phi.asDiagonal() * Y.transpose();
      Mat H = 2.0 * K.cwiseProduct(W);
      H += (G * inv_phi2.asDiagonal()) * G.transpose();
      H.diagonal() += Vec::Constant(n, barrier_t / C) + a.cwiseInverse().cwiseAbs2();
      Vec h_as = -(G * inv_phi2);
      double h_ss = inv_phi2.sum();

      Mat Kkt(n + 1, n + 1);
      Kkt.topLeftCorner(n, n) = H;
      Kkt.topRightCorner(n, 1) = h_as;
      Kkt.bottomLeftCorner(1, n) = h_as.transpose();
      Kkt(n, n) = h_ss;

      Vec grad(n + 1);
      grad.head(n) = grad_a;
      grad(n) = grad_s;
      Vec e = Vec::Zero(n + 1);
      e.head(n).setOnes();

      Eigen::LDLT<Mat> fact(Kkt);
      // One round of iterative refinement recovers digits lost to the barrier
      // Hessian's growing condition number at large barrier_t.
      auto solve_refined = [&](const Vec& rhs) {
        Vec x = fact.solve(rhs);
        x += fact.solve(rhs - Kkt * x);
        x += fact.solve(rhs - Kkt * x);
        return x;
      };
      Vec w1 = solve_refined(grad);
      Vec w2 = solve_refined(e);
      double nu = -e.dot(w1) / e.dot(w2);
      Vec dx = -w1 - nu * w2;
      double decrement = -grad.dot(dx);
      if (!std::isfinite(decrement) || decrement <= 1e-12) break;

      // Step short of the a > 0 boundary, then backtrack on the barrier value.
      double step = 1.0;
      for (int i = 0; i < n; ++i)
        if (dx(i) < 0.0) step = std::min(step, -0.99 * a(i) / dx(i));
      double f_cur = barrier_value(a, s, q);
      for (int bt = 0; bt < 60; ++bt) {
        Vec a_new = a + step * dx.head(n);
        double s_new = s + step * dx(n);
        Vec q_new = quad_values(a_new);
        if (barrier_value(a_new, s_new, q_new) <= f_cur - 1e-4 * step * decrement) {
          a = a_new;
          s = s_new;
          break;
        }
        step *= 0.5;
      }
    }
    double f0 = a.squaredNorm() / (2.0 * C) + 0.5 * s;
    if (m_ineq / barrier_t <= 1e-7 * std::max(1.0, std::abs(f0))) break;
    barrier_t *= mu;
  }

  // Kernel weights from the centred quadratic-constraint multipliers.
  q = quad_values(a);
  phi = (Vec::Constant(T, s) - q).cwiseMax(1e-300);
  Vec u = phi.cwiseInverse();
  u /= u.sum();

  // Exact inner solve at candidate weights; the achieved value and the spread
  // of the active quadratics give a two-sided certificate:
  // J(u) >= J* >= -|alpha|^2/(2C) - max_t q_t / 2.
  auto certify = [&](const Vec& uu, const Vec& warm) {
    Mat M = mixed_kernel(gram, active, uu, C);
    SimplexQpSolution sol = simplex_qp_max(M, std::max(tol * 1e-3, 1e-13), warm);
    Vec qq = labeling_quadratics(gram, active, sol.alpha);
    double gg = 0.5 * (qq.maxCoeff() - uu.dot(qq));
    return std::make_tuple(sol.value, gg, sol.alpha);
  };

  auto [objective, gap, alpha] = certify(u, a);

  // Newton polish on the saddle KKT system restricted to the supports the
  // barrier identified: (M(u) alpha)_i = lambda on supp(alpha), 1'alpha = 1,
  // q_t(alpha) = s on supp(u), 1'u = 1.  The square system is well conditioned
  // where the barrier Hessian is not, so a few full Newton steps reach machine
  // precision; the exact certificate arbitrates between the two candidates.
  if (gap > 0.0) {
    std::vector<int> Sa, Su;
    double amax = alpha.maxCoeff();
    for (int i = 0; i < n; ++i)
      if (alpha(i) > 1e-7 * amax) Sa.push_back(i);
    double umax = u.maxCoeff();
    for (int col = 0; col < T; ++col)
      if (u(col) > 1e-5 * umax) Su.push_back(col);
    const int p = static_cast<int>(Sa.size());
    const int r = static_cast<int>(Su.size());

    Vec av = alpha;
    for (int i = 0; i < n; ++i)
      if (std::find(Sa.begin(), Sa.end(), i) == Sa.end()) av(i) = 0.0;
    av /= av.sum();
    Vec uv = Vec::Zero(T);
    for (int t2 : Su) uv(t2) = u(t2);
    uv /= uv.sum();
    Vec qv = quad_values(av);
    double sv = 0.0;
    for (int t2 : Su) sv = std::max(sv, qv(t2));
    Mat Mu = mixed_kernel(gram, active, uv, C);
    double lam = av.dot(Mu * av);

    bool ok = true;
    for (int it = 0; it < 30 && ok; ++it) {
      Mu = mixed_kernel(gram, active, uv, C);
      qv = quad_values(av);
      Mat At(n, r);  // columns A_t av for t in supp(u)
      for (int c = 0; c < r; ++c) {
        Vec z = Y.col(Su[c]).cwiseProduct(av);
        At.col(c) = Y.col(Su[c]).cwiseProduct(K * z);
      }
      Vec Ma = Mu * av;

      const int dim = p + r + 2;
      Mat Js = Mat::Zero(dim, dim);
      Vec R(dim);
      for (int i = 0; i < p; ++i) {
        R(i) = Ma(Sa[i]) - lam;
        for (int j = 0; j < p; ++j) Js(i, j) = Mu(Sa[i], Sa[j]);
        for (int c = 0; c < r; ++c) Js(i, p + c) = At(Sa[i], c);
        Js(i, p + r) = -1.0;
      }
      R(p) = av.sum() - 1.0;
      for (int j = 0; j < p; ++j) Js(p, j) = 1.0;
      for (int c = 0; c < r; ++c) {
        R(p + 1 + c) = qv(Su[c]) - sv;
        for (int j = 0; j < p; ++j) Js(p + 1 + c, j) = 2.0 * At(Sa[j], c);
        Js(p + 1 + c, p + r + 1) = -1.0;
      }
      R(p + 1 + r) = uv.sum() - 1.0;
      for (int c = 0; c < r; ++c) Js(p + 1 + r, p + c) = 1.0;

      double res = R.cwiseAbs().maxCoeff();
      if (!std::isfinite(res)) {
        ok = false;
        break;
      }
      if (res <= 1e-13 * std::max(1.0, std::abs(sv))) break;

      // Minimum-norm step tolerates the rank deficiency caused by duplicated
      // labelings in the active set.
      Eigen::CompleteOrthogonalDecomposition<Mat> cod(Js);
      Vec dx = cod.solve(-R);
      if (!dx.allFinite()) {
        ok = false;
        break;
      }
      for (int i = 0; i < p; ++i) av(Sa[i]) += dx(i);
      for (int c = 0; c < r; ++c) uv(Su[c]) += dx(p + c);
      lam += dx(p + r);
      sv += dx(p + r + 1);
    }

    if (ok && av.minCoeff() > -1e-9 && uv.minCoeff() > -1e-9) {
      Vec u_pol = uv.cwiseMax(0.0);
      u_pol /= u_pol.sum();
      Vec warm = av.cwiseMax(0.0);
      warm /= warm.sum();
      auto [obj2, gap2, alpha2] = certify(u_pol, warm);
      if (gap2 < gap) {
        u = u_pol;
        objective = obj2;
        gap = gap2;
        alpha = alpha2;
      }
    }
  }

  MklState state;
  state.u = u;
  state.alpha = alpha;
  state.objective = objective;
  state.gap = gap;
  state.iterations = newton_steps;
  return state;
}

InstanceModel train_instance_model(const MilProblem& problem, double tol, int max_iter,
                                   InstanceTrainTrace* trace) {
  ValidationReport report = validate_problem(problem);
  if (!report.ok()) {
    std::string msg = "train_instance_model: invalid problem:";
    for (const auto& issue : report.issues) msg += " [" + issue + "]";
    throw InputError(msg);
  }

  ProblemView view = make_view(problem);
  const int n = view.n();
  KernelSpec kernel = resolve_kernel(problem.kernel, problem.dimension());

  std::vector<Vec> features;
  features.reserve(n);
  for (const Instance* inst : view.instances) features.push_back(inst->features);
  GramMatrix K = gram_matrix(features, kernel);
  GramMatrix Kt = augment(K);

  const bool enumerate = view.positive_instance_count() <= kEnumerationGuard;
  std::vector<Labeling> all;
  if (enumerate) all = admissible_labelings(view);

  std::vector<Labeling> zeta{initial_labeling(view)};
  Vec u = Vec::Ones(1);
  Vec alpha = Vec::Constant(n, 1.0 / n);
  MklState state;

  InstanceTrainTrace local_trace;
  InstanceTrainTrace& tr = trace ? *trace : local_trace;
  tr.enumerated = enumerate;

  for (int iter = 0; iter < max_iter; ++iter) {
    state = restricted_mkl(Kt, zeta, problem.C, tol, u, alpha);
    u = state.u;
    alpha = state.alpha;
    tr.objectives.push_back(state.objective);
    tr.restricted_gaps.push_back(state.gap);
    tr.iterations = iter + 1;

    // Most violated labeling under the augmented kernel, so the resulting gap
    // certifies closeness to the full master problem.
    Labeling violator;
    if (enumerate) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& y : all) {
        double value = labeling_objective(alpha, Kt, y);
        if (value > best) {
          best = value;
          violator = y;
        }
      }
    } else {
      double best_seed = -std::numeric_limits<double>::infinity();
      const Labeling* seed = nullptr;
      for (const auto& y : zeta) {
        double value = labeling_objective(alpha, Kt, y);
        if (value > best_seed) {
          best_seed = value;
          seed = &y;
        }
      }
      violator = most_violated_labeling_local(alpha, Kt, view, *seed);
    }

    Vec q = labeling_quadratics(Kt, zeta, alpha);
    double q_star = labeling_objective(alpha, Kt, violator);
    double gap_full = 0.5 * (q_star - u.dot(q));
    tr.gaps.push_back(gap_full);

    bool already_active =
        std::find(zeta.begin(), zeta.end(), violator) != zeta.end();
    if (already_active || gap_full <= tol) break;

    zeta.push_back(violator);
    Vec u_next = Vec::Zero(zeta.size());
    u_next.head(u.size()) = u;
    u = u_next;
  }

  InstanceModel model;
  model.kernel = kernel;
  for (int i = 0; i < n; ++i) {
    if (alpha(i) <= 1e-10) continue;
    double y_tilde = 0.0;
    for (std::size_t t = 0; t < zeta.size(); ++t) y_tilde += u(t) * zeta[t][i];
    model.support.push_back({features[i], alpha(i), y_tilde});
  }
  return model;
}

double score_instance(const InstanceModel& model, const Vec& x) {
  double score = 0.0;
  for (const auto& entry : model.support) {
    if (entry.features.size() != x.size())
      throw InputError("score_instance: dimension mismatch");
    score += entry.alpha * entry.y_tilde * (kernel_value(x, entry.features, model.kernel) + 1.0);
  }
  return score;
}

}  // namespace curation
