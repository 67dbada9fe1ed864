#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "curation/kernel.hpp"

using namespace curation;

namespace {

Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

KernelSpec linear_spec() {
  KernelSpec s;
  s.kind = KernelSpec::Kind::linear;
  return s;
}

KernelSpec rbf_spec(double gamma) {
  KernelSpec s;
  s.kind = KernelSpec::Kind::rbf;
  s.gamma = gamma;
  return s;
}

double min_eigenvalue(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("rbf Gram diagonal is all ones") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> dist;
  std::vector<Vec> xs;
  for (int i = 0; i < 6; ++i) {
    Vec x(3);
    for (int d = 0; d < 3; ++d) x(d) = dist(rng);
    xs.push_back(x);
  }
  GramMatrix g = gram_matrix(xs, rbf_spec(0.5));
  for (int i = 0; i < g.n(); ++i) CHECK(g.entries(i, i) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_FALSE(g.augmented);
}

TEST_CASE("linear Gram of an orthonormal pair is the identity") {
  GramMatrix g = gram_matrix({v2(1, 0), v2(0, 1)}, linear_spec());
  CHECK(g.entries.isApprox(Mat::Identity(2, 2), 1e-15));
}

TEST_CASE("linear kernel value by hand") {
  CHECK(kernel_value(v2(1, 2), v2(3, 4), linear_spec()) == doctest::Approx(11.0));
}

TEST_CASE("augment adds one to every entry and preserves symmetry") {
  GramMatrix zero;
  zero.entries = Mat::Zero(3, 3);
  GramMatrix a = augment(zero);
  CHECK(a.entries.isApprox(Mat::Ones(3, 3)));
  CHECK(a.augmented);

  GramMatrix id = gram_matrix({v2(1, 0), v2(0, 1)}, linear_spec());
  GramMatrix aid = augment(id);
  Mat expected(2, 2);
  expected << 2, 1, 1, 2;
  CHECK(aid.entries.isApprox(expected));
}

TEST_CASE("double augmentation is a state error") {
  GramMatrix g = gram_matrix({v2(1, 0)}, linear_spec());
  GramMatrix a = augment(g);
  CHECK_THROWS_AS(augment(a), StateError);
}

TEST_CASE("non-finite input is a numeric error naming the entry") {
  Vec bad = v2(std::numeric_limits<double>::infinity(), 0);
  CHECK_THROWS_AS(gram_matrix({bad, v2(1, 1)}, linear_spec()), Error);
}

TEST_CASE("Gram matrices are PSD and augmentation preserves PSD") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vec> xs;
    for (int i = 0; i < 8; ++i) {
      Vec x(4);
      for (int d = 0; d < 4; ++d) x(d) = dist(rng);
      xs.push_back(x);
    }
    for (const KernelSpec& spec : {linear_spec(), rbf_spec(0.3)}) {
      GramMatrix g = gram_matrix(xs, spec);
      CHECK((g.entries - g.entries.transpose()).lpNorm<Eigen::Infinity>() <= 1e-12);
      CHECK(min_eigenvalue(g.entries) >= -1e-8);
      CHECK(min_eigenvalue(augment(g).entries) >= -1e-8);
    }
  }
}

TEST_CASE("resolve_kernel fills the default rbf bandwidth") {
  KernelSpec unset;
  unset.kind = KernelSpec::Kind::rbf;
  unset.gamma = 0.0;
  KernelSpec resolved = resolve_kernel(unset, 8);
  CHECK(resolved.gamma == doctest::Approx(1.0 / 8));
  KernelSpec given = resolve_kernel(rbf_spec(0.25), 8);
  CHECK(given.gamma == doctest::Approx(0.25));
}
