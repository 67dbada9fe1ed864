#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curation/types.hpp"

using namespace curation;

namespace {

Instance mk(const std::string& id, const std::string& bag, std::initializer_list<double> f,
            int rank = 0) {
  Instance inst;
  inst.id = id;
  inst.bag_id = bag;
  inst.features = Vec(static_cast<int>(f.size()));
  int i = 0;
  for (double v : f) inst.features(i++) = v;
  inst.rank = rank;
  return inst;
}

MilProblem two_bag_problem() {
  MilProblem p;
  Bag pos;
  pos.id = "P";
  pos.label = BagLabel::positive;
  pos.instances = {mk("p0", "P", {1.0, 0.0}), mk("p1", "P", {0.0, 1.0}, 1)};
  Bag neg;
  neg.id = "N";
  neg.label = BagLabel::negative;
  neg.instances = {mk("n0", "N", {-1.0, 0.0})};
  p.bags = {pos, neg};
  return p;
}

bool mentions(const ValidationReport& r, const std::string& needle) {
  for (const auto& issue : r.issues)
    if (issue.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("min_positive_count applies the ceiling") {
  CHECK(min_positive_count(0.7, 10) == 7);
  CHECK(min_positive_count(0.7, 2) == 2);   // ceil(1.4)
  CHECK(min_positive_count(0.5, 2) == 1);
  CHECK(min_positive_count(1.0, 5) == 5);
  CHECK(min_positive_count(0.7, 3) == 3);   // ceil(2.1)
  CHECK(min_positive_count(0.25, 4) == 1);  // exact product, no spurious bump
}

TEST_CASE("validate_problem accepts a well-formed two-bag problem") {
  CHECK(validate_problem(two_bag_problem()).ok());
}

TEST_CASE("validate_problem reports an empty bag by id") {
  MilProblem p = two_bag_problem();
  p.bags[0].instances.clear();
  ValidationReport r = validate_problem(p);
  CHECK(!r.ok());
  CHECK(mentions(r, "empty bag"));
  CHECK(mentions(r, "P"));
}

TEST_CASE("validate_problem names the instance with a dimension mismatch") {
  MilProblem p = two_bag_problem();
  p.bags[1].instances[0].features = Vec::Zero(1);  // D-1 in a D=2 problem
  ValidationReport r = validate_problem(p);
  CHECK(!r.ok());
  CHECK(mentions(r, "dimension"));
  CHECK(mentions(r, "n0"));
}

TEST_CASE("validate_problem reports non-finite features") {
  MilProblem p = two_bag_problem();
  p.bags[0].instances[1].features(0) = std::numeric_limits<double>::quiet_NaN();
  CHECK(mentions(validate_problem(p), "p1"));
}

TEST_CASE("validate_problem requires both bag labels") {
  MilProblem p = two_bag_problem();
  p.bags[1].label = BagLabel::positive;
  CHECK(mentions(validate_problem(p), "negative"));
  p.bags[0].label = BagLabel::negative;
  p.bags[1].label = BagLabel::negative;
  CHECK(mentions(validate_problem(p), "positive"));
}

TEST_CASE("validate_problem reports duplicate instance ids and bad bag_id") {
  MilProblem p = two_bag_problem();
  p.bags[0].instances[1].id = "p0";
  CHECK(mentions(validate_problem(p), "duplicate"));

  p = two_bag_problem();
  p.bags[0].instances[1].bag_id = "Q";
  CHECK(mentions(validate_problem(p), "bag_id"));
}

TEST_CASE("validate_problem is pure") {
  MilProblem p = two_bag_problem();
  p.bags[0].instances.clear();
  ValidationReport a = validate_problem(p);
  ValidationReport b = validate_problem(p);
  CHECK(a.issues == b.issues);
}

TEST_CASE("config validation rejects bad ranges") {
  CurationConfig c;
  CHECK_NOTHROW(c.validate());
  c.delta = 0.0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c.delta = 0.7;
  c.k = 0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c.k = 2;
  c.tolerances.mkl_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), InputError);
}
