#include "doctest.h"

#include "dpclust/assignment.hpp"
#include "test_support.hpp"

using namespace dpclust;

namespace {

WeightMatrixd small() {
  MatrixXd m(2, 2);
  m << 2, 1, 0, 3;
  return WeightMatrixd(m);
}

WeightMatrixd served_everywhere(std::mt19937_64& rng, Index b, Index u, double density) {
  MatrixXd m = test::random_weights(rng, b, u, density).dense();
  for (Index j = 0; j < u; ++j) {
    if (m.col(j).sum() == 0.0) m(static_cast<Index>(rng() % b), j) = 0.5;
  }
  return WeightMatrixd(m);
}

}  // namespace

TEST_CASE("users go to the class with the largest signal") {
  const auto r = assign_users(BsPartition({{0}, {1}}, 2), small());
  CHECK(r.system.user_labels() == IndexList{0, 1});
  CHECK(tinf_value(r.system, small()) == doctest::Approx(5.0 / 6.0));
  CHECK(r.empty_user_classes.empty());
  CHECK(r.isolated_users.empty());
}

TEST_CASE("single class takes every user") {
  const auto r = assign_users(BsPartition({{0, 1}}, 2), small());
  CHECK(r.system.user_labels() == IndexList{0, 0});
}

TEST_CASE("equal class signal goes to the smaller class index") {
  MatrixXd m(2, 1);
  m << 1, 1;
  const auto r = assign_users(BsPartition({{1}, {0}}, 2), WeightMatrixd(m));
  CHECK(r.system.user_labels() == IndexList{0});
  CHECK(r.empty_user_classes == IndexList{1});
}

TEST_CASE("isolated users land in class 0 and are reported") {
  MatrixXd m(2, 3);
  m << 0, 1, 0, 0, 0, 2;
  const auto r = assign_users(BsPartition({{1}, {0}}, 2), WeightMatrixd(m));
  CHECK(r.isolated_users == IndexList{0});
  CHECK(r.system.user_labels()[0] == 0);
  CHECK_FALSE(validate_if_cluster(r.system, WeightMatrixd(m)).valid);
}

TEST_CASE("pipeline output is a valid IF-cluster system") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const Index b = 1 + static_cast<Index>(rng() % 15);
    const Index u = 1 + static_cast<Index>(rng() % 30);
    const auto w = served_everywhere(rng, b, u, 0.2);
    for (Index m = 1; m <= b; ++m) {
      const auto sys = dp_similarity_clustering(w, m);
      CHECK(sys.size() == m);
      CHECK(validate_if_cluster(sys, w).valid);
      if (m == 1) CHECK(tinf_value(sys, w) == 0.0);
    }
  }
}

TEST_CASE("no user gains by switching class on its own") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 50; ++trial) {
    const Index b = 2 + static_cast<Index>(rng() % 10);
    const Index u = 1 + static_cast<Index>(rng() % 20);
    const auto w = test::random_weights(rng, b, u, 0.4);
    const Index m = 1 + static_cast<Index>(rng() % b);
    const auto partition = BsPartition::from_labels(test::random_bs_labels(rng, b, m), m);
    const auto r = assign_users(partition, w);
    const MatrixXd sums = class_signal(partition, w);
    for (Index j = 0; j < u; ++j) {
      const Index own = r.system.user_labels()[j];
      for (Index k = 0; k < m; ++k) CHECK(sums(k, j) <= sums(own, j));
    }
  }
}

TEST_CASE("pruning drops a BS with no signal to its own users") {
  // BS 1 sits in class 0 but only reaches user 2 of class 1.
  MatrixXd m(3, 3);
  m << 1, 1, 0,
       0, 0, 1,
       0, 0, 2;
  const WeightMatrixd w(m);
  const ClusterSystem sys(BsPartition({{0, 1}, {2}}, 3), {{0, 1}, {2}}, 3);
  const auto pruned = prune_bs(sys, w);
  CHECK(pruned.bs().switched_off() == IndexList{1});
  CHECK(pruned.bs_class(0) == IndexList{0});
  CHECK(tinf_value(pruned, w) < tinf_value(sys, w));
  CHECK(tinf_value(pruned, w) == 0.0);
}

TEST_CASE("pruning leaves purely internal clusters alone") {
  MatrixXd m(4, 2);
  m << 1, 0, 2, 0, 0, 1, 0, 3;
  const WeightMatrixd w(m);
  const ClusterSystem sys(BsPartition({{0, 1}, {2, 3}}, 4), {{0}, {1}}, 2);
  CHECK(prune_bs(sys, w) == sys);
}

TEST_CASE("pruning keeps every user served") {
  // BS 0 is the only server of user 0 despite a heavy outside edge.
  MatrixXd m(3, 3);
  m << 1, 0, 5,
       0, 1, 0,
       0, 0, 1;
  const WeightMatrixd w(m);
  const ClusterSystem sys(BsPartition({{0, 1}, {2}}, 3), {{0, 1}, {2}}, 3);
  const auto pruned = prune_bs(sys, w);
  CHECK(validate_if_cluster(pruned, w).valid);
  CHECK(pruned.bs_class(0) == IndexList{0, 1});
}

TEST_CASE("pruning rejects invalid systems") {
  MatrixXd m(2, 2);
  m << 1, 0, 0, 1;
  const ClusterSystem sys(BsPartition({{0}, {1}}, 2), {{1}, {0}}, 2);
  CHECK_THROWS_AS(prune_bs(sys, WeightMatrixd(m)), StructuralError);
}

TEST_CASE("pruning never increases tinf") {
  std::mt19937_64 rng(61);
  int removed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index b = 2 + static_cast<Index>(rng() % 14);
    const Index u = 2 + static_cast<Index>(rng() % 30);
    const auto w = served_everywhere(rng, b, u, 0.3);
    const Index m = 1 + static_cast<Index>(rng() % b);
    const auto sys = dp_similarity_clustering(w, m);
    const auto pruned = prune_bs(sys, w);
    CHECK(validate_if_cluster(pruned, w).valid);
    CHECK(tinf_value(pruned, w) <= tinf_value(sys, w));
    removed += static_cast<int>(pruned.bs().switched_off().size());
  }
  CHECK(removed > 0);
}
