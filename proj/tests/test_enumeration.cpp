#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <doctest.h>

#include "hnpoly/enumeration.hpp"

using namespace hnpoly;

namespace {

Eigen::MatrixXd random_spd(std::mt19937_64& rng, int r) {
  std::uniform_int_distribution<int> entry(-2, 2);
  Eigen::MatrixXd a(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) a(i, j) = entry(rng);
  return a.transpose() * a + 0.5 * Eigen::MatrixXd::Identity(r, r);
}

}  // namespace

TEST_CASE("hand counted balls") {
  Eigen::MatrixXd id2 = Eigen::MatrixXd::Identity(2, 2);
  CountResult r = count_short_vectors(id2, 1.0);
  CHECK(r.count == 5);
  CHECK(r.min_nonzero == doctest::Approx(1.0));

  // Squared radius e^2: 21 integer points in the plane.
  CountResult r21 = count_short_vectors(std::exp(-2.0) * id2, 1.0);
  CHECK(r21.count == 21);
}

TEST_CASE("boundary points are decided exactly") {
  Eigen::MatrixXd g(1, 1);
  g << 1.0;
  CHECK(count_short_vectors(g, 4.0).count == 5);            // +-2 exactly on the edge
  CHECK(count_short_vectors(g, 4.0 - 1e-12).count == 3);    // nudged inside the slack
  CHECK(count_short_vectors(g, 4.0 + 1e-12).count == 5);
  CHECK(count_short_vectors(g, 0.0).count == 1);            // only the origin
}

TEST_CASE("serial and parallel kernels agree") {
  std::mt19937_64 rng(401);
  for (int trial = 0; trial < 10; ++trial) {
    int r = 2 + int(rng() % 4);
    Eigen::MatrixXd g = random_spd(rng, r);
    double bound = 4.0 * r;
    CountResult a = count_short_vectors_serial(g, bound);
    CountResult b = count_short_vectors_parallel(g, bound);
    CHECK(a.count == b.count);
    CHECK(a.boundary == b.boundary);
    CHECK(a.min_nonzero == doctest::Approx(b.min_nonzero).epsilon(1e-15));
    CHECK(a.count >= 1);
  }
}

TEST_CASE("budgets trip before wrong answers") {
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(4, 4);
  EnumBudget tiny;
  tiny.max_nodes = 10;
  CHECK_THROWS_AS(count_short_vectors_serial(g, 25.0, tiny), BudgetError);
  CHECK_THROWS_AS(count_short_vectors_parallel(g, 25.0, tiny), BudgetError);
  CHECK_THROWS_AS(enumerate_short_vectors(g, 25.0, tiny), BudgetError);

  EnumBudget low_rank;
  low_rank.max_rank = 3;
  CHECK_THROWS_AS(count_short_vectors(g, 1.0, low_rank), BudgetError);
  CHECK_THROWS_AS(count_short_vectors(Eigen::MatrixXd::Zero(2, 2), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(count_short_vectors(g, -1.0), std::invalid_argument);
}

TEST_CASE("listing is deterministic and canonical") {
  std::mt19937_64 rng(402);
  for (int trial = 0; trial < 8; ++trial) {
    int r = 2 + int(rng() % 3);
    Eigen::MatrixXd g = random_spd(rng, r);
    double bound = 3.0 * r;
    auto list1 = enumerate_short_vectors(g, bound);
    auto list2 = enumerate_short_vectors(g, bound);
    CHECK(list1 == list2);

    // One representative per +-pair, top nonzero coordinate positive, and the
    // count kernel sees exactly the same set plus the origin.
    std::set<std::vector<long long>> seen;
    for (const auto& v : list1) {
      int top = r - 1;
      while (top >= 0 && v[top] == 0) --top;
      REQUIRE(top >= 0);
      CHECK(v[top] > 0);
      std::vector<long long> neg(v);
      for (auto& c : neg) c = -c;
      CHECK(seen.count(neg) == 0);
      CHECK(seen.insert(v).second);
    }
    CHECK(2 * list1.size() + 1 == count_short_vectors(g, bound).count);
  }
}
