#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "hnpoly/enumeration.hpp"  // BudgetError
#include "hnpoly/graded.hpp"
#include "hnpoly/measure.hpp"
#include "hnpoly/polygon.hpp"

using namespace hnpoly;

namespace {

GradedModel monomial10() { return MonomialModel{{1.0, 0.0}, {}}; }

GradedModel toric_tent() {
  return ToricModel{ConcaveProfile::from_points({{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.0}})};
}

}  // namespace

TEST_CASE("monomial scaled measures by hand") {
  // Two variables with weights (1, 0): degree 2 has basis x^2, xy, y^2 with
  // values 2, 1, 0, scaled to atoms at 1, 1/2, 0 of mass 1/3 each.
  AtomicMeasure nu = graded_measure(monomial10(), 2);
  REQUIRE(nu.atoms().size() == 3);
  CHECK(nu.atoms()[0].position == doctest::Approx(0.0));
  CHECK(nu.atoms()[1].position == doctest::Approx(0.5));
  CHECK(nu.atoms()[2].position == doctest::Approx(1.0));
  for (const Atom& a : nu.atoms()) CHECK(a.mass == Rational(1, 3));

  // One variable: every degree is a Dirac at the weight.
  AtomicMeasure single = graded_measure(MonomialModel{{0.7}, {}}, 5);
  REQUIRE(single.atoms().size() == 1);
  CHECK(single.atoms()[0].position == doctest::Approx(0.7));
  CHECK(single.atoms()[0].mass == Rational(1));
}

TEST_CASE("toric scaled measure by hand") {
  // Tent profile at n = 4: values 4*phi(i/4) = {0,1,2,1,0}, scaled {0,.25,.5},
  // with masses 2/5, 2/5, 1/5.
  AtomicMeasure nu = graded_measure(toric_tent(), 4);
  REQUIRE(nu.atoms().size() == 3);
  CHECK(nu.atoms()[0].position == doctest::Approx(0.0));
  CHECK(nu.atoms()[0].mass == Rational(2, 5));
  CHECK(nu.atoms()[1].position == doctest::Approx(0.25));
  CHECK(nu.atoms()[1].mass == Rational(2, 5));
  CHECK(nu.atoms()[2].position == doctest::Approx(0.5));
  CHECK(nu.atoms()[2].mass == Rational(1, 5));
}

TEST_CASE("graded pieces are probability measures with bounded support") {
  for (long long n : {1, 3, 10, 57}) {
    AtomicMeasure nu = graded_measure(monomial10(), n);
    CHECK(nu.total_mass() == Rational(1));
    CHECK(nu.atoms().front().position >= -1e-12);
    CHECK(nu.atoms().back().position <= 1.0 + 1e-12);

    AtomicMeasure tm = graded_measure(toric_tent(), n);
    CHECK(tm.total_mass() == Rational(1));
    CHECK(tm.atoms().back().position <= 0.5 + 1e-12);
  }
}

TEST_CASE("scaled measures converge to the limit") {
  // Monomial (1,0): the limit is uniform on [0,1].
  AtomicMeasure lim = limit_measure(monomial10(), 512);
  CHECK(lim.total_mass() == Rational(1));
  AtomicMeasure nu200 = graded_measure(monomial10(), 200);
  CHECK(w1_distance(nu200, lim) <= 2.0 / 200 + 1.0 / 512);

  // Cauchy behaviour of the scaled sequence itself.
  for (long long n : {25, 50, 100}) {
    CHECK(w1_distance(graded_measure(monomial10(), n),
                      graded_measure(monomial10(), 2 * n)) <= 2.0 / n);
    CHECK(w1_distance(graded_measure(toric_tent(), n),
                      graded_measure(toric_tent(), 2 * n)) <= 2.0 / n);
  }

  // One variable: the limit is exactly a Dirac.
  AtomicMeasure dl = limit_measure(MonomialModel{{0.3}, {}});
  REQUIRE(dl.atoms().size() == 1);
  CHECK(dl.atoms()[0].position == doctest::Approx(0.3));

  // Constant toric profile: all quantiles coincide.
  AtomicMeasure cl = limit_measure(ToricModel{ConcaveProfile::constant(0.8)});
  REQUIRE(cl.atoms().size() == 1);
  CHECK(cl.atoms()[0].position == doctest::Approx(0.8));

  // Tied distinct weights are rejected rather than silently mis-inverted.
  CHECK_THROWS_AS(limit_measure(MonomialModel{{1.0, 1.0, 0.0}, {}}),
                  std::invalid_argument);
}

TEST_CASE("lambda sequences") {
  std::vector<LambdaRow> rows = lambda_sequences(monomial10(), 200);
  REQUIRE(rows.size() == 200);
  for (const LambdaRow& r : rows) {
    CHECK(r.lambda_max_over_n == doctest::Approx(1.0));  // top monomial x^n
    CHECK(r.lambda_plus_over_n >= -1e-12);
    CHECK(r.lambda_plus_over_n <= r.lambda_max_over_n + 1e-12);
  }
  // Positive parts average to n/2 exactly for this model.
  CHECK(rows[199].lambda_plus_over_n == doctest::Approx(0.5).epsilon(0.01));
  // Consecutive scaled values form a Cauchy sequence.
  for (std::size_t n : {25u, 50u, 100u})
    CHECK(std::abs(rows[n - 1].lambda_plus_over_n - rows[2 * n - 1].lambda_plus_over_n) <=
          1.0 / n);

  // All-negative weights: nothing has a positive value.
  std::vector<LambdaRow> neg = lambda_sequences(MonomialModel{{-1.0, -2.0}, {}}, 20);
  for (const LambdaRow& r : neg) {
    CHECK(r.lambda_plus_over_n == 0.0);
    CHECK(r.lambda_max_over_n <= -1.0 + 1e-12);
  }
}

TEST_CASE("bigness check") {
  BignessReport pos = bigness_check(monomial10(), 80);
  CHECK(pos.lambda_max_positive == Trend::positive);
  CHECK(pos.lambda_plus_positive == Trend::positive);
  CHECK(pos.consistent);
  CHECK(pos.lambda_max_estimate == doctest::Approx(1.0));

  BignessReport neg = bigness_check(MonomialModel{{-1.0, -2.0}, {}}, 80);
  CHECK(neg.lambda_max_positive == Trend::nonpositive);
  CHECK(neg.lambda_plus_positive == Trend::nonpositive);
  CHECK(neg.consistent);

  // Mixed weights still give positive invariants.
  BignessReport mixed = bigness_check(MonomialModel{{3.0, -1.0}, {}}, 80);
  CHECK(mixed.lambda_max_positive == Trend::positive);
  CHECK(mixed.lambda_plus_positive == Trend::positive);
  CHECK(mixed.lambda_max_estimate == doctest::Approx(3.0));
}

TEST_CASE("counting bound") {
  CountingBound cb = counting_bound(2, 1.0, 1.0, 10);
  CHECK(cb.u_n == 6);
  CHECK(cb.v_n == 11);
  CHECK(cb.ratio == doctest::Approx(6.0 / 11.0));
  CHECK(cb.limit == doctest::Approx(0.5));

  CHECK(counting_bound(3, 2.0, 1.0, 100).limit == doctest::Approx(4.0 / 9.0));

  for (auto [q, alpha, beta] : std::vector<std::tuple<int, double, double>>{
           {2, 1.0, 1.0}, {2, 2.0, 3.0}, {3, 2.0, 1.0}}) {
    CountingBound big = counting_bound(q, alpha, beta, 10'000);
    CHECK(std::abs(big.ratio - big.limit) <= 1e-3);
  }

  CHECK_THROWS_AS(counting_bound(1, 1.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(counting_bound(2, 0.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(counting_bound(2, 1.0, -1.0, 10), std::invalid_argument);
}

TEST_CASE("quasi-filtration audit") {
  // Monomial values are exactly additive: no violations, zero worst margin.
  AuditReport mono = quasi_filtration_audit(monomial10(), 12);
  CHECK(mono.violations == 0);
  CHECK(mono.worst_margin >= -1e-12);
  CHECK(mono.worst_margin <= 1e-12);

  // Concave toric profiles are superadditive; this size is checked in full.
  AuditReport tor = quasi_filtration_audit(toric_tent(), 12);
  CHECK(tor.exhaustive);
  CHECK(tor.violations == 0);
  CHECK(tor.worst_margin >= -1e-12);

  // A convex vee profile must be flagged.
  GradedModel vee = ToricModel{
      ConcaveProfile::unchecked({{0.0, 0.0}, {0.5, -0.5}, {1.0, 0.0}})};
  AuditReport bad = quasi_filtration_audit(vee, 8);
  CHECK(bad.violations > 0);
  CHECK(bad.worst_margin < 0.0);

  // Sampled mode is deterministic in the seed.
  AuditReport s1 = quasi_filtration_audit(monomial10(), 60, 500, 42);
  AuditReport s2 = quasi_filtration_audit(monomial10(), 60, 500, 42);
  CHECK_FALSE(s1.exhaustive);
  CHECK(s1.pairs_checked == s2.pairs_checked);
  CHECK(s1.violations == s2.violations);
  CHECK(s1.worst_margin == s2.worst_margin);
  CHECK(s1.violations == 0);
}

TEST_CASE("dimension budget") {
  // Three variables: dim of degree n grows quadratically; a tiny budget trips.
  GradedModel q3 = MonomialModel{{1.0, 0.5, 0.0}, {}};
  CHECK_THROWS_AS(graded_piece(q3, 4000, 100), BudgetError);
  CHECK_NOTHROW(graded_piece(q3, 50, 1'000'000));
}
