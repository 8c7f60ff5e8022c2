#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "oracles.hpp"
#include "sliceop/errors.hpp"
#include "sliceop/gauss.hpp"

using namespace sliceop;

TEST_CASE("one-point rules") {
  Domain d = Domain::disk_slice(0.25, 0.75);
  SUBCASE("constant weight on (-1,1): midpoint and mass") {
    RecurrenceTable t = jacobi_recurrence(-1, 1, 0, 0, 4);
    GaussRule r = gauss_rule(t, 1);
    CHECK(r.nodes[0] == doctest::Approx(0.0));
    CHECK(r.weights[0] == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("any weight: the measure mean") {
    RecurrenceTable t = bootstrap_recurrence(WeightSpec::r_weight(d, 1, 1, 3), 6);
    GaussRule r = gauss_rule(t, 1);
    CHECK(r.nodes[0] == doctest::Approx(t.alpha[0]).epsilon(1e-14));
    CHECK(r.weights[0] == doctest::Approx(t.omega).epsilon(1e-14));
  }
}

TEST_CASE("rule invariants") {
  Domain d = Domain::trapezium(0.5);
  RecurrenceTable t = bootstrap_recurrence(WeightSpec::r_weight(d, 1, 2, 3), 34);
  GaussRule r = gauss_rule(t, 25);
  double sum = 0;
  for (int i = 0; i < 25; ++i) {
    CHECK(r.nodes[i] > 0.0);
    CHECK(r.nodes[i] < 1.0);
    if (i) CHECK(r.nodes[i] > r.nodes[i - 1]);
    CHECK(r.weights[i] > 0);
    sum += r.weights[i];
  }
  CHECK(std::abs(sum - t.omega) <= 1e-13 * t.omega);
}

TEST_CASE("monomials up to degree 2M-1 are exact") {
  Domain d = Domain::disk_slice(0.25, 0.75);
  WeightSpec w = WeightSpec::r_weight(d, 1, 1, 3);
  RecurrenceTable t = bootstrap_recurrence(w, 26);
  const int M = 20;
  GaussRule r = gauss_rule(t, M);
  double worst = 0;
  for (int k = 0; k <= 2 * M - 1; ++k) {
    const double got = inner_product(r, [k](double x) { return std::pow(x, k); },
                                     [](double) { return 1.0; });
    const double want =
        (double)oracles::weighted_integral(w, [k](long double x) { return std::pow(x, (long double)k); });
    worst = std::max(worst, std::abs(got - want) / std::abs(want));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("exactness degree is sharp") {
  // small M so the first missed degree leaves a resolvable error on a
  // narrow interval
  Domain d = Domain::disk_slice(0.25, 0.75);
  WeightSpec w = WeightSpec::r_weight(d, 1, 1, 3);
  RecurrenceTable t = bootstrap_recurrence(w, 8);
  const int M = 4;
  GaussRule r = gauss_rule(t, M);
  for (int k = 0; k <= 2 * M - 1; ++k) {
    const double got = inner_product(r, [k](double x) { return std::pow(x, k); },
                                     [](double) { return 1.0; });
    const double want =
        (double)oracles::weighted_integral(w, [k](long double x) { return std::pow(x, (long double)k); });
    CHECK(std::abs(got - want) / std::abs(want) <= 1e-12);
  }
  const double got = inner_product(r, [M](double x) { return std::pow(x, 2 * M); },
                                   [](double) { return 1.0; });
  const double want = (double)oracles::weighted_integral(
      w, [M](long double x) { return std::pow(x, (long double)(2 * M)); });
  CHECK(std::abs(got - want) / std::abs(want) > 1e-11);
}

TEST_CASE("orthonormality through the rule") {
  Domain d = Domain::disk_slice(0.25, 0.75);
  RecurrenceTable t = bootstrap_recurrence(WeightSpec::r_weight(d, 1, 1, 5), 30);
  GaussRule r = gauss_rule(t, 24);
  for (int m = 0; m <= 20; ++m)
    for (int n = m; n <= 20; ++n) {
      const double ip = inner_product(r, [&](double x) { return t.eval(m, x); },
                                      [&](double x) { return t.eval(n, x); });
      if (m == n)
        CHECK(std::abs(ip - t.omega) <= 1e-12 * t.omega);
      else
        CHECK(std::abs(ip) <= 1e-12 * t.omega);
    }
}

TEST_CASE("inner product basics") {
  Domain d = Domain::end_disk_slice(0.2);
  RecurrenceTable t = bootstrap_recurrence(WeightSpec::r_weight(d, 0, 2, 3), 12);
  GaussRule r = gauss_rule(t, 10);
  auto one = [](double) { return 1.0; };
  CHECK(inner_product(r, one, one) == doctest::Approx(t.omega).epsilon(1e-14));
  const double z = inner_product(r, [&](double x) { return t.eval(3, x); },
                                 [&](double x) { return t.eval(5, x); });
  CHECK(std::abs(z) <= 1e-13 * t.omega);
}

TEST_CASE("insufficient table is an error") {
  RecurrenceTable t = jacobi_recurrence(-1, 1, 0, 0, 5);
  CHECK_THROWS_AS(gauss_rule(t, 5), std::invalid_argument);
  CHECK_NOTHROW(gauss_rule(t, 4));
}
