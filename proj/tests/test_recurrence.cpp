#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "oracles.hpp"
#include "sliceop/errors.hpp"
#include "sliceop/gauss.hpp"
#include "sliceop/recurrence.hpp"

using namespace sliceop;

namespace {
// frozen from the modified-Gram-Schmidt oracle (long double, CGS2 over a
// composite Gauss-Jacobi discretization) for (0.75-x)(x-0.25)sqrt(1-x^2)
// on (0.25, 0.75)
constexpr double kFrozenOmega = 0.017836584633716169;
constexpr double kFrozen[11][2] = {
    {0.49135621086775866, 0.1107167799437037},
    {0.49830764319490573, 0.11928181738117347},
    {0.4994651097835448, 0.1219041040872173},
    {0.49976599780182612, 0.12305285495319394},
    {0.49987625287170234, 0.12366065243310538},
    {0.49992644793542679, 0.12402179303505835},
    {0.49995267877477473, 0.1242540390886792},
    {0.49996774706619179, 0.12441227373420566},
    {0.49997702643980763, 0.12452495086118959},
    {0.49998305546324112, 0.12460803931428777},
    {0.49998714353633145, 0.12467107076955455},
};
}  // namespace

TEST_CASE("symmetric weight has vanishing alpha") {
  Domain d = Domain::disk_slice(0.25, 0.75);
  RecurrenceTable t = bootstrap_recurrence(WeightSpec::p_weight(d, 0, 0), 16);
  for (int n = 0; n < 16; ++n) CHECK(std::abs(t.alpha[n]) <= 1e-14);
  CHECK(t.omega == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("constant weight on a subinterval centers at the midpoint") {
  Domain d = Domain::disk_slice(0.25, 0.75);
  RecurrenceTable t = bootstrap_recurrence(WeightSpec::r_weight(d, 0, 0, 0), 8);
  CHECK(t.alpha[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("bootstrap matches the Gram-Schmidt oracle (frozen values)") {
  Domain d = Domain::disk_slice(0.25, 0.75);
  RecurrenceTable t = bootstrap_recurrence(WeightSpec::r_weight(d, 1, 1, 1), 12);
  CHECK(std::abs(t.omega - kFrozenOmega) <= 1e-13);
  for (int n = 0; n <= 10; ++n) {
    CHECK(std::abs(t.alpha[n] - kFrozen[n][0]) <= 1e-11);
    CHECK(std::abs(t.beta[n] - kFrozen[n][1]) <= 1e-11);
  }
}

TEST_CASE("bootstrap matches the oracle on the other geometries") {
  SUBCASE("half disk (endpoint square root)") {
    Domain d = Domain::end_disk_slice(0.2);
    WeightSpec w = WeightSpec::r_weight(d, 0, 1, 3);
    RecurrenceTable t = bootstrap_recurrence(w, 10);
    auto ref = oracles::mgs_recurrence(w, 10);
    for (int n = 0; n < 10; ++n) {
      CHECK(std::abs(t.alpha[n] - ref.alpha[n]) <= 1e-11);
      CHECK(std::abs(t.beta[n] - ref.beta[n]) <= 1e-11);
    }
  }
  SUBCASE("trapezium (affine rho)") {
    Domain d = Domain::trapezium(0.5);
    WeightSpec w = WeightSpec::r_weight(d, 1, 2, 3);
    RecurrenceTable t = bootstrap_recurrence(w, 10);
    auto ref = oracles::mgs_recurrence(w, 10);
    for (int n = 0; n < 10; ++n) {
      CHECK(std::abs(t.alpha[n] - ref.alpha[n]) <= 1e-11);
      CHECK(std::abs(t.beta[n] - ref.beta[n]) <= 1e-11);
    }
  }
}

TEST_CASE("coefficients are stable under a different discretization path") {
  Domain d = Domain::disk_slice(0.25, 0.75);
  WeightSpec w = WeightSpec::r_weight(d, 1, 1, 3);
  RecurrenceTable a = bootstrap_recurrence(w, 20);
  RecurrenceTable b = bootstrap_recurrence(w, 60);  // different starting rule size
  for (int n = 0; n < 20; ++n) {
    CHECK(std::abs(a.alpha[n] - b.alpha[n]) <= 1e-12);
    CHECK(std::abs(a.beta[n] - b.beta[n]) <= 1e-12);
  }
}

TEST_CASE("bootstrap spectrum containment and positivity") {
  Domain d = Domain::trapezium(0.5);
  RecurrenceTable t = bootstrap_recurrence(WeightSpec::r_weight(d, 2, 1, 4), 30);
  for (int n = 0; n < 30; ++n) {
    CHECK(t.beta[n] > 0);
    CHECK(t.alpha[n] > 0.0);
    CHECK(t.alpha[n] < 1.0);
  }
}

TEST_CASE("non-integrable weights are rejected") {
  WeightSpec w;
  w.lo = 0;
  w.hi = 1;
  w.exp_hi = -1.0;
  CHECK_THROWS_AS(bootstrap_recurrence(w, 4), std::invalid_argument);
}

TEST_CASE("endpoint lift base case") {
  Domain d = Domain::disk_slice(0.25, 0.75);
  RecurrenceTable t = bootstrap_recurrence(WeightSpec::r_weight(d, 1, 1, 1), 6);
  const double chi0 = (1.0 - t.alpha[0]) / t.beta[0];
  RecurrenceTable up = lift_endpoint(t, Endpoint::PlusOne);
  CHECK(up.alpha[0] == doctest::Approx(t.alpha[0] - t.beta[0] / chi0).epsilon(1e-14));
  CHECK(up.omega == doctest::Approx(t.omega * (1.0 - t.alpha[0])).epsilon(1e-14));
  CHECK(up.size() == t.size() - 1);
  RecurrenceTable dn = lift_endpoint(t, Endpoint::MinusOne);
  CHECK(dn.omega == doctest::Approx(t.omega * (1.0 + t.alpha[0])).epsilon(1e-14));
}

TEST_CASE("double lift equals bootstrap at the raised weight") {
  Domain d = Domain::disk_slice(0.25, 0.75);
  RecurrenceTable base = bootstrap_recurrence(WeightSpec::r_weight(d, 1, 1, 1), 44);
  RecurrenceTable up = lift_endpoint(lift_endpoint(base, Endpoint::PlusOne), Endpoint::MinusOne);
  RecurrenceTable direct = bootstrap_recurrence(WeightSpec::r_weight(d, 1, 1, 3), 42);
  CHECK(up.weight == direct.weight);
  CHECK(std::abs(up.omega - direct.omega) <= 1e-12 * direct.omega);
  for (int n = 0; n < 40; ++n) {
    CHECK(std::abs(up.alpha[n] - direct.alpha[n]) <= 1e-10);
    CHECK(std::abs(up.beta[n] - direct.beta[n]) <= 1e-10);
  }
}

TEST_CASE("repeated double lifts stay orthonormal (Gram audit)") {
  Domain d = Domain::disk_slice(0.25, 0.75);
  RecurrenceTable t = bootstrap_recurrence(WeightSpec::r_weight(d, 1, 1, 1), 52);
  for (int k = 0; k < 3; ++k)
    t = lift_endpoint(lift_endpoint(t, Endpoint::PlusOne), Endpoint::MinusOne);
  // t now represents rho-exponent 7; the Gram quadrature comes from an
  // independent direct bootstrap of that weight
  const int n_audit = 40;
  RecurrenceTable direct = bootstrap_recurrence(t.weight, n_audit + 2);
  GaussRule rule = gauss_rule(direct, n_audit + 1);
  std::vector<double> pa(n_audit + 1);
  std::vector<std::vector<double>> vals(rule.size(), std::vector<double>(n_audit + 1));
  for (int q = 0; q < rule.size(); ++q) t.eval_all(n_audit, rule.nodes[q], vals[q]);
  double worst = 0;
  for (int a = 0; a <= n_audit; ++a)
    for (int b = a; b <= n_audit; ++b) {
      double g = 0;
      for (int q = 0; q < rule.size(); ++q) g += rule.weights[q] * vals[q][a] * vals[q][b];
      worst = std::max(worst, std::abs(g / t.omega - (a == b ? 1.0 : 0.0)));
    }
  CHECK(worst <= 1e-10);
}

TEST_CASE("disk weights canonicalize to the interim four-parameter form") {
  Domain d = Domain::disk_slice(0.25, 0.75);
  CHECK(WeightSpec::r_weight(d, 1, 2, 3) == WeightSpec::interim(d, 1, 2, 1.5, 1.5));
  Domain h = Domain::end_disk_slice(0.2);
  WeightSpec w = WeightSpec::r_weight(h, 0, 2, 3);
  CHECK(w.exp_hi == 1.5);  // (1-x) carries the rho power at beta = 1
  CHECK(w.exp_opx == 1.5);
  CHECK(w.exp_lo == 2.0);
}

TEST_CASE("lift ratio recurrence stays far from breakdown for subintervals") {
  Domain d = Domain::disk_slice(0.25, 0.75);
  RecurrenceTable t = bootstrap_recurrence(WeightSpec::r_weight(d, 1, 1, 1), 44);
  for (double y : {1.0, -1.0}) {
    double chi = (y - t.alpha[0]) / t.beta[0];
    for (int n = 1; n < 42; ++n) {
      CHECK(std::abs(chi) > 1e-10);
      chi = (y - t.alpha[n] - t.beta[n - 1] / chi) / t.beta[n];
    }
  }
}

TEST_CASE("evaluation basics") {
  Domain d = Domain::disk_slice(0.25, 0.75);
  RecurrenceTable t = bootstrap_recurrence(WeightSpec::r_weight(d, 1, 1, 3), 12);
  CHECK(t.eval(0, 0.4) == 1.0);
  CHECK(t.eval(1, 0.4) == doctest::Approx((0.4 - t.alpha[0]) / t.beta[0]).epsilon(1e-15));
  double v, dv;
  t.eval_with_derivative(1, 0.4, v, dv);
  CHECK(dv == doctest::Approx(1.0 / t.beta[0]).epsilon(1e-14));
  std::vector<double> all(13);
  t.eval_all(12, 0.4, all);
  CHECK(all[12] == doctest::Approx(t.eval(12, 0.4)).epsilon(1e-14));
}
