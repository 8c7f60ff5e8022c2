#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "oracles.hpp"
#include "sliceop/transform.hpp"

using namespace sliceop;

namespace {
const Domain kDisk = Domain::disk_slice(0.25, 0.75);

Workspace& disk_ws() {
  static Workspace ws(kDisk);
  return ws;
}
}  // namespace

TEST_CASE("node counts follow the half-degree square law") {
  Workspace& ws = disk_ws();
  const BasisParams p = disk_slice_params(1, 1, 1);
  for (int N : {5, 9, 14}) {
    QuadRule2D rule = quad_rule_2d(ws, p, N);
    const int half = (N + 2) / 2;
    CHECK(rule.size() == half * half);
    if (N == 9) CHECK(rule.size() == 25);
    CHECK(rule.reflect);
    for (int q = 0; q < rule.size(); ++q) {
      CHECK(rule.w[q] > 0);
      CHECK(ws.domain().contains_closure(rule.x[q], rule.y[q], 1e-14));
      CHECK(ws.domain().contains_closure(rule.x[q], -rule.y[q], 1e-14));
    }
  }
}

TEST_CASE("total mass equals the product of univariate masses") {
  Workspace& ws = disk_ws();
  const BasisParams p = disk_slice_params(1, 1, 1);
  QuadRule2D rule = quad_rule_2d(ws, p, 8);
  const double got = rule.integrate([](double, double) { return 1.0; });
  const double wR = (double)oracles::weighted_integral(WeightSpec::r_weight(kDisk, 1, 1, 3),
                                                       [](long double) { return 1.0L; });
  const double wP = (double)oracles::weighted_integral(WeightSpec::p_weight(kDisk, 1, 1),
                                                       [](long double) { return 1.0L; });
  CHECK(got == doctest::Approx(wR * wP).epsilon(1e-13));
}

TEST_CASE("odd functions integrate to exactly zero on disk-like domains") {
  Workspace& ws = disk_ws();
  QuadRule2D rule = quad_rule_2d(ws, disk_slice_params(1, 1, 1), 11);
  CHECK(rule.integrate([](double, double y) { return y; }) == 0.0);
  CHECK(rule.integrate([](double x, double y) { return y * std::exp(x * y * y); }) == 0.0);
}

TEST_CASE("monomial exactness sweep against the analytic oracle") {
  struct Case {
    Domain dom;
    BasisParams p;
  };
  const Case cases[] = {
      {kDisk, disk_slice_params(1, 1, 1)},
      {Domain::end_disk_slice(0.2), end_disk_slice_params(1, 1)},
      {Domain::trapezium(0.5), trapezium_params(1, 1, 1, 1)},
  };
  const int N = 14;
  for (const auto& cs : cases) {
    Workspace ws(cs.dom);
    QuadRule2D rule = quad_rule_2d(ws, cs.p, N);
    for (int p = 0; p + 0 <= N; ++p)
      for (int q = 0; p + q <= N; ++q) {
        const double got =
            rule.integrate([&](double x, double y) { return std::pow(x, p) * std::pow(y, q); });
        const double want = oracles::monomial_weighted_integral_2d(cs.dom, cs.p, p, q);
        if (want == 0.0)
          CHECK(std::abs(got) <= 1e-15);
        else
          CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
      }
  }
}

TEST_CASE("analyze projects exactly onto basis members") {
  Workspace& ws = disk_ws();
  const BasisParams p = disk_slice_params(1, 1, 1);
  SUBCASE("the constant function") {
    BlockVector c = analyze(ws, p, [](double, double) { return 1.0; }, 6);
    CHECK(c(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
    for (int i = 1; i < c.size(); ++i) CHECK(std::abs(c[i]) <= 1e-13);
  }
  SUBCASE("one basis member") {
    auto& ctx = ws.basis(p);
    ctx.ensure_degree(8);
    BlockVector c = analyze(ws, p, [&](double x, double y) { return ctx.eval_one(2, 1, x, y); }, 8);
    for (int n = 0; n <= 8; ++n)
      for (int k = 0; k <= n; ++k) {
        const double want = (n == 2 && k == 1) ? 1.0 : 0.0;
        CHECK(std::abs(c(n, k) - want) <= 1e-12);
      }
  }
}

TEST_CASE("analyze and synthesize round-trip a smooth function") {
  Workspace& ws = disk_ws();
  auto f = [](double x, double y) { return std::exp(x + y); };
  BlockVector c = analyze(ws, disk_slice_params(1, 1, 1), f, 25);
  double worst = 0;
  for (auto [x, y] : oracles::interior_points(kDisk, 200, 1234))
    worst = std::max(worst, std::abs(synthesize_at(ws, c, x, y) - f(x, y)));
  CHECK(worst <= 1e-10);
}

TEST_CASE("energy identity for polynomial expansions") {
  Workspace& ws = disk_ws();
  const BasisParams p = disk_slice_params(1, 1, 1);
  const int N = 10;
  auto f = [](double x, double y) {
    return (1 + 2 * x) * (y * y - 0.3 * x) + 0.25 * std::pow(x - y, 4);
  };
  BlockVector c = analyze(ws, p, f, N);
  QuadRule2D rule = quad_rule_2d(ws, p, 2 * N);
  const double lhs = rule.integrate([&](double x, double y) { return f(x, y) * f(x, y); });
  double rhs = 0;
  auto& ctx = ws.basis(p);
  for (int n = 0; n <= N; ++n)
    for (int k = 0; k <= n; ++k) rhs += c(n, k) * c(n, k) * ctx.norm2(n, k);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("weighted synthesis carries the weight and its gradient") {
  Workspace& ws = disk_ws();
  const BasisParams p = disk_slice_params(1, 1, 1);
  auto g = [](double x, double y) { return std::exp(x) * (1 + y); };
  BlockVector c = analyze(ws, p, g, 16).with_weighted_tag(true);
  const double h = 1e-6;
  for (auto [x, y] : oracles::interior_points(kDisk, 20, 321)) {
    const double w = weight_2d(kDisk, p, x, y);
    CHECK(synthesize_at(ws, c, x, y) == doctest::Approx(w * g(x, y)).epsilon(1e-10));
    auto grad = synthesize_gradient_at(ws, c, x, y);
    const double fdx = (synthesize_at(ws, c, x + h, y) - synthesize_at(ws, c, x - h, y)) / (2 * h);
    const double fdy = (synthesize_at(ws, c, x, y + h) - synthesize_at(ws, c, x, y - h)) / (2 * h);
    CHECK(grad[0] == doctest::Approx(w * g(x, y)).epsilon(1e-10));
    CHECK(grad[1] == doctest::Approx(fdx).epsilon(1e-5));
    CHECK(grad[2] == doctest::Approx(fdy).epsilon(1e-5));
  }
}

TEST_CASE("points outside the closure raise a domain error") {
  Workspace& ws = disk_ws();
  BlockVector c(BasisId{kDisk, disk_slice_params(1, 1, 1), false}, 3);
  c(0, 0) = 1;
  CHECK_THROWS_AS(synthesize_at(ws, c, 0.5, 0.95), std::domain_error);
  CHECK_THROWS_AS(synthesize_at(ws, c, 0.1, 0.0), std::domain_error);
  CHECK_NOTHROW(synthesize_at(ws, c, 0.5, std::sqrt(1 - 0.25) - 1e-13));
}
